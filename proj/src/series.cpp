#include "fxcast/series.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fxcast {

namespace {

void check_values(const std::vector<double> &values) {
	if (values.empty()) {
		throw std::invalid_argument("series must contain at least one value");
	}
	for (double v : values) {
		if (!std::isfinite(v)) {
			throw std::invalid_argument("series values must be finite");
		}
	}
}

} // namespace

Series::Series(std::vector<double> values) : values_(std::move(values)) {
	check_values(values_);
	index_.resize(values_.size());
	std::iota(index_.begin(), index_.end(), std::int64_t{1});
}

Series::Series(std::vector<std::int64_t> index, std::vector<double> values,
               std::vector<std::string> labels)
    : index_(std::move(index)), values_(std::move(values)),
      labels_(std::move(labels)) {
	check_values(values_);
	if (index_.size() != values_.size()) {
		throw std::invalid_argument("series index and values must have equal length");
	}
	if (!labels_.empty() && labels_.size() != values_.size()) {
		throw std::invalid_argument("series labels must be empty or match values length");
	}
	for (std::size_t i = 1; i < index_.size(); ++i) {
		if (index_[i] <= index_[i - 1]) {
			throw std::invalid_argument("series timestamps must be strictly increasing");
		}
	}
}

Series Series::slice(std::size_t first, std::size_t count) const {
	if (first + count > size() || count == 0) {
		throw std::invalid_argument("series slice out of range");
	}
	std::vector<std::int64_t> idx(index_.begin() + first,
	                              index_.begin() + first + count);
	std::vector<double> vals(values_.begin() + first,
	                         values_.begin() + first + count);
	std::vector<std::string> labs;
	if (!labels_.empty()) {
		labs.assign(labels_.begin() + first, labels_.begin() + first + count);
	}
	return Series(std::move(idx), std::move(vals), std::move(labs));
}

std::pair<Series, Series> split(const Series &series, std::size_t horizon) {
	const std::size_t n = series.size();
	const std::size_t holdout = horizon + 1;
	if (holdout + 2 > n) {
		throw std::invalid_argument("horizon too large for series: need horizon + 3 <= length");
	}
	return {series.slice(0, n - holdout), series.slice(n - holdout, holdout)};
}

namespace {

void check_equal_lengths(std::span<const double> actual,
                         std::span<const double> predicted) {
	if (actual.size() != predicted.size() || actual.empty()) {
		throw std::invalid_argument("actual and predicted must have equal nonzero length");
	}
}

} // namespace

double mafe(std::span<const double> actual, std::span<const double> predicted) {
	check_equal_lengths(actual, predicted);
	double sum = 0.0;
	for (std::size_t i = 0; i < actual.size(); ++i) {
		sum += std::abs(predicted[i] - actual[i]);
	}
	return sum / static_cast<double>(actual.size());
}

double rmsfe(std::span<const double> actual, std::span<const double> predicted) {
	check_equal_lengths(actual, predicted);
	double sum = 0.0;
	for (std::size_t i = 0; i < actual.size(); ++i) {
		const double e = predicted[i] - actual[i];
		sum += e * e;
	}
	return std::sqrt(sum / static_cast<double>(actual.size()));
}

double mapfe(std::span<const double> actual, std::span<const double> predicted) {
	check_equal_lengths(actual, predicted);
	double sum = 0.0;
	for (std::size_t i = 0; i < actual.size(); ++i) {
		if (predicted[i] == 0.0) {
			throw std::invalid_argument("mapfe: predicted value is zero");
		}
		sum += std::abs((predicted[i] - actual[i]) / predicted[i]);
	}
	return 100.0 * sum / static_cast<double>(actual.size());
}

double da(std::span<const double> actual, std::span<const double> predicted) {
	if (actual.size() != predicted.size() + 1 || predicted.empty()) {
		throw std::invalid_argument("da: actual must supply one leading pre-period value");
	}
	std::size_t hits = 0;
	for (std::size_t i = 0; i < predicted.size(); ++i) {
		const double prev = actual[i];
		const double move = actual[i + 1] - prev;
		const double predicted_move = predicted[i] - prev;
		if (move * predicted_move >= 0.0) {
			++hits;
		}
	}
	return 100.0 * static_cast<double>(hits) /
	       static_cast<double>(predicted.size());
}

EvalReport evaluate(std::span<const double> actual,
                    std::span<const double> predicted) {
	EvalReport report;
	const auto current = actual.subspan(1);
	report.mafe = mafe(current, predicted);
	report.rmsfe = rmsfe(current, predicted);
	report.mapfe = mapfe(current, predicted);
	report.da = da(actual, predicted);
	return report;
}

} // namespace fxcast
