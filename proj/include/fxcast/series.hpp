#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fxcast {

/// A univariate series of real observations over strictly increasing
/// integer period indices. Labels (e.g. "1971-01") are optional and, when
/// present, parallel the values one-to-one. Immutable after construction.
class Series {
public:
	/// Values with implicit period indices 1..n.
	explicit Series(std::vector<double> values);

	Series(std::vector<std::int64_t> index, std::vector<double> values,
	       std::vector<std::string> labels = {});

	std::size_t size() const { return values_.size(); }
	const std::vector<double> &values() const { return values_; }
	const std::vector<std::int64_t> &index() const { return index_; }
	const std::vector<std::string> &labels() const { return labels_; }
	bool has_labels() const { return !labels_.empty(); }

	double value(std::size_t pos) const { return values_[pos]; }

	/// Contiguous sub-series [first, first+count), keeping indices/labels.
	Series slice(std::size_t first, std::size_t count) const;

private:
	std::vector<std::int64_t> index_;
	std::vector<double> values_;
	std::vector<std::string> labels_;
};

/// In-sample fitted values plus out-of-sample forecasts for one method.
/// `fitted` is aligned to the training series starting at 1-based period
/// `fitted_start` (methods that need warm-up history begin later than 1).
struct ForecastResult {
	std::string method_id;
	std::vector<double> fitted;
	int fitted_start = 1;
	std::vector<double> forecasts;
};

/// The four holdout evaluation metrics. mapfe and da are percentages.
struct EvalReport {
	double mafe = 0.0;
	double rmsfe = 0.0;
	double mapfe = 0.0;
	double da = 0.0;
};

/// Split off the last horizon+1 points as the holdout set.
/// Requires horizon + 1 <= n - 2 so at least two training points remain.
std::pair<Series, Series> split(const Series &series, std::size_t horizon);

/// Mean absolute forecast error: (1/n) sum |predicted - actual|.
double mafe(std::span<const double> actual, std::span<const double> predicted);

/// Root mean square forecast error: sqrt((1/n) sum (predicted - actual)^2).
double rmsfe(std::span<const double> actual, std::span<const double> predicted);

/// Mean absolute percentage forecast error, in percent. The denominator is
/// the PREDICTED value: (100/n) sum |(predicted - actual)/predicted|.
/// Every predicted value must be nonzero.
double mapfe(std::span<const double> actual, std::span<const double> predicted);

/// Directional accuracy, in percent. `actual` carries one leading
/// pre-period value, so actual.size() == predicted.size() + 1. A step
/// counts as a hit when (X(t)-X(t-1)) * (Xhat(t)-X(t-1)) >= 0; zero change
/// therefore counts as a hit.
double da(std::span<const double> actual, std::span<const double> predicted);

/// All four metrics at once; `actual` includes the leading pre-period value.
EvalReport evaluate(std::span<const double> actual,
                    std::span<const double> predicted);

} // namespace fxcast
