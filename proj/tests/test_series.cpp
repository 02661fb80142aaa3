#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fxcast/series.hpp"

using namespace fxcast;

namespace {

std::vector<double> iota_values(std::size_t n, double start = 1.0) {
	std::vector<double> v(n);
	for (std::size_t i = 0; i < n; ++i) {
		v[i] = start + static_cast<double>(i);
	}
	return v;
}

} // namespace

TEST_CASE("Series: construction and accessors") {
	Series s({2.0, 4.0, 8.0});
	CHECK(s.size() == 3);
	CHECK(s.value(0) == 2.0);
	CHECK(s.index() == std::vector<std::int64_t>{1, 2, 3});
	CHECK_FALSE(s.has_labels());

	Series labeled({10, 20, 30}, {1.0, 2.0, 3.0}, {"1971-01", "1971-02", "1971-03"});
	CHECK(labeled.has_labels());
	CHECK(labeled.labels()[2] == "1971-03");
}

TEST_CASE("Series: invariants are enforced") {
	CHECK_THROWS_AS(Series(std::vector<double>{}), std::invalid_argument);
	CHECK_THROWS_AS(Series({1, 1}, {1.0, 2.0}), std::invalid_argument);
	CHECK_THROWS_AS(Series({2, 1}, {1.0, 2.0}), std::invalid_argument);
	CHECK_THROWS_AS(Series({std::nan("")}), std::invalid_argument);
	CHECK_THROWS_AS(Series({1.0, std::numeric_limits<double>::infinity()}),
	                std::invalid_argument);
	// Labels, when present, must parallel the values.
	CHECK_THROWS_AS(Series({1, 2}, {1.0, 2.0}, {"only-one"}), std::invalid_argument);
}

TEST_CASE("Series: slice keeps indices and labels") {
	Series s({5, 6, 7, 8}, {1.0, 2.0, 3.0, 4.0}, {"a", "b", "c", "d"});
	Series cut = s.slice(1, 2);
	CHECK(cut.size() == 2);
	CHECK(cut.index() == std::vector<std::int64_t>{6, 7});
	CHECK(cut.values() == std::vector<double>{2.0, 3.0});
	CHECK(cut.labels() == std::vector<std::string>{"b", "c"});
	CHECK_THROWS_AS(s.slice(3, 2), std::invalid_argument);
}

TEST_CASE("split: holdout is the last horizon+1 points") {
	Series s(iota_values(10));
	auto [train, test] = split(s, 2);
	CHECK(train.size() == 7);
	CHECK(test.size() == 3);
	// Concatenation reproduces the input.
	std::vector<double> joined = train.values();
	joined.insert(joined.end(), test.values().begin(), test.values().end());
	CHECK(joined == s.values());
	CHECK(test.index().front() == 8);
}

TEST_CASE("split: reference sizing and length guard") {
	Series big(iota_values(456));
	auto [train, test] = split(big, 12);
	CHECK(train.size() == 443);
	CHECK(test.size() == 13);

	Series tiny(iota_values(4));
	CHECK_THROWS_AS(split(tiny, 3), std::invalid_argument);
	// horizon + 1 must leave at least two training points.
	CHECK_THROWS_AS(split(tiny, 2), std::invalid_argument);
	CHECK_NOTHROW(split(tiny, 1));
}

TEST_CASE("mafe: hand cases") {
	const std::vector<double> same{1.0, 2.0, 3.0};
	CHECK(mafe(same, same) == 0.0);
	CHECK(mafe(std::vector<double>{2.0, 4.0}, std::vector<double>{1.0, 2.0}) ==
	      doctest::Approx(1.5).epsilon(1e-12));
	CHECK(mafe(std::vector<double>{1.0}, std::vector<double>{1.25}) ==
	      doctest::Approx(0.25).epsilon(1e-12));
	CHECK_THROWS_AS(mafe(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
	                std::invalid_argument);
	CHECK_THROWS_AS(mafe(std::vector<double>{}, std::vector<double>{}),
	                std::invalid_argument);
}

TEST_CASE("rmsfe: hand cases") {
	const std::vector<double> same{1.0, 2.0};
	CHECK(rmsfe(same, same) == 0.0);
	CHECK(rmsfe(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}) ==
	      doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
	CHECK(rmsfe(std::vector<double>{1.0}, std::vector<double>{3.0}) ==
	      doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("mapfe: divides by the predicted value") {
	const std::vector<double> same{2.0, 5.0};
	CHECK(mapfe(same, same) == 0.0);
	CHECK(mapfe(std::vector<double>{1.0}, std::vector<double>{2.0}) ==
	      doctest::Approx(50.0).epsilon(1e-12));
	CHECK_THROWS_AS(mapfe(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 0.0}),
	                std::invalid_argument);
}

TEST_CASE("da: directional hits including the zero-change boundary") {
	// One forecast point; actual carries the pre-period value in front.
	CHECK(da(std::vector<double>{1.0, 2.0}, std::vector<double>{1.5}) == 100.0);
	CHECK(da(std::vector<double>{1.0, 2.0}, std::vector<double>{0.5}) == 0.0);
	// Flat actual: the product is 0 and counts as a hit.
	CHECK(da(std::vector<double>{1.0, 1.0}, std::vector<double>{47.0}) == 100.0);
	// Second step: predicted rise (2.5 vs 2) against an actual fall (1 vs 2).
	CHECK(da(std::vector<double>{1.0, 2.0, 1.0}, std::vector<double>{1.5, 2.5}) == 50.0);
	CHECK_THROWS_AS(da(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}),
	                std::invalid_argument);
}

TEST_CASE("metrics: zero-error baselines") {
	const std::vector<double> actual{1.2, 3.4, 2.2, 5.0};
	const std::vector<double> with_prev{0.9, 1.2, 3.4, 2.2, 5.0};
	EvalReport report = evaluate(with_prev, actual);
	CHECK(report.mafe == 0.0);
	CHECK(report.rmsfe == 0.0);
	CHECK(report.mapfe == 0.0);
	CHECK(report.da == 100.0);
}

TEST_CASE("evaluate: agrees with the individual metrics") {
	const std::vector<double> with_prev{2.0, 2.1, 2.3, 2.2};
	const std::vector<double> predicted{2.2, 2.25, 2.4};
	const std::span<const double> actual(with_prev.data() + 1, 3);
	EvalReport report = evaluate(with_prev, predicted);
	CHECK(report.mafe == doctest::Approx(mafe(actual, predicted)).epsilon(1e-15));
	CHECK(report.rmsfe == doctest::Approx(rmsfe(actual, predicted)).epsilon(1e-15));
	CHECK(report.mapfe == doctest::Approx(mapfe(actual, predicted)).epsilon(1e-15));
	CHECK(report.da == doctest::Approx(da(with_prev, predicted)).epsilon(1e-15));
}

TEST_CASE("mafe/rmsfe: invariant under simultaneous permutation") {
	std::mt19937 gen(17);
	std::uniform_real_distribution<double> unif(-5.0, 5.0);
	std::vector<double> actual(40), predicted(40);
	for (std::size_t i = 0; i < actual.size(); ++i) {
		actual[i] = unif(gen);
		predicted[i] = unif(gen);
	}
	std::vector<std::size_t> order(actual.size());
	for (std::size_t i = 0; i < order.size(); ++i) {
		order[i] = i;
	}
	std::shuffle(order.begin(), order.end(), gen);
	std::vector<double> actual_p(actual.size()), predicted_p(actual.size());
	for (std::size_t i = 0; i < order.size(); ++i) {
		actual_p[i] = actual[order[i]];
		predicted_p[i] = predicted[order[i]];
	}
	CHECK(mafe(actual, predicted) ==
	      doctest::Approx(mafe(actual_p, predicted_p)).epsilon(1e-12));
	CHECK(rmsfe(actual, predicted) ==
	      doctest::Approx(rmsfe(actual_p, predicted_p)).epsilon(1e-12));
}

TEST_CASE("rmsfe: squared identity against a direct loop") {
	std::mt19937 gen(4);
	std::uniform_real_distribution<double> unif(-2.0, 2.0);
	std::vector<double> actual(25), predicted(25);
	double ss = 0.0;
	for (std::size_t i = 0; i < actual.size(); ++i) {
		actual[i] = unif(gen);
		predicted[i] = unif(gen);
		const double e = predicted[i] - actual[i];
		ss += e * e;
	}
	const double r = rmsfe(actual, predicted);
	CHECK(r * r * static_cast<double>(actual.size()) ==
	      doctest::Approx(ss).epsilon(1e-12));
}

TEST_CASE("da: invariant under positive affine transformation") {
	std::mt19937 gen(99);
	std::uniform_real_distribution<double> unif(1.0, 3.0);
	std::vector<double> with_prev(13), predicted(12);
	for (double &v : with_prev) {
		v = unif(gen);
	}
	for (double &v : predicted) {
		v = unif(gen);
	}
	const double base = da(with_prev, predicted);
	const double a = 2.5;
	const double b = 7.0;
	std::vector<double> with_prev_t(with_prev.size()), predicted_t(predicted.size());
	for (std::size_t i = 0; i < with_prev.size(); ++i) {
		with_prev_t[i] = a * with_prev[i] + b;
	}
	for (std::size_t i = 0; i < predicted.size(); ++i) {
		predicted_t[i] = a * predicted[i] + b;
	}
	CHECK(da(with_prev_t, predicted_t) == base);
}
