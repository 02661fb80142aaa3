#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fxcast/hybrid.hpp"

using namespace fxcast::hybrid;

namespace {

MethodErrors errors_of(std::vector<std::vector<double>> rows) {
	std::vector<std::string> ids(rows.size());
	for (std::size_t i = 0; i < ids.size(); ++i) {
		ids[i] = "m" + std::to_string(i + 1);
	}
	return MethodErrors(std::move(rows), std::move(ids));
}

/// Grey relation degree of the combined error under fixed per-method
/// envelopes, written out independently as the audit oracle.
double combined_gamma(const MethodErrors &errors, const std::vector<double> &w,
                      double rho) {
	double min_abs = std::numeric_limits<double>::infinity();
	double max_abs = 0.0;
	for (const auto &row : errors.e) {
		for (double v : row) {
			min_abs = std::min(min_abs, std::abs(v));
			max_abs = std::max(max_abs, std::abs(v));
		}
	}
	if (max_abs == 0.0) {
		return 1.0;
	}
	double sum = 0.0;
	for (std::size_t t = 0; t < errors.periods(); ++t) {
		double combined = 0.0;
		for (std::size_t j = 0; j < errors.methods(); ++j) {
			combined += w[j] * errors.e[j][t];
		}
		sum += (min_abs + rho * max_abs) / (std::abs(combined) + rho * max_abs);
	}
	return sum / static_cast<double>(errors.periods());
}

} // namespace

TEST_CASE("MethodErrors: shape validation") {
	CHECK_THROWS_AS(MethodErrors({}, {}), std::invalid_argument);
	CHECK_THROWS_AS(errors_of({{1.0}}), std::invalid_argument); // one period
	CHECK_THROWS_AS(errors_of({{1.0, 2.0}, {1.0}}), std::invalid_argument);
	CHECK_THROWS_AS(errors_of({{1.0, std::nan("")}}), std::invalid_argument);
	CHECK_THROWS_AS(MethodErrors({{1.0, 2.0}}, {"a", "b"}), std::invalid_argument);

	const MethodErrors ok = errors_of({{1.0, 2.0}, {0.5, -0.5}});
	CHECK(ok.methods() == 2);
	CHECK(ok.periods() == 2);
}

TEST_CASE("ls_weights: closed forms") {
	// Equal squared error: symmetric split.
	const WeightVector equal = ls_weights(errors_of({{1.0, 1.0}, {-1.0, 1.0}}));
	CHECK(equal.w[0] == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(equal.w[1] == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(equal.scheme == WeightScheme::least_squares);

	// h = [1, 3] -> [0.75, 0.25].
	const WeightVector two = ls_weights(errors_of({{1.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}));
	CHECK(two.w[0] == doctest::Approx(0.75).epsilon(1e-12));
	CHECK(two.w[1] == doctest::Approx(0.25).epsilon(1e-12));

	// h = [1, 2, 4] -> [4/7, 2/7, 1/7].
	const WeightVector three = ls_weights(errors_of(
	    {{1.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}}));
	CHECK(three.w[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
	CHECK(three.w[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
	CHECK(three.w[2] == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

	double sum = 0.0;
	for (double v : three.w) {
		CHECK(v >= 0.0);
		sum += v;
	}
	CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ls_weights: zero-error methods take the whole weight") {
	const WeightVector one_exact =
	    ls_weights(errors_of({{0.0, 0.0}, {1.0, 2.0}}));
	CHECK(one_exact.w[0] == 1.0);
	CHECK(one_exact.w[1] == 0.0);

	const WeightVector two_exact =
	    ls_weights(errors_of({{0.0, 0.0}, {1.0, 2.0}, {0.0, 0.0}}));
	CHECK(two_exact.w[0] == 0.5);
	CHECK(two_exact.w[1] == 0.0);
	CHECK(two_exact.w[2] == 0.5);
}

TEST_CASE("effective_degree: hand evaluations") {
	const std::vector<double> actual{1.0, 1.0};
	const EffectiveDegree perfect = effective_degree(actual, actual);
	CHECK(perfect.mean_e == doctest::Approx(1.0).epsilon(1e-15));
	CHECK(perfect.sd == 0.0);
	CHECK(perfect.s == doctest::Approx(1.0).epsilon(1e-15));

	// Accuracies [1, 0]: E = 0.5, sigma = 0.5*sqrt(0.5), S = E(1-sigma).
	const EffectiveDegree split =
	    effective_degree(actual, std::vector<double>{1.0, 2.0});
	CHECK(split.accuracy[0] == doctest::Approx(1.0).epsilon(1e-15));
	CHECK(split.accuracy[1] == doctest::Approx(0.0).epsilon(1e-15));
	CHECK(split.mean_e == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(split.sd == doctest::Approx(0.5 * std::sqrt(0.5)).epsilon(1e-12));
	CHECK(split.s ==
	      doctest::Approx(0.5 * (1.0 - 0.5 * std::sqrt(0.5))).epsilon(1e-12));

	// Constant accuracy keeps S at that constant.
	const EffectiveDegree flat =
	    effective_degree(actual, std::vector<double>{1.25, 1.25});
	CHECK(flat.sd == doctest::Approx(0.0).epsilon(1e-15));
	CHECK(flat.s == doctest::Approx(0.75).epsilon(1e-12));

	CHECK_THROWS_AS(effective_degree(std::vector<double>{0.0, 1.0}, actual),
	                std::invalid_argument);
	CHECK_THROWS_AS(effective_degree(actual, std::vector<double>{1.0}),
	                std::invalid_argument);
}

TEST_CASE("effective_degree: summary recomputable from the accuracies") {
	std::mt19937 gen(64);
	std::uniform_real_distribution<double> unif(1.0, 2.0);
	std::vector<double> actual(12), combined(12);
	for (std::size_t i = 0; i < actual.size(); ++i) {
		actual[i] = unif(gen);
		combined[i] = unif(gen);
	}
	const EffectiveDegree deg = effective_degree(actual, combined);
	double mean = 0.0;
	for (double a : deg.accuracy) {
		mean += a;
	}
	mean /= static_cast<double>(deg.accuracy.size());
	double ss = 0.0;
	for (double a : deg.accuracy) {
		ss += (a - mean) * (a - mean);
	}
	const double sd = std::sqrt(ss) / static_cast<double>(deg.accuracy.size());
	CHECK(deg.mean_e == doctest::Approx(mean).epsilon(1e-12));
	CHECK(deg.sd == doctest::Approx(sd).epsilon(1e-12));
	CHECK(deg.s == doctest::Approx(mean * (1.0 - sd)).epsilon(1e-12));
	CHECK(deg.s <= deg.mean_e);
}

TEST_CASE("optimize_effective_degree: an exact method takes all the weight") {
	const std::vector<double> actual{2.0, 3.0, 2.5, 2.8};
	const std::vector<std::vector<double>> predictions{
	    {2.0, 3.0, 2.5, 2.8},   // exact
	    {2.5, 2.0, 3.0, 2.0}};  // noisy
	const WeightVector w = optimize_effective_degree(actual, predictions);
	CHECK(w.scheme == WeightScheme::effective_degree);
	CHECK(w.w[0] == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(w.w[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("optimize_effective_degree: identical methods break ties toward the last") {
	const std::vector<double> actual{2.0, 3.0, 2.5};
	// Every method is exact, so the score ties at its maximum across the
	// whole simplex; the lexicographically smallest grid point puts
	// everything on the final method.
	const WeightVector w =
	    optimize_effective_degree(actual, {actual, actual, actual});
	CHECK(w.w == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("optimize_effective_degree: cancelling errors prefer the midpoint") {
	const std::vector<double> actual{2.0, 2.0, 2.0, 2.0};
	std::vector<double> over(actual.size()), under(actual.size());
	for (std::size_t t = 0; t < actual.size(); ++t) {
		over[t] = actual[t] + 0.4;
		under[t] = actual[t] - 0.4;
	}
	const WeightVector w = optimize_effective_degree(actual, {over, under});
	CHECK(std::abs(w.w[0] - 0.5) <= 1e-9);
	CHECK(std::abs(w.w[1] - 0.5) <= 1e-9);
	CHECK_THROWS_AS(optimize_effective_degree(actual, {over}),
	                std::invalid_argument);
	CHECK_THROWS_AS(
	    optimize_effective_degree(std::vector<double>{0.0, 1.0, 1.0, 1.0},
	                              {over, under}),
	    std::invalid_argument);
}

TEST_CASE("optimize_effective_degree: minimize direction is the literal objective") {
	const std::vector<double> actual{2.0, 2.0, 2.0, 2.0};
	std::vector<double> over(actual.size()), under(actual.size());
	for (std::size_t t = 0; t < actual.size(); ++t) {
		over[t] = actual[t] + 0.4;
		under[t] = actual[t] - 0.4;
	}
	const WeightVector lo =
	    optimize_effective_degree(actual, {over, under}, Direction::minimize);
	double sum = 0.0;
	for (double v : lo.w) {
		CHECK(v >= 0.0);
		sum += v;
	}
	CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
	// Minimization avoids the cancellation point that maximization picks.
	CHECK(std::abs(lo.w[0] - 0.5) > 0.1);
}

TEST_CASE("grey_relation_degree: hand case gamma = 5/6") {
	const std::vector<double> gamma =
	    grey_relation_degree(errors_of({{1.0, 2.0}}), 0.5);
	REQUIRE(gamma.size() == 1);
	CHECK(gamma[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("grey_relation_degree: envelope method scores one") {
	// Method 1 sits on the global min envelope everywhere.
	const std::vector<double> gamma =
	    grey_relation_degree(errors_of({{1.0, -1.0}, {2.0, 3.0}}), 0.5);
	CHECK(gamma[0] == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(gamma[1] < 1.0);
	CHECK(gamma[1] > 0.0);
}

TEST_CASE("grey_relation_degree: bounds and degenerate conventions") {
	std::mt19937 gen(12);
	std::uniform_real_distribution<double> unif(-3.0, 3.0);
	std::vector<std::vector<double>> rows(3, std::vector<double>(8));
	for (auto &row : rows) {
		for (double &v : row) {
			v = unif(gen);
		}
	}
	const std::vector<double> gamma = grey_relation_degree(errors_of(rows), 0.5);
	for (double g : gamma) {
		CHECK(g > 0.0);
		CHECK(g <= 1.0 + 1e-15);
	}

	const std::vector<double> zero =
	    grey_relation_degree(errors_of({{0.0, 0.0}, {0.0, 0.0}}), 0.5);
	CHECK(zero == std::vector<double>{1.0, 1.0});

	CHECK_THROWS_AS(grey_relation_degree(errors_of({{1.0, 2.0}}), 0.0),
	                std::invalid_argument);
	CHECK_THROWS_AS(grey_relation_degree(errors_of({{1.0, 2.0}}), 1.0),
	                std::invalid_argument);
}

TEST_CASE("optimize_grey_relation: beats every vertex") {
	std::mt19937 rng(23);
	std::uniform_real_distribution<double> unif(-2.0, 2.0);
	for (int instance = 0; instance < 10; ++instance) {
		const std::size_t m = 2 + static_cast<std::size_t>(instance % 3);
		std::vector<std::vector<double>> rows(m, std::vector<double>(6));
		for (auto &row : rows) {
			for (double &v : row) {
				v = unif(rng);
			}
		}
		const MethodErrors errors = errors_of(rows);
		const std::vector<double> gamma = grey_relation_degree(errors, 0.5);
		const WeightVector w = optimize_grey_relation(errors, 0.5);
		const double at_w = combined_gamma(errors, w.w, 0.5);
		for (double g : gamma) {
			CHECK(at_w >= g - 1e-12);
		}
		double sum = 0.0;
		for (double v : w.w) {
			CHECK(v >= 0.0);
			sum += v;
		}
		CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
	}
}

TEST_CASE("optimize_grey_relation: cancellation lands at the midpoint") {
	const std::vector<double> e1{0.5, -0.75, 1.0, -0.25};
	std::vector<double> e2(e1.size());
	for (std::size_t t = 0; t < e1.size(); ++t) {
		e2[t] = -e1[t];
	}
	const WeightVector w = optimize_grey_relation(errors_of({e1, e2}), 0.5);
	CHECK(std::abs(w.w[0] - 0.5) <= 0.001);
	CHECK(std::abs(w.w[1] - 0.5) <= 0.001);

	CHECK_THROWS_AS(optimize_grey_relation(errors_of({e1}), 0.5),
	                std::invalid_argument);
}

TEST_CASE("optimize_grey_relation: deterministic across repeated runs") {
	std::mt19937 gen(87);
	std::uniform_real_distribution<double> unif(-1.0, 1.0);
	std::vector<std::vector<double>> rows(3, std::vector<double>(7));
	for (auto &row : rows) {
		for (double &v : row) {
			v = unif(gen);
		}
	}
	const WeightVector a = optimize_grey_relation(errors_of(rows), 0.5);
	const WeightVector b = optimize_grey_relation(errors_of(rows), 0.5);
	CHECK(a.w == b.w);
}

TEST_CASE("combine: weighted sums and validation") {
	const std::vector<std::vector<double>> predictions{{1.0, 2.0}, {3.0, 4.0}};
	WeightVector w;
	w.w = {0.25, 0.75};
	CHECK(combine(predictions, w) == std::vector<double>{2.5, 3.5});

	WeightVector first_only;
	first_only.w = {1.0, 0.0};
	CHECK(combine(predictions, first_only) == predictions[0]);

	WeightVector bad_count;
	bad_count.w = {1.0};
	CHECK_THROWS_AS(combine(predictions, bad_count), std::invalid_argument);
	WeightVector negative;
	negative.w = {1.5, -0.5};
	CHECK_THROWS_AS(combine(predictions, negative), std::invalid_argument);
	WeightVector off_simplex;
	off_simplex.w = {0.6, 0.6};
	CHECK_THROWS_AS(combine(predictions, off_simplex), std::invalid_argument);
	WeightVector ragged = w;
	CHECK_THROWS_AS(combine({{1.0, 2.0}, {3.0}}, ragged), std::invalid_argument);
}

TEST_CASE("combine: linear in the weights") {
	const std::vector<std::vector<double>> predictions{{1.0, 2.0, 0.5},
	                                                   {3.0, 4.0, 1.5},
	                                                   {0.0, 1.0, 2.5}};
	WeightVector w1;
	w1.w = {0.2, 0.3, 0.5};
	WeightVector w2;
	w2.w = {0.6, 0.1, 0.3};
	const double a = 0.4;
	WeightVector mix;
	mix.w.resize(3);
	for (std::size_t j = 0; j < 3; ++j) {
		mix.w[j] = a * w1.w[j] + (1.0 - a) * w2.w[j];
	}
	const std::vector<double> lhs = combine(predictions, mix);
	const std::vector<double> c1 = combine(predictions, w1);
	const std::vector<double> c2 = combine(predictions, w2);
	for (std::size_t t = 0; t < lhs.size(); ++t) {
		CHECK(lhs[t] ==
		      doctest::Approx(a * c1[t] + (1.0 - a) * c2[t]).epsilon(1e-12));
	}
}

TEST_CASE("average_weights: the control scheme") {
	const WeightVector w = average_weights(4);
	CHECK(w.scheme == WeightScheme::average);
	for (double v : w.w) {
		CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
	}
	CHECK_THROWS_AS(average_weights(0), std::invalid_argument);
}
