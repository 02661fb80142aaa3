#include "fxcast/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fxcast::hybrid {

MethodErrors::MethodErrors(std::vector<std::vector<double>> errors,
                           std::vector<std::string> ids)
    : e(std::move(errors)), method_ids(std::move(ids)) {
	if (e.empty()) {
		throw std::invalid_argument("MethodErrors: need at least one method");
	}
	if (!method_ids.empty() && method_ids.size() != e.size()) {
		throw std::invalid_argument("MethodErrors: id count does not match method count");
	}
	const std::size_t n = e.front().size();
	if (n < 2) {
		throw std::invalid_argument("MethodErrors: need at least two periods");
	}
	for (const auto &row : e) {
		if (row.size() != n) {
			throw std::invalid_argument("MethodErrors: ragged error rows");
		}
		for (double v : row) {
			if (!std::isfinite(v)) {
				throw std::invalid_argument("MethodErrors: non-finite error entry");
			}
		}
	}
}

WeightVector ls_weights(const MethodErrors &errors) {
	const std::size_t m = errors.methods();
	std::vector<double> h(m, 0.0);
	for (std::size_t j = 0; j < m; ++j) {
		for (double v : errors.e[j]) {
			h[j] += v * v;
		}
	}

	WeightVector out;
	out.scheme = WeightScheme::least_squares;
	out.w.assign(m, 0.0);

	const std::size_t zero_count =
	    static_cast<std::size_t>(std::count(h.begin(), h.end(), 0.0));
	if (zero_count > 0) {
		// Zero squared error dominates any h > 0 in the inverse-variance
		// limit: split the weight over the error-free methods.
		for (std::size_t j = 0; j < m; ++j) {
			if (h[j] == 0.0) {
				out.w[j] = 1.0 / static_cast<double>(zero_count);
			}
		}
		return out;
	}

	double inv_sum = 0.0;
	for (double v : h) {
		inv_sum += 1.0 / v;
	}
	for (std::size_t j = 0; j < m; ++j) {
		out.w[j] = (1.0 / h[j]) / inv_sum;
	}
	return out;
}

EffectiveDegree effective_degree(std::span<const double> actual,
                                 std::span<const double> combined) {
	if (actual.size() != combined.size()) {
		throw std::invalid_argument("effective_degree: length mismatch");
	}
	if (actual.empty()) {
		throw std::invalid_argument("effective_degree: empty input");
	}
	EffectiveDegree out;
	out.accuracy.resize(actual.size());
	for (std::size_t t = 0; t < actual.size(); ++t) {
		if (actual[t] == 0.0) {
			throw std::invalid_argument("effective_degree: zero actual value");
		}
		out.accuracy[t] = 1.0 - std::abs((actual[t] - combined[t]) / actual[t]);
	}
	const double n = static_cast<double>(out.accuracy.size());
	for (double a : out.accuracy) {
		out.mean_e += a;
	}
	out.mean_e /= n;
	double ss = 0.0;
	for (double a : out.accuracy) {
		ss += (a - out.mean_e) * (a - out.mean_e);
	}
	out.sd = std::sqrt(ss) / n;
	out.s = out.mean_e * (1.0 - out.sd);
	return out;
}

namespace {

// Visits the integer compositions (a_0..a_{m-1}) of `remaining`,
// ascending lexicographically, so with strict-improvement tracking the
// first optimum seen is the lexicographically smallest weight vector.
void visit_grid(std::size_t index, int remaining, std::vector<int> &point,
                const std::function<void(const std::vector<int> &)> &fn) {
	if (index + 1 == point.size()) {
		point[index] = remaining;
		fn(point);
		return;
	}
	for (int a = 0; a <= remaining; ++a) {
		point[index] = a;
		visit_grid(index + 1, remaining - a, point, fn);
	}
}

// Deterministic maximizer over the weight simplex: exhaustive pass on a
// 0.01 grid, then single-unit transfers between coordinate pairs on a
// 0.001 grid until no move strictly improves the objective. Strict
// improvement over a finite point set cannot cycle, so this terminates.
std::vector<double>
maximize_on_simplex(std::size_t m,
                    const std::function<double(const std::vector<double> &)> &objective) {
	std::vector<double> w(m);
	const auto eval = [&](const std::vector<int> &point, int unit) {
		for (std::size_t i = 0; i < m; ++i) {
			w[i] = static_cast<double>(point[i]) / static_cast<double>(unit);
		}
		return objective(w);
	};

	std::vector<int> point(m, 0);
	std::vector<int> best(m, 0);
	double best_value = -std::numeric_limits<double>::infinity();
	visit_grid(0, 100, point, [&](const std::vector<int> &p) {
		const double value = eval(p, 100);
		if (value > best_value) {
			best_value = value;
			best = p;
		}
	});

	std::vector<int> current(m);
	for (std::size_t i = 0; i < m; ++i) {
		current[i] = best[i] * 10;
	}
	bool improved = true;
	while (improved) {
		improved = false;
		for (std::size_t i = 0; i < m && !improved; ++i) {
			if (current[i] == 0) {
				continue;
			}
			for (std::size_t j = 0; j < m && !improved; ++j) {
				if (j == i) {
					continue;
				}
				current[i] -= 1;
				current[j] += 1;
				const double value = eval(current, 1000);
				if (value > best_value) {
					best_value = value;
					improved = true;
				} else {
					current[i] += 1;
					current[j] -= 1;
				}
			}
		}
	}

	std::vector<double> out(m);
	for (std::size_t i = 0; i < m; ++i) {
		out[i] = static_cast<double>(current[i]) / 1000.0;
	}
	return out;
}

void check_prediction_block(std::span<const double> actual,
                            const std::vector<std::vector<double>> &predictions) {
	if (predictions.size() < 2) {
		throw std::invalid_argument("optimizer: need at least two methods");
	}
	for (const auto &p : predictions) {
		if (p.size() != actual.size()) {
			throw std::invalid_argument("optimizer: prediction length mismatch");
		}
		for (double v : p) {
			if (!std::isfinite(v)) {
				throw std::invalid_argument("optimizer: non-finite prediction");
			}
		}
	}
}

} // namespace

WeightVector optimize_effective_degree(
    std::span<const double> actual,
    const std::vector<std::vector<double>> &predictions, Direction direction) {
	check_prediction_block(actual, predictions);
	if (actual.empty()) {
		throw std::invalid_argument("optimize_effective_degree: empty input");
	}
	for (double y : actual) {
		if (y == 0.0) {
			throw std::invalid_argument("optimize_effective_degree: zero actual value");
		}
	}

	const std::size_t m = predictions.size();
	const std::size_t n = actual.size();
	const double sign = direction == Direction::maximize ? 1.0 : -1.0;
	std::vector<double> accuracy(n);
	const auto objective = [&](const std::vector<double> &w) {
		double mean = 0.0;
		for (std::size_t t = 0; t < n; ++t) {
			double combined = 0.0;
			for (std::size_t j = 0; j < m; ++j) {
				combined += w[j] * predictions[j][t];
			}
			accuracy[t] = 1.0 - std::abs((actual[t] - combined) / actual[t]);
			mean += accuracy[t];
		}
		mean /= static_cast<double>(n);
		double ss = 0.0;
		for (double a : accuracy) {
			ss += (a - mean) * (a - mean);
		}
		const double sd = std::sqrt(ss) / static_cast<double>(n);
		return sign * mean * (1.0 - sd);
	};

	WeightVector out;
	out.scheme = WeightScheme::effective_degree;
	out.w = maximize_on_simplex(m, objective);
	return out;
}

namespace {

struct ErrorEnvelope {
	double min_abs = 0.0;
	double max_abs = 0.0;
};

ErrorEnvelope envelope_of(const MethodErrors &errors) {
	ErrorEnvelope env;
	env.min_abs = std::numeric_limits<double>::infinity();
	for (const auto &row : errors.e) {
		for (double v : row) {
			env.min_abs = std::min(env.min_abs, std::abs(v));
			env.max_abs = std::max(env.max_abs, std::abs(v));
		}
	}
	return env;
}

void check_rho(double rho) {
	if (!(rho > 0.0 && rho < 1.0)) {
		throw std::invalid_argument("grey relation: rho must lie in (0,1)");
	}
}

} // namespace

std::vector<double> grey_relation_degree(const MethodErrors &errors, double rho) {
	check_rho(rho);
	const ErrorEnvelope env = envelope_of(errors);
	const std::size_t n = errors.periods();
	std::vector<double> gamma(errors.methods(), 1.0);
	if (env.max_abs == 0.0) {
		// Every error is exactly zero: each term is the 0/0 limit of a
		// perfect match, resolved to 1.
		return gamma;
	}
	const double numerator = env.min_abs + rho * env.max_abs;
	for (std::size_t j = 0; j < errors.methods(); ++j) {
		double sum = 0.0;
		for (double v : errors.e[j]) {
			sum += numerator / (std::abs(v) + rho * env.max_abs);
		}
		gamma[j] = sum / static_cast<double>(n);
	}
	return gamma;
}

WeightVector optimize_grey_relation(const MethodErrors &errors, double rho) {
	check_rho(rho);
	if (errors.methods() < 2) {
		throw std::invalid_argument("optimize_grey_relation: need at least two methods");
	}
	const ErrorEnvelope env = envelope_of(errors);
	const std::size_t m = errors.methods();
	const std::size_t n = errors.periods();
	const double numerator = env.min_abs + rho * env.max_abs;
	const auto objective = [&](const std::vector<double> &w) {
		if (env.max_abs == 0.0) {
			return 1.0;
		}
		double sum = 0.0;
		for (std::size_t t = 0; t < n; ++t) {
			double combined = 0.0;
			for (std::size_t j = 0; j < m; ++j) {
				combined += w[j] * errors.e[j][t];
			}
			sum += numerator / (std::abs(combined) + rho * env.max_abs);
		}
		return sum / static_cast<double>(n);
	};

	WeightVector out;
	out.scheme = WeightScheme::grey_relation;
	out.w = maximize_on_simplex(m, objective);
	return out;
}

std::vector<double> combine(const std::vector<std::vector<double>> &predictions,
                            const WeightVector &weights) {
	if (predictions.size() != weights.w.size()) {
		throw std::invalid_argument("combine: weight count does not match method count");
	}
	if (predictions.empty()) {
		throw std::invalid_argument("combine: no predictions");
	}
	const std::size_t n = predictions.front().size();
	double total = 0.0;
	for (double v : weights.w) {
		if (!(v >= 0.0)) {
			throw std::invalid_argument("combine: negative weight");
		}
		total += v;
	}
	if (std::abs(total - 1.0) > 1e-9) {
		throw std::invalid_argument("combine: weights do not sum to 1");
	}
	for (const auto &p : predictions) {
		if (p.size() != n) {
			throw std::invalid_argument("combine: prediction length mismatch");
		}
	}
	std::vector<double> out(n, 0.0);
	for (std::size_t j = 0; j < predictions.size(); ++j) {
		for (std::size_t t = 0; t < n; ++t) {
			out[t] += weights.w[j] * predictions[j][t];
		}
	}
	return out;
}

WeightVector average_weights(std::size_t m) {
	if (m == 0) {
		throw std::invalid_argument("average_weights: need at least one method");
	}
	WeightVector out;
	out.scheme = WeightScheme::average;
	out.w.assign(m, 1.0 / static_cast<double>(m));
	return out;
}

} // namespace fxcast::hybrid
