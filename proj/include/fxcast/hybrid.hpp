#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fxcast::hybrid {

/// Per-method forecast errors e_j(t) = y(t) - yhat_j(t): one row per
/// method, one column per evaluation period. Rows must agree in length
/// and every entry must be finite.
struct MethodErrors {
	std::vector<std::vector<double>> e;
	std::vector<std::string> method_ids;

	MethodErrors(std::vector<std::vector<double>> errors,
	             std::vector<std::string> ids);

	std::size_t methods() const { return e.size(); }
	std::size_t periods() const { return e.empty() ? 0 : e.front().size(); }
};

enum class WeightScheme { least_squares, effective_degree, grey_relation, average };

/// Nonnegative combination weights summing to one, tagged with the scheme
/// that produced them.
struct WeightVector {
	std::vector<double> w;
	WeightScheme scheme = WeightScheme::average;
};

/// Inverse-variance closed form: w_j = (1/h_jj) / sum_i (1/h_ii) with
/// h_jj the sum of squared errors of method j. Methods with zero squared
/// error split the full weight equally between themselves.
WeightVector ls_weights(const MethodErrors &errors);

/// Accuracy summary of a combined forecast: per-period accuracy
/// A(t) = 1 - |(y - yhat)/y|, its mean E, the dispersion
/// sigma = (1/N) * sqrt(sum (A - E)^2), and the score S = E(1 - sigma).
struct EffectiveDegree {
	std::vector<double> accuracy;
	double mean_e = 0.0;
	double sd = 0.0;
	double s = 0.0;
};

EffectiveDegree effective_degree(std::span<const double> actual,
                                 std::span<const double> combined);

/// Whether the effective-degree optimizer maximizes S (the default) or
/// minimizes it, preserving the literal objective for auditing.
enum class Direction { maximize, minimize };

WeightVector optimize_effective_degree(
    std::span<const double> actual,
    const std::vector<std::vector<double>> &predictions,
    Direction direction = Direction::maximize);

/// Grey relation degree per method: gamma_j = (1/N) sum_t
/// (minmin + rho*maxmax) / (|e_j(t)| + rho*maxmax) with the envelopes
/// taken over all methods and periods. All-zero errors yield gamma = 1.
std::vector<double> grey_relation_degree(const MethodErrors &errors, double rho);

/// Maximizes the grey relation degree of the combined error
/// sum_j w_j e_j(t) over the weight simplex, holding the min/max
/// envelopes at their per-method values.
WeightVector optimize_grey_relation(const MethodErrors &errors, double rho);

/// Pointwise weighted sum yhat(t) = sum_j w_j yhat_j(t).
std::vector<double> combine(const std::vector<std::vector<double>> &predictions,
                            const WeightVector &weights);

/// Equal weights 1/m, the control scheme.
WeightVector average_weights(std::size_t m);

} // namespace fxcast::hybrid
