#pragma once

#include <array>
#include <span>
#include <vector>

#include "fxcast/series.hpp"

namespace fxcast::grey {

/// Original sequence x0 and its accumulated (cumulative-sum) companion x1.
struct GreySequence {
	std::vector<double> x0;
	std::vector<double> x1;
};

/// Accumulated generating operation: running sums.
GreySequence ago(std::span<const double> x0);

/// Inverse AGO: first element kept, then first differences.
std::vector<double> iago(std::span<const double> x1);

/// Non-homogeneous discrete grey model fitted on the accumulated scale:
///   x1hat(k+1) = beta1 x1hat(k) + beta2 x0(k) + beta3 k + beta4,
///   x1hat(1)   = xi,
/// with beta from the least-squares normal equations and xi the closed-form
/// minimizer of the original-scale residual sum Q (quadratic in xi).
struct DgmModel {
	std::array<double, 4> beta{};
	double xi = 0.0;
	std::vector<double> fitted0;
	double q_value = 0.0;
};

DgmModel fit_dgm(std::span<const double> x0);

/// Closed-form optimum of the quadratic Q(xi) for a given beta, plus the
/// value Q attains there. Exposed for the grid-scan optimality check.
std::pair<double, double> optimal_xi(std::span<const double> x0,
                                     const std::array<double, 4> &beta);

/// Q(xi) for a given beta: the original-scale residual sum when the
/// recursion is seeded with x1hat(1) = xi.
double dgm_residual_q(std::span<const double> x0,
                      const std::array<double, 4> &beta, double xi);

/// Extend the fitted recursion `steps` periods past the sample, feeding the
/// model's own original-scale values back in. Returns the extension only.
std::vector<double> dgm_forecast(const DgmModel &model, std::size_t steps);

/// Relative residual series Z_t = (Y_t - X_t) / Y_{t-1} for t = 2..N.
std::vector<double> residual_ratio_series(std::span<const double> y,
                                          std::span<const double> fitted);

enum class PartitionScheme { quantile, sigma };

/// State intervals e_i = [bounds[i-1], bounds[i]], strictly increasing,
/// covering every training sample in the interior.
struct StatePartition {
	std::vector<double> bounds;
	std::size_t states() const { return bounds.empty() ? 0 : bounds.size() - 1; }
	/// Interval midpoints (m_{i-1} + m_i) / 2, one per state.
	std::vector<double> midpoints() const;
};

StatePartition partition_states(std::span<const double> z, std::size_t k,
                                PartitionScheme scheme = PartitionScheme::quantile);

enum class Chi2Variant {
	abs_log,          // 2 sum M_ij |log(P_ij / P0_j)|
	likelihood_ratio, // classical signed statistic
};

/// Crisp-state transition counts and the chi-square independence statistic
/// at (k-1)^2 degrees of freedom.
struct MarkovTest {
	std::vector<std::vector<std::int64_t>> transition_counts;
	std::vector<std::int64_t> row_totals;
	std::vector<double> marginal;
	double chi2 = 0.0;
	std::size_t dof = 0;
	double alpha = 0.05;
	double quantile = 0.0;
	bool is_markov = false;
};

MarkovTest markov_test(std::span<const double> z, const StatePartition &partition,
                       double alpha, Chi2Variant variant = Chi2Variant::abs_log);

/// Upper-alpha quantile of the chi-square distribution, by bisection on the
/// regularized incomplete gamma function.
double chi_square_quantile(double alpha, std::size_t dof);

/// Regularized lower incomplete gamma P(a, x); exposed for the tests.
double regularized_gamma_p(double a, double x);

/// Triangular partition-of-unity memberships peaked at the state-interval
/// midpoints; outside the first/last midpoint the boundary state owns the
/// full membership.
class MembershipFamily {
public:
	explicit MembershipFamily(std::vector<double> midpoints);

	std::size_t states() const { return midpoints_.size(); }
	const std::vector<double> &midpoints() const { return midpoints_; }

	/// Membership degrees of u in every state; sums to 1.
	std::vector<double> eval(double u) const;

private:
	std::vector<double> midpoints_;
};

MembershipFamily build_memberships(const StatePartition &partition);

/// Fuzzy transition frequencies a_ij = sum_t mu_i(Z_t) mu_j(Z_{t+1}) and the
/// row-normalized transition matrix (all-zero rows become uniform).
struct FuzzyTransition {
	std::vector<std::vector<double>> a;
	std::vector<std::vector<double>> p;
};

FuzzyTransition fuzzy_transition(std::span<const double> z,
                                 const MembershipFamily &memberships);

struct FuzzyMarkovModel {
	StatePartition partition;
	MembershipFamily memberships;
	FuzzyTransition transition;
	DgmModel base;
};

/// Which interval midpoint multiplies P_ij inside the correction sum.
enum class MarkovMidpoint { target, source };

struct FMarkovOptions {
	std::size_t states = 4;
	double alpha = 0.05;
	PartitionScheme scheme = PartitionScheme::quantile;
	MarkovMidpoint midpoint = MarkovMidpoint::target;
	Chi2Variant chi2 = Chi2Variant::abs_log;
};

/// Full DGM + fuzzy Markov correction output. The Markov test result is
/// recorded but never gates the correction; `correction_applied` is false
/// only when the residual ratios are all identical (nothing to partition).
struct DgmFMarkovForecast {
	ForecastResult result;
	FuzzyMarkovModel model;
	MarkovTest markov;
	bool correction_applied = false;
};

/// Pipeline: fit_dgm -> residual ratios -> state partition -> Markov test ->
/// memberships -> fuzzy transition -> corrected fitted values
///   Yhat_t = Xhat_t + sum_i mu_i(Z_{t-1}) sum_j c_j P_ij * Y_{t-1},
/// then `horizon` out-of-sample steps with predictions fed back in place of
/// actual values and ratios.
DgmFMarkovForecast dgm_fmarkov_forecast(const Series &y, std::size_t horizon,
                                        const FMarkovOptions &options = {});

} // namespace fxcast::grey
