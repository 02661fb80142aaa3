#pragma once

#include <span>
#include <vector>

#include "fxcast/series.hpp"

namespace fxcast::arfima {

/// Truncated coefficients of the fractional differencing operator
/// (1 - B)^d: pi[0] = 1, pi[j] = pi[j-1] * (j - 1 - d) / j.
struct FracDiffWeights {
	double d = 0.0;
	std::vector<double> pi;
};

FracDiffWeights frac_diff_weights(double d, std::size_t length);

/// Apply (1 - B)^d with available-history truncation:
/// y_t = sum_{j=0}^{t} pi_j x_{t-j}. Output length equals input length.
std::vector<double> frac_diff(std::span<const double> x, double d);
Series frac_diff(const Series &series, double d);

/// A fitted ARFIMA(p, d, q) model
///   phi(B) (1-B)^d (X_t - mean) = theta(B) e_t,   -1/2 < d < 1/2,
/// with both polynomials having all roots outside the unit circle.
/// `css` is the conditional-sum-of-squares objective at the optimum and
/// `residuals` the one-step residuals it was computed from (burn-in
/// excluded; the first entry corresponds to period `resid_start`).
struct ArfimaModel {
	int p = 0;
	int q = 0;
	double d = 0.0;
	std::vector<double> phi;
	std::vector<double> theta;
	double mean = 0.0;
	double sigma2 = 0.0;
	double css = 0.0;
	std::vector<double> residuals;
	int resid_start = 1;
};

struct EstimateOptions {
	bool zero_mean = false;
	double d_lower = -0.49;
	double d_upper = 0.49;
	double d_tolerance = 1e-6;
	/// One-step residuals before this period are left out of the CSS
	/// objective (capped at half the sample for short series).
	int burn_in = 50;
	/// Truncation length for the AR(infinity) forecast representation,
	/// capped at the sample size.
	int max_ar_expansion = 200;
};

/// True when every root of 1 - c_1 z - ... - c_k z^k lies strictly
/// outside the unit circle (companion-matrix eigenvalue moduli < 1).
bool roots_outside_unit_circle(std::span<const double> coeffs);

/// Conditional-sum-of-squares estimation: golden-section search for d on
/// the open interval (d_lower, d_upper), with AR(p) coefficients fitted by
/// OLS on the fractionally differenced series at each candidate d.
/// Candidates whose AR fit is non-stationary are inadmissible; the search
/// fails only when no candidate is. Ties in the objective resolve toward
/// smaller d. Only q = 0 is supported.
ArfimaModel estimate_css(const Series &series, int p, int q = 0,
                         const EstimateOptions &options = {});

/// n_eff * ln(CSS / n_eff) + 2 (p + q + 1), with n_eff the number of
/// residuals entering the CSS objective.
double aic(const ArfimaModel &model, const Series &series);

/// One-step-ahead in-sample fitted values plus an h-step extrapolation of
/// the truncated AR(infinity) representation with future innovations zero.
ForecastResult forecast(const ArfimaModel &model, const Series &series,
                        std::size_t h, int max_ar_expansion = 200);

} // namespace fxcast::arfima
