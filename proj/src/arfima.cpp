#include "fxcast/arfima.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fxcast::arfima {

FracDiffWeights frac_diff_weights(double d, std::size_t length) {
	if (length < 1) {
		throw std::invalid_argument("frac_diff_weights: length must be >= 1");
	}
	FracDiffWeights out;
	out.d = d;
	out.pi.resize(length);
	out.pi[0] = 1.0;
	for (std::size_t j = 1; j < length; ++j) {
		out.pi[j] = out.pi[j - 1] * (static_cast<double>(j) - 1.0 - d) /
		            static_cast<double>(j);
	}
	return out;
}

std::vector<double> frac_diff(std::span<const double> x, double d) {
	if (x.empty()) {
		throw std::invalid_argument("frac_diff: empty input");
	}
	const auto weights = frac_diff_weights(d, x.size());
	std::vector<double> y(x.size());
	for (std::size_t t = 0; t < x.size(); ++t) {
		double acc = 0.0;
		for (std::size_t j = 0; j <= t; ++j) {
			acc += weights.pi[j] * x[t - j];
		}
		y[t] = acc;
	}
	return y;
}

Series frac_diff(const Series &series, double d) {
	return Series(series.index(), frac_diff(series.values(), d),
	              series.labels());
}

bool roots_outside_unit_circle(std::span<const double> coeffs) {
	const std::size_t p = coeffs.size();
	if (p == 0) {
		return true;
	}
	// Companion matrix of the lag recursion; spectral radius < 1 puts all
	// polynomial roots outside the unit circle.
	Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
	for (std::size_t j = 0; j < p; ++j) {
		companion(0, j) = coeffs[j];
	}
	for (std::size_t i = 1; i < p; ++i) {
		companion(i, i - 1) = 1.0;
	}
	const auto eigenvalues = companion.eigenvalues();
	for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
		if (std::abs(eigenvalues[i]) >= 1.0) {
			return false;
		}
	}
	return true;
}

namespace {

struct CssFit {
	double css = 0.0;
	std::vector<double> phi;
	std::vector<double> residuals;
};

std::size_t burn_start(std::size_t n, int p, int burn_in) {
	const std::size_t capped =
	    std::min<std::size_t>(static_cast<std::size_t>(burn_in), n / 2);
	return std::max<std::size_t>(capped, static_cast<std::size_t>(p));
}

/// OLS AR(p) fit on the fractionally differenced series w; residual rows
/// run over t = t0..n-1 so the reported CSS is the minimized objective.
CssFit fit_ar_css(const std::vector<double> &w, int p, std::size_t t0) {
	const std::size_t n = w.size();
	const std::size_t rows = n - t0;
	CssFit fit;
	if (p == 0) {
		fit.residuals.assign(w.begin() + t0, w.end());
	} else {
		Eigen::MatrixXd design(rows, p);
		Eigen::VectorXd target(rows);
		for (std::size_t r = 0; r < rows; ++r) {
			const std::size_t t = t0 + r;
			target(r) = w[t];
			for (int i = 0; i < p; ++i) {
				design(r, i) = w[t - 1 - i];
			}
		}
		Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
		if (qr.rank() < p) {
			throw std::runtime_error("estimate_css: singular normal equations in AR regression");
		}
		Eigen::VectorXd coef = qr.solve(target);
		fit.phi.assign(coef.data(), coef.data() + p);
		Eigen::VectorXd resid = target - design * coef;
		fit.residuals.assign(resid.data(), resid.data() + rows);
	}
	for (double e : fit.residuals) {
		fit.css += e * e;
	}
	return fit;
}

} // namespace

ArfimaModel estimate_css(const Series &series, int p, int q,
                         const EstimateOptions &options) {
	if (p < 0 || q < 0) {
		throw std::invalid_argument("estimate_css: negative order");
	}
	if (q != 0) {
		throw std::invalid_argument("estimate_css: moving-average orders are not supported");
	}
	const std::size_t n = series.size();
	if (n < 10 * static_cast<std::size_t>(p + q + 1)) {
		throw std::invalid_argument("estimate_css: series too short for requested order");
	}

	double mean = 0.0;
	if (!options.zero_mean) {
		for (double v : series.values()) {
			mean += v;
		}
		mean /= static_cast<double>(n);
	}
	std::vector<double> z(n);
	for (std::size_t i = 0; i < n; ++i) {
		z[i] = series.value(i) - mean;
	}

	const std::size_t t0 = burn_start(n, p, options.burn_in);
	// Candidates whose AR fit lands on or inside the unit circle are
	// inadmissible: the search minimizes over the stationary region only.
	const auto objective = [&](double d) {
		const CssFit fit = fit_ar_css(frac_diff(z, d), p, t0);
		if (!roots_outside_unit_circle(fit.phi)) {
			return std::numeric_limits<double>::infinity();
		}
		return fit.css;
	};

	double best_d = 0.0;
	double best_css = std::numeric_limits<double>::infinity();
	const auto consider = [&](double d, double css) {
		if (css < best_css || (css == best_css && d < best_d)) {
			best_css = css;
			best_d = d;
		}
	};

	// Coarse interior scan guards against picking the wrong basin before
	// golden-section polish.
	const int scan = 25;
	const double lo = options.d_lower;
	const double hi = options.d_upper;
	const double step = (hi - lo) / static_cast<double>(scan + 1);
	for (int i = 1; i <= scan; ++i) {
		const double d = lo + step * i;
		consider(d, objective(d));
	}

	double a = std::max(lo, best_d - step);
	double b = std::min(hi, best_d + step);
	const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
	double x1 = b - ratio * (b - a);
	double x2 = a + ratio * (b - a);
	double f1 = objective(x1);
	double f2 = objective(x2);
	consider(x1, f1);
	consider(x2, f2);
	while (b - a > options.d_tolerance) {
		if (f1 <= f2) {
			b = x2;
			x2 = x1;
			f2 = f1;
			x1 = b - ratio * (b - a);
			f1 = objective(x1);
			consider(x1, f1);
		} else {
			a = x1;
			x1 = x2;
			f1 = f2;
			x2 = a + ratio * (b - a);
			f2 = objective(x2);
			consider(x2, f2);
		}
	}

	if (!std::isfinite(best_css)) {
		throw std::runtime_error("estimate_css: fitted AR polynomial is non-stationary");
	}
	CssFit fit = fit_ar_css(frac_diff(z, best_d), p, t0);
	if (!roots_outside_unit_circle(fit.phi)) {
		throw std::runtime_error("estimate_css: fitted AR polynomial is non-stationary");
	}

	ArfimaModel model;
	model.p = p;
	model.q = q;
	model.d = best_d;
	model.phi = std::move(fit.phi);
	model.mean = mean;
	model.css = fit.css;
	model.residuals = std::move(fit.residuals);
	model.resid_start = static_cast<int>(t0) + 1;
	model.sigma2 = model.css / static_cast<double>(model.residuals.size());
	return model;
}

double aic(const ArfimaModel &model, const Series &series) {
	const std::size_t n_eff = model.residuals.size();
	if (n_eff == 0) {
		throw std::invalid_argument("aic: model carries no residuals");
	}
	if (static_cast<std::size_t>(model.resid_start - 1) + n_eff != series.size()) {
		throw std::invalid_argument("aic: model was not fitted on this series");
	}
	return static_cast<double>(n_eff) *
	           std::log(model.css / static_cast<double>(n_eff)) +
	       2.0 * static_cast<double>(model.p + model.q + 1);
}

ForecastResult forecast(const ArfimaModel &model, const Series &series,
                        std::size_t h, int max_ar_expansion) {
	if (h < 1) {
		throw std::invalid_argument("forecast: horizon must be >= 1");
	}
	const std::size_t n = series.size();
	std::vector<double> z(n);
	for (std::size_t i = 0; i < n; ++i) {
		z[i] = series.value(i) - model.mean;
	}

	// One-step in-sample predictions through the exact truncated expansion:
	// the same residual path the CSS estimation minimizes.
	const std::vector<double> w = frac_diff(z, model.d);
	ForecastResult out;
	out.method_id = "arfima";
	out.fitted.resize(n);
	for (std::size_t t = 0; t < n; ++t) {
		double e = w[t];
		for (std::size_t i = 0; i < model.phi.size() && i < t; ++i) {
			e -= model.phi[i] * w[t - 1 - i];
		}
		out.fitted[t] = series.value(t) - e;
	}

	// phi(B)(1-B)^d collapsed into one truncated AR(infinity) polynomial.
	const std::size_t expansion =
	    std::min<std::size_t>(n, static_cast<std::size_t>(max_ar_expansion));
	const auto pi = frac_diff_weights(model.d, expansion);
	std::vector<double> c(expansion, 0.0);
	for (std::size_t j = 0; j < expansion; ++j) {
		double acc = pi.pi[j];
		for (std::size_t i = 1; i <= model.phi.size() && i <= j; ++i) {
			acc -= model.phi[i - 1] * pi.pi[j - i];
		}
		c[j] = acc;
	}

	std::vector<double> extended = z;
	extended.reserve(n + h);
	for (std::size_t s = 0; s < h; ++s) {
		const std::size_t t = n + s;
		double pred = 0.0;
		for (std::size_t j = 1; j < expansion && j <= t; ++j) {
			pred -= c[j] * extended[t - j];
		}
		extended.push_back(pred);
		out.forecasts.push_back(model.mean + pred);
	}
	return out;
}

} // namespace fxcast::arfima
