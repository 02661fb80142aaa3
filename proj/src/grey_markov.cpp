#include "fxcast/grey_markov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fxcast/log.hpp"

namespace fxcast::grey {

GreySequence ago(std::span<const double> x0) {
	if (x0.empty()) {
		throw std::invalid_argument("ago: empty sequence");
	}
	GreySequence seq;
	seq.x0.assign(x0.begin(), x0.end());
	seq.x1.resize(x0.size());
	double acc = 0.0;
	for (std::size_t i = 0; i < x0.size(); ++i) {
		acc += x0[i];
		seq.x1[i] = acc;
	}
	return seq;
}

std::vector<double> iago(std::span<const double> x1) {
	if (x1.empty()) {
		throw std::invalid_argument("iago: empty sequence");
	}
	std::vector<double> x0(x1.size());
	x0[0] = x1[0];
	for (std::size_t i = 1; i < x1.size(); ++i) {
		x0[i] = x1[i] - x1[i - 1];
	}
	return x0;
}

namespace {

/// Propagate the accumulated-scale recursion from a seed value, using the
/// observed original sequence as the driving term.
std::vector<double> propagate_x1(std::span<const double> x0,
                                 const std::array<double, 4> &beta, double xi) {
	const std::size_t n = x0.size();
	std::vector<double> x1hat(n);
	x1hat[0] = xi;
	for (std::size_t k = 1; k < n; ++k) {
		x1hat[k] = beta[0] * x1hat[k - 1] + beta[1] * x0[k - 1] +
		           beta[2] * static_cast<double>(k) + beta[3];
	}
	return x1hat;
}

} // namespace

double dgm_residual_q(std::span<const double> x0,
                      const std::array<double, 4> &beta, double xi) {
	const auto fitted = iago(propagate_x1(x0, beta, xi));
	double q = 0.0;
	for (std::size_t k = 0; k < x0.size(); ++k) {
		const double e = fitted[k] - x0[k];
		q += e * e;
	}
	return q;
}

std::pair<double, double> optimal_xi(std::span<const double> x0,
                                     const std::array<double, 4> &beta) {
	const std::size_t n = x0.size();
	// The fitted value at each period is affine in xi; track the two
	// coefficients through the recursion and minimize the quadratic Q.
	std::vector<double> coef(n), offset(n);
	coef[0] = 1.0;
	offset[0] = 0.0;
	for (std::size_t k = 1; k < n; ++k) {
		coef[k] = beta[0] * coef[k - 1];
		offset[k] = beta[0] * offset[k - 1] + beta[1] * x0[k - 1] +
		            beta[2] * static_cast<double>(k) + beta[3];
	}
	double numerator = 0.0;
	double denominator = 0.0;
	double prev_coef = 0.0;
	double prev_offset = 0.0;
	for (std::size_t k = 0; k < n; ++k) {
		const double pk = coef[k] - prev_coef;
		const double qk = offset[k] - prev_offset;
		numerator += pk * (x0[k] - qk);
		denominator += pk * pk;
		prev_coef = coef[k];
		prev_offset = offset[k];
	}
	// denominator >= 1 always: the first fitted value is xi itself.
	const double xi = numerator / denominator;
	return {xi, dgm_residual_q(x0, beta, xi)};
}

DgmModel fit_dgm(std::span<const double> x0) {
	const std::size_t n = x0.size();
	if (n < 5) {
		throw std::invalid_argument("fit_dgm: need at least 5 observations");
	}
	for (double v : x0) {
		if (!std::isfinite(v)) {
			throw std::invalid_argument("fit_dgm: non-finite observation");
		}
	}
	const GreySequence seq = ago(x0);

	Eigen::MatrixXd design(n - 1, 4);
	Eigen::VectorXd target(n - 1);
	for (std::size_t k = 1; k < n; ++k) {
		design(k - 1, 0) = seq.x1[k - 1];
		design(k - 1, 1) = seq.x0[k - 1];
		design(k - 1, 2) = static_cast<double>(k);
		design(k - 1, 3) = 1.0;
		target(k - 1) = seq.x1[k];
	}
	// Minimum-norm least squares; sequences that make B rank-deficient
	// (e.g. constant data) still have an exact representation.
	Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
	if (cod.rank() == 0) {
		throw std::runtime_error("fit_dgm: singular design matrix");
	}
	const Eigen::VectorXd solution = cod.solve(target);
	DgmModel model;
	for (int i = 0; i < 4; ++i) {
		model.beta[i] = solution(i);
		if (!std::isfinite(model.beta[i])) {
			throw std::runtime_error("fit_dgm: singular design matrix");
		}
	}
	if (std::abs(model.beta[0]) > 1e6) {
		log_warn("fit_dgm: |beta1| exceeds 1e6, recursion is ill-conditioned");
	}

	const auto [xi, q] = optimal_xi(x0, model.beta);
	model.xi = xi;
	model.q_value = q;
	model.fitted0 = iago(propagate_x1(x0, model.beta, xi));
	return model;
}

std::vector<double> dgm_forecast(const DgmModel &model, std::size_t steps) {
	std::vector<double> extension;
	if (steps == 0) {
		return extension;
	}
	const std::size_t n = model.fitted0.size();
	double x1_prev = 0.0;
	for (double v : model.fitted0) {
		x1_prev += v;
	}
	double x0_prev = model.fitted0.back();
	extension.reserve(steps);
	for (std::size_t s = 0; s < steps; ++s) {
		const double k = static_cast<double>(n + s);
		const double x1_next = model.beta[0] * x1_prev + model.beta[1] * x0_prev +
		                       model.beta[2] * k + model.beta[3];
		const double x0_next = x1_next - x1_prev;
		extension.push_back(x0_next);
		x1_prev = x1_next;
		x0_prev = x0_next;
	}
	return extension;
}

std::vector<double> residual_ratio_series(std::span<const double> y,
                                          std::span<const double> fitted) {
	if (y.size() != fitted.size() || y.size() < 2) {
		throw std::invalid_argument("residual_ratio_series: sequences must be aligned with length >= 2");
	}
	std::vector<double> z(y.size() - 1);
	for (std::size_t t = 1; t < y.size(); ++t) {
		if (y[t - 1] == 0.0) {
			throw std::invalid_argument("residual_ratio_series: zero lag value");
		}
		z[t - 1] = (y[t] - fitted[t]) / y[t - 1];
	}
	return z;
}

std::vector<double> StatePartition::midpoints() const {
	std::vector<double> mids(states());
	for (std::size_t i = 0; i < mids.size(); ++i) {
		mids[i] = 0.5 * (bounds[i] + bounds[i + 1]);
	}
	return mids;
}

namespace {

double quantile_type7(const std::vector<double> &sorted, double p) {
	const double pos = p * static_cast<double>(sorted.size() - 1);
	const auto lo = static_cast<std::size_t>(pos);
	if (lo + 1 >= sorted.size()) {
		return sorted.back();
	}
	const double frac = pos - static_cast<double>(lo);
	return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

StatePartition partition_states(std::span<const double> z, std::size_t k,
                                PartitionScheme scheme) {
	if (k < 2) {
		throw std::invalid_argument("partition_states: need at least 2 states");
	}
	if (z.size() < k) {
		throw std::invalid_argument("partition_states: fewer samples than states");
	}
	const auto [min_it, max_it] = std::minmax_element(z.begin(), z.end());
	const double lo = *min_it;
	const double hi = *max_it;
	if (lo == hi) {
		throw std::invalid_argument("partition_states: degenerate sample, all values equal");
	}
	const double stretch = 1e-9 * (hi - lo);

	StatePartition partition;
	partition.bounds.resize(k + 1);
	partition.bounds.front() = lo - stretch;
	partition.bounds.back() = hi + stretch;
	if (scheme == PartitionScheme::quantile) {
		std::vector<double> sorted(z.begin(), z.end());
		std::sort(sorted.begin(), sorted.end());
		for (std::size_t i = 1; i < k; ++i) {
			partition.bounds[i] = quantile_type7(
			    sorted, static_cast<double>(i) / static_cast<double>(k));
		}
		// Heavily tied samples can collapse adjacent quantiles; fall back
		// to equally spaced cuts so the pipeline stays usable.
		bool collided = false;
		for (std::size_t i = 1; i < partition.bounds.size(); ++i) {
			if (!(partition.bounds[i] > partition.bounds[i - 1])) {
				collided = true;
				break;
			}
		}
		if (collided) {
			const double lo_b = partition.bounds.front();
			const double hi_b = partition.bounds.back();
			for (std::size_t i = 1; i < k; ++i) {
				partition.bounds[i] =
				    lo_b + (hi_b - lo_b) * static_cast<double>(i) / static_cast<double>(k);
			}
		}
	} else {
		double mean = 0.0;
		for (double v : z) {
			mean += v;
		}
		mean /= static_cast<double>(z.size());
		double var = 0.0;
		for (double v : z) {
			var += (v - mean) * (v - mean);
		}
		const double sd = std::sqrt(var / static_cast<double>(z.size()));
		// Interior cut points equally spaced over mean +- 1.5 sd; the outer
		// bounds always cover the sample.
		for (std::size_t i = 1; i < k; ++i) {
			const double u = -1.5 + 3.0 * static_cast<double>(i) / static_cast<double>(k);
			partition.bounds[i] = mean + sd * u;
		}
		partition.bounds.front() = std::min(partition.bounds.front(), mean - 1.5 * sd - stretch);
		partition.bounds.back() = std::max(partition.bounds.back(), mean + 1.5 * sd + stretch);
	}
	for (std::size_t i = 1; i < partition.bounds.size(); ++i) {
		if (!(partition.bounds[i] > partition.bounds[i - 1])) {
			throw std::invalid_argument("partition_states: degenerate sample, duplicate bounds");
		}
	}
	return partition;
}

namespace {

std::size_t crisp_state(const StatePartition &partition, double u) {
	const std::size_t k = partition.states();
	std::size_t state = 0;
	while (state + 1 < k && u > partition.bounds[state + 1]) {
		++state;
	}
	return state;
}

} // namespace

MarkovTest markov_test(std::span<const double> z, const StatePartition &partition,
                       double alpha, Chi2Variant variant) {
	if (z.size() < 2) {
		throw std::invalid_argument("markov_test: need at least 2 samples");
	}
	const std::size_t k = partition.states();
	MarkovTest test;
	test.alpha = alpha;
	test.dof = (k - 1) * (k - 1);
	test.transition_counts.assign(k, std::vector<std::int64_t>(k, 0));
	test.row_totals.assign(k, 0);
	test.marginal.assign(k, 0.0);

	std::size_t prev = crisp_state(partition, z[0]);
	for (std::size_t t = 1; t < z.size(); ++t) {
		const std::size_t next = crisp_state(partition, z[t]);
		test.transition_counts[prev][next] += 1;
		test.row_totals[prev] += 1;
		prev = next;
	}

	std::int64_t grand_total = 0;
	std::vector<std::int64_t> column_totals(k, 0);
	for (std::size_t i = 0; i < k; ++i) {
		grand_total += test.row_totals[i];
		for (std::size_t j = 0; j < k; ++j) {
			column_totals[j] += test.transition_counts[i][j];
		}
	}
	for (std::size_t j = 0; j < k; ++j) {
		test.marginal[j] = static_cast<double>(column_totals[j]) /
		                   static_cast<double>(grand_total);
	}

	double statistic = 0.0;
	for (std::size_t i = 0; i < k; ++i) {
		if (test.row_totals[i] == 0) {
			continue;
		}
		for (std::size_t j = 0; j < k; ++j) {
			const auto count = test.transition_counts[i][j];
			if (count == 0 || test.marginal[j] == 0.0) {
				continue;
			}
			const double p_ij = static_cast<double>(count) /
			                    static_cast<double>(test.row_totals[i]);
			const double term = static_cast<double>(count) *
			                    std::log(p_ij / test.marginal[j]);
			statistic += (variant == Chi2Variant::abs_log) ? std::abs(term) : term;
		}
	}
	test.chi2 = 2.0 * statistic;
	test.quantile = chi_square_quantile(alpha, std::max<std::size_t>(test.dof, 1));
	test.is_markov = test.chi2 > test.quantile;
	return test;
}

double regularized_gamma_p(double a, double x) {
	if (x < 0.0 || a <= 0.0) {
		throw std::invalid_argument("regularized_gamma_p: out of domain");
	}
	if (x == 0.0) {
		return 0.0;
	}
	const double lg = std::lgamma(a);
	if (x < a + 1.0) {
		// Series representation.
		double ap = a;
		double del = 1.0 / a;
		double sum = del;
		for (int i = 0; i < 500; ++i) {
			ap += 1.0;
			del *= x / ap;
			sum += del;
			if (std::abs(del) < std::abs(sum) * 1e-16) {
				break;
			}
		}
		return sum * std::exp(-x + a * std::log(x) - lg);
	}
	// Continued fraction for the complement.
	const double fpmin = std::numeric_limits<double>::min() / 1e-16;
	double b = x + 1.0 - a;
	double c = 1.0 / fpmin;
	double d = 1.0 / b;
	double h = d;
	for (int i = 1; i <= 500; ++i) {
		const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
		b += 2.0;
		d = an * d + b;
		if (std::abs(d) < fpmin) d = fpmin;
		c = b + an / c;
		if (std::abs(c) < fpmin) c = fpmin;
		d = 1.0 / d;
		const double del = d * c;
		h *= del;
		if (std::abs(del - 1.0) <= 1e-16) {
			break;
		}
	}
	return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

double chi_square_quantile(double alpha, std::size_t dof) {
	if (!(alpha > 0.0 && alpha < 1.0)) {
		throw std::invalid_argument("chi_square_quantile: alpha must lie in (0, 1)");
	}
	if (dof < 1) {
		throw std::invalid_argument("chi_square_quantile: dof must be >= 1");
	}
	const double a = static_cast<double>(dof) / 2.0;
	const double p_target = 1.0 - alpha;
	double lo = 0.0;
	double hi = static_cast<double>(dof) + 10.0 * std::sqrt(static_cast<double>(dof)) + 10.0;
	while (regularized_gamma_p(a, hi / 2.0) < p_target) {
		hi *= 2.0;
	}
	while (hi - lo > 1e-8) {
		const double mid = 0.5 * (lo + hi);
		if (regularized_gamma_p(a, mid / 2.0) < p_target) {
			lo = mid;
		} else {
			hi = mid;
		}
	}
	return 0.5 * (lo + hi);
}

MembershipFamily::MembershipFamily(std::vector<double> midpoints)
    : midpoints_(std::move(midpoints)) {
	if (midpoints_.empty()) {
		throw std::invalid_argument("MembershipFamily: need at least one state");
	}
	for (std::size_t i = 1; i < midpoints_.size(); ++i) {
		if (!(midpoints_[i] > midpoints_[i - 1])) {
			throw std::invalid_argument("MembershipFamily: midpoints must be strictly increasing");
		}
	}
}

std::vector<double> MembershipFamily::eval(double u) const {
	const std::size_t k = midpoints_.size();
	std::vector<double> mu(k, 0.0);
	if (k == 1 || u <= midpoints_.front()) {
		mu.front() = 1.0;
		return mu;
	}
	if (u >= midpoints_.back()) {
		mu.back() = 1.0;
		return mu;
	}
	std::size_t i = 0;
	while (u > midpoints_[i + 1]) {
		++i;
	}
	const double w = (u - midpoints_[i]) / (midpoints_[i + 1] - midpoints_[i]);
	mu[i] = 1.0 - w;
	mu[i + 1] = w;
	return mu;
}

MembershipFamily build_memberships(const StatePartition &partition) {
	return MembershipFamily(partition.midpoints());
}

FuzzyTransition fuzzy_transition(std::span<const double> z,
                                 const MembershipFamily &memberships) {
	if (z.size() < 2) {
		throw std::invalid_argument("fuzzy_transition: need at least 2 samples");
	}
	const std::size_t k = memberships.states();
	FuzzyTransition ft;
	ft.a.assign(k, std::vector<double>(k, 0.0));
	std::vector<double> mu_prev = memberships.eval(z[0]);
	for (std::size_t t = 1; t < z.size(); ++t) {
		std::vector<double> mu_next = memberships.eval(z[t]);
		for (std::size_t i = 0; i < k; ++i) {
			if (mu_prev[i] == 0.0) {
				continue;
			}
			for (std::size_t j = 0; j < k; ++j) {
				ft.a[i][j] += mu_prev[i] * mu_next[j];
			}
		}
		mu_prev = std::move(mu_next);
	}
	ft.p.assign(k, std::vector<double>(k, 0.0));
	for (std::size_t i = 0; i < k; ++i) {
		double row_sum = 0.0;
		for (double v : ft.a[i]) {
			row_sum += v;
		}
		if (row_sum > 0.0) {
			for (std::size_t j = 0; j < k; ++j) {
				ft.p[i][j] = ft.a[i][j] / row_sum;
			}
		} else {
			// Never-visited state: maximum-entropy fallback.
			for (std::size_t j = 0; j < k; ++j) {
				ft.p[i][j] = 1.0 / static_cast<double>(k);
			}
		}
	}
	return ft;
}

namespace {

/// Expected correction ratio per source state: sum_j c_j P_ij under the
/// target-midpoint convention, or plainly c_i under the source convention
/// (the transition rows sum to one).
std::vector<double> state_expectations(const std::vector<double> &midpoints,
                                       const FuzzyTransition &transition,
                                       MarkovMidpoint midpoint) {
	const std::size_t k = midpoints.size();
	std::vector<double> expect(k, 0.0);
	for (std::size_t i = 0; i < k; ++i) {
		if (midpoint == MarkovMidpoint::source) {
			expect[i] = midpoints[i];
		} else {
			double acc = 0.0;
			for (std::size_t j = 0; j < k; ++j) {
				acc += midpoints[j] * transition.p[i][j];
			}
			expect[i] = acc;
		}
	}
	return expect;
}

double correction_ratio(const MembershipFamily &memberships,
                        const std::vector<double> &expectations, double z_prev) {
	const std::vector<double> mu = memberships.eval(z_prev);
	double acc = 0.0;
	for (std::size_t i = 0; i < mu.size(); ++i) {
		acc += mu[i] * expectations[i];
	}
	return acc;
}

} // namespace

DgmFMarkovForecast dgm_fmarkov_forecast(const Series &y, std::size_t horizon,
                                        const FMarkovOptions &options) {
	const std::vector<double> &values = y.values();
	DgmModel base = fit_dgm(values);
	std::vector<double> z = residual_ratio_series(values, base.fitted0);

	const auto [zmin_it, zmax_it] = std::minmax_element(z.begin(), z.end());
	if (*zmin_it == *zmax_it) {
		// Perfect (or bitwise-constant) residual ratios: nothing to
		// partition, the correction is identically zero.
		DgmFMarkovForecast out{
		    ForecastResult{"dgm-fmarkov", base.fitted0, 1,
		                   dgm_forecast(base, horizon)},
		    FuzzyMarkovModel{StatePartition{{*zmin_it - 1.0, *zmin_it + 1.0}},
		                     MembershipFamily({*zmin_it}),
		                     FuzzyTransition{{{0.0}}, {{1.0}}}, std::move(base)},
		    MarkovTest{}, false};
		out.markov.transition_counts = {{static_cast<std::int64_t>(z.size()) - 1}};
		out.markov.row_totals = {static_cast<std::int64_t>(z.size()) - 1};
		out.markov.marginal = {1.0};
		out.markov.alpha = options.alpha;
		return out;
	}

	StatePartition partition = partition_states(z, options.states, options.scheme);
	MarkovTest markov = markov_test(z, partition, options.alpha, options.chi2);
	MembershipFamily memberships = build_memberships(partition);
	FuzzyTransition transition = fuzzy_transition(z, memberships);
	const std::vector<double> expectations =
	    state_expectations(partition.midpoints(), transition, options.midpoint);

	const std::size_t n = values.size();
	ForecastResult result;
	result.method_id = "dgm-fmarkov";
	result.fitted = base.fitted0;
	// Z starts at period 2, so the first correctable period is 3.
	for (std::size_t idx = 2; idx < n; ++idx) {
		const double ratio = correction_ratio(memberships, expectations, z[idx - 2]);
		result.fitted[idx] = base.fitted0[idx] + ratio * values[idx - 1];
	}

	const std::vector<double> extension = dgm_forecast(base, horizon);
	double prev_y = values.back();
	double prev_z = z.back();
	for (std::size_t s = 0; s < horizon; ++s) {
		const double ratio = correction_ratio(memberships, expectations, prev_z);
		const double predicted = extension[s] + ratio * prev_y;
		result.forecasts.push_back(predicted);
		if (s + 1 < horizon) {
			if (prev_y == 0.0) {
				throw std::runtime_error("dgm_fmarkov_forecast: zero lag value in ratio recursion");
			}
			prev_z = (predicted - extension[s]) / prev_y;
			prev_y = predicted;
		}
	}

	return DgmFMarkovForecast{
	    std::move(result),
	    FuzzyMarkovModel{std::move(partition), std::move(memberships),
	                     std::move(transition), std::move(base)},
	    std::move(markov), true};
}

} // namespace fxcast::grey
