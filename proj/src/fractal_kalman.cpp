#include "fxcast/fractal_kalman.hpp"

#include <cmath>
#include <stdexcept>

namespace fxcast::fractal {

namespace {

const double kLg2 = std::log10(2.0);

void check_positive_prices(const Series &prices, std::size_t min_length) {
	if (prices.size() < min_length) {
		throw std::invalid_argument("fractal filter: series too short");
	}
	for (double v : prices.values()) {
		if (v <= 0.0) {
			throw std::invalid_argument("fractal filter: prices must be strictly positive");
		}
	}
}

} // namespace

FractalObservation build_observations(const Series &prices) {
	check_positive_prices(prices, 3);
	const auto &n = prices.values();
	FractalObservation obs;
	obs.z.resize(n.size() - 1);
	obs.t.resize(n.size() - 1);
	for (std::size_t k = 1; k < n.size(); ++k) {
		obs.z[k - 1] = std::log10(n[k - 1] / n[k]);
		// Time scale starts at k = 2; t_1 has no finite value under the
		// lg((k-1)/k) convention, so slot 0 carries t_2.
		const double kk = static_cast<double>(k + 1);
		obs.t[k - 1] = std::log10((kk - 1.0) / kk);
	}
	return obs;
}

std::pair<Eigen::Matrix2d, Eigen::Vector2d> state_transition(std::int64_t k,
                                                             TransitionMode mode) {
	if (k < 1) {
		throw std::invalid_argument("state_transition: step index must be >= 1");
	}
	Eigen::Matrix2d phi = Eigen::Matrix2d::Identity();
	Eigen::Vector2d gamma;
	if (k == 1) {
		// Published initial transition, kept verbatim in both modes.
		phi(0, 1) = std::log10(0.25);
		gamma << std::log10(0.5), 1.0;
		return {phi, gamma};
	}
	const double kk = static_cast<double>(k);
	const double entry = (mode == TransitionMode::derived)
	                         ? std::log10(kk * kk / (kk * kk - 1.0))
	                         : std::log10((kk * kk - 1.0) / (kk * kk));
	phi(0, 1) = entry;
	gamma << entry, 1.0;
	return {phi, gamma};
}

std::pair<KalmanState, double> kalman_step(const KalmanState &state,
                                           double z_next,
                                           const KalmanConfig &config) {
	const auto [phi, gamma] = state_transition(state.k, config.mode);
	const Eigen::RowVector2d c(1.0, 0.0);

	const Eigen::Vector2d x_pred = phi * state.x_hat;
	Eigen::Matrix2d p_pred = phi * state.p * phi.transpose() +
	                         gamma * config.q * gamma.transpose();
	p_pred = 0.5 * (p_pred + p_pred.transpose());

	const double innovation = z_next - c * x_pred;
	const double s = (c * p_pred * c.transpose())(0) + config.r;
	if (!(s > 0.0)) {
		throw std::runtime_error("kalman_step: non-positive innovation variance");
	}
	const Eigen::Vector2d gain = p_pred * c.transpose() / s;

	KalmanState next;
	next.k = state.k + 1;
	next.x_hat = x_pred + gain * innovation;
	Eigen::Matrix2d p_post =
	    (Eigen::Matrix2d::Identity() - gain * c) * p_pred;
	next.p = 0.5 * (p_post + p_post.transpose());
	return {next, innovation};
}

namespace {

KalmanState initial_state(double z1, const KalmanConfig &config) {
	KalmanState state;
	state.k = 1;
	state.x_hat << z1, z1 / kLg2;
	state.p = config.p0_scale * Eigen::Matrix2d::Identity();
	return state;
}

} // namespace

FilterRun run_filter(const Series &prices, const KalmanConfig &config) {
	check_positive_prices(prices, 3);
	const FractalObservation obs = build_observations(prices);
	const auto &n = prices.values();

	FilterRun run;
	run.state = initial_state(obs.z[0], config);
	run.fitted.reserve(obs.z.size() - 1);
	run.innovations.reserve(obs.z.size() - 1);
	for (std::size_t i = 1; i < obs.z.size(); ++i) {
		// Predicted log ratio before seeing z_{i+1}; its back-transform is
		// the one-step price prediction for period i + 2.
		const auto [phi, gamma] = state_transition(run.state.k, config.mode);
		const double z_pred = (phi * run.state.x_hat)(0);
		run.fitted.push_back(n[i] / std::pow(10.0, z_pred));

		auto [next, innovation] = kalman_step(run.state, obs.z[i], config);
		run.state = next;
		run.innovations.push_back(innovation);
	}
	const auto [phi, gamma] = state_transition(run.state.k, config.mode);
	run.next_log_ratio = (phi * run.state.x_hat)(0);
	return run;
}

double kalman_forecast(const Series &prices, const KalmanConfig &config) {
	const FilterRun run = run_filter(prices, config);
	return prices.values().back() / std::pow(10.0, run.next_log_ratio);
}

ForecastResult forecast(const Series &prices, std::size_t horizon,
                        const KalmanConfig &config) {
	if (horizon < 1) {
		throw std::invalid_argument("forecast: horizon must be >= 1");
	}
	FilterRun run = run_filter(prices, config);

	ForecastResult result;
	result.method_id = "f-kalman";
	result.fitted = run.fitted;
	result.fitted_start = 3;

	double last_price = prices.values().back();
	double z_pred = run.next_log_ratio;
	KalmanState state = run.state;
	for (std::size_t s = 0; s < horizon; ++s) {
		const double predicted = last_price / std::pow(10.0, z_pred);
		result.forecasts.push_back(predicted);
		if (s + 1 < horizon) {
			// Roll the prediction back in: the pseudo-observation equals
			// the predicted ratio, so the innovation is exactly zero.
			state = kalman_step(state, z_pred, config).first;
			last_price = predicted;
			const auto [phi, gamma] = state_transition(state.k, config.mode);
			z_pred = (phi * state.x_hat)(0);
		}
	}
	return result;
}

} // namespace fxcast::fractal
