#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

#include "fxcast/series.hpp"

namespace fxcast::fractal {

/// Log-ratio observations z_k = lg(N_k / N_{k+1}) of a positive price
/// series, with the matching time-scale points t_k = lg((k-1)/k), k >= 2.
struct FractalObservation {
	std::vector<double> z;
	std::vector<double> t;
};

FractalObservation build_observations(const Series &prices);

/// How the transition entries for step k >= 2 are formed. `derived` uses
/// the exact time-scale increment lg(k^2 / (k^2 - 1)); `paper_form` uses
/// lg((k^2 - 1) / k^2). Step k = 1 always returns the published
/// Phi(2,1) = [[1, lg(1/4)], [0, 1]] and Gamma(2,1) = [lg(1/2), 1]^T.
enum class TransitionMode { derived, paper_form };

struct KalmanConfig {
	double q = 0.0001;
	double r = 1.0;
	double p0_scale = 0.0001;
	TransitionMode mode = TransitionMode::derived;
};

/// State transition Phi(k+1, k) and noise coupling Gamma(k+1, k).
std::pair<Eigen::Matrix2d, Eigen::Vector2d>
state_transition(std::int64_t k, TransitionMode mode = TransitionMode::derived);

/// Filter state after step k: estimate of [x_k, d_k] with its covariance.
struct KalmanState {
	Eigen::Vector2d x_hat = Eigen::Vector2d::Zero();
	Eigen::Matrix2d p = Eigen::Matrix2d::Zero();
	std::int64_t k = 1;
};

/// One predict-update cycle consuming the observation for step k+1.
/// Returns the advanced state and the innovation.
std::pair<KalmanState, double> kalman_step(const KalmanState &state,
                                           double z_next,
                                           const KalmanConfig &config);

/// A full filter pass over the price observations. `fitted` holds the
/// one-step-ahead in-sample price predictions, aligned to the price series
/// from 1-based period `fitted_start` = 3. `next_log_ratio` is the one-step
/// prediction of lg(N_n / N_{n+1}) the forecast back-transforms.
struct FilterRun {
	std::vector<double> fitted;
	std::vector<double> innovations;
	KalmanState state;
	double next_log_ratio = 0.0;
};

FilterRun run_filter(const Series &prices, const KalmanConfig &config = {});

/// One-step price forecast N_n / 10^{xhat(n+1|n)}.
double kalman_forecast(const Series &prices, const KalmanConfig &config = {});

/// Multi-step forecast: each one-step prediction is rolled back in as a
/// pseudo-observation (zero innovation) before predicting the next.
ForecastResult forecast(const Series &prices, std::size_t horizon,
                        const KalmanConfig &config = {});

} // namespace fxcast::fractal
