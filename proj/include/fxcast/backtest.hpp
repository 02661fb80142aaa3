#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fxcast/fractal_kalman.hpp"
#include "fxcast/grey_markov.hpp"
#include "fxcast/hybrid.hpp"
#include "fxcast/series.hpp"

namespace fxcast::backtest {

/// Everything a backtest run depends on. The numeric defaults are the
/// reference constants of the underlying models (horizon 12, four Markov
/// states at the 0.05 level, rho 0.5, Kalman noise 0.0001/1.0).
struct RunConfig {
	std::string input_path;
	std::size_t horizon = 12;
	int arfima_p = 3;
	int arfima_q = 0;
	bool arfima_zero_mean = false;
	/// Fit the ARFIMA model on first differences and integrate the
	/// forecasts back to levels.
	bool difference_first = false;
	std::size_t dgm_states = 4;
	double alpha = 0.05;
	double rho = 0.5;
	double kalman_q = 0.0001;
	double kalman_r = 1.0;
	grey::PartitionScheme partition_scheme = grey::PartitionScheme::quantile;
	grey::MarkovMidpoint markov_midpoint = grey::MarkovMidpoint::target;
	grey::Chi2Variant chi2_variant = grey::Chi2Variant::abs_log;
	fractal::TransitionMode fractal_transition = fractal::TransitionMode::derived;
	hybrid::Direction effective_direction = hybrid::Direction::maximize;
	std::uint64_t seed = 0;
};

/// Holdout metrics and forecasts for one forecaster.
struct MethodReport {
	std::string id;
	EvalReport metrics;
	std::vector<double> forecasts;
};

struct WeightReport {
	std::vector<double> least_squares;
	std::vector<double> effective_degree;
	std::vector<double> grey_relation;
	std::vector<double> average;
};

struct MarkovReport {
	double chi2 = 0.0;
	std::size_t dof = 0;
	double alpha = 0.0;
	double quantile = 0.0;
	bool is_markov = false;
	bool correction_applied = false;
};

/// One holdout period: the actual value plus every method's prediction,
/// ordered like BacktestReport::methods.
struct PointReport {
	std::int64_t period = 0;
	std::string label;
	double actual = 0.0;
	std::vector<double> predicted;
};

/// Full backtest output. The last training observation is carried along
/// (`pre_*`) so the directional-accuracy metric can be recomputed from the
/// per-point data alone.
struct BacktestReport {
	std::size_t horizon = 0;
	std::int64_t pre_period = 0;
	std::string pre_label;
	double pre_actual = 0.0;
	std::vector<MethodReport> methods;
	WeightReport weights;
	MarkovReport markov;
	std::vector<PointReport> points;
};

/// Two-column CSV `date,value` with an optional header row. Dates become
/// labels; periods are numbered 1..n. Malformed rows report their line
/// number.
Series parse_csv(std::istream &in, const std::string &source = "<stream>");
Series ingest_csv(const std::string &path);

BacktestReport run_backtest(const Series &series, const RunConfig &config);
BacktestReport run_backtest(const RunConfig &config);

enum class ReportFormat { text, json, csv };

std::string emit_text(const BacktestReport &report);
std::string emit_json(const BacktestReport &report);
std::string emit_csv(const BacktestReport &report);
std::string emit_report(const BacktestReport &report, ReportFormat format);

/// Inverse of emit_json; emit_json(parse_json_report(s)) == s for any s
/// produced by emit_json.
BacktestReport parse_json_report(const std::string &text);

/// Resolved configuration as JSON, for --print-config.
std::string config_json(const RunConfig &config);

/// Seeded synthetic series for fixtures and recovery tests. All three are
/// deterministic across runs for a fixed seed.
Series simulate_arfima(double d, std::span<const double> phi, double sigma,
                       std::size_t n, std::uint64_t seed);
Series simulate_dgm(const std::array<double, 4> &beta, double xi, double sigma,
                    std::size_t n, std::uint64_t seed);
Series simulate_fractal(double x1, double n1, double sigma, std::size_t n,
                        std::uint64_t seed,
                        fractal::TransitionMode mode = fractal::TransitionMode::derived);

} // namespace fxcast::backtest
