#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "fxcast/backtest.hpp"
#include "fxcast/log.hpp"

namespace {

using fxcast::backtest::ReportFormat;

void write_output(const std::string &text, const std::string &out_path) {
	if (out_path.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream file(out_path);
	if (!file) {
		throw std::invalid_argument("cannot open output file: " + out_path);
	}
	file << text;
}

ReportFormat parse_format(const std::string &name) {
	if (name == "text") return ReportFormat::text;
	if (name == "json") return ReportFormat::json;
	if (name == "csv") return ReportFormat::csv;
	throw std::invalid_argument("unknown format: " + name);
}

std::string series_csv(const fxcast::Series &series) {
	std::string out = "date,value\n";
	char row[64];
	for (std::size_t i = 0; i < series.size(); ++i) {
		std::snprintf(row, sizeof row, "%lld,%.17g\n",
		              static_cast<long long>(series.index()[i]), series.value(i));
		out += row;
	}
	return out;
}

struct SimulateArgs {
	std::string kind;
	std::size_t n = 100;
	std::uint64_t seed = 7;
	double sigma = -1.0; // unset: 1.0 for arfima, 0.0 otherwise
	double d = 0.3;
	std::vector<double> phi;
	std::vector<double> beta{0.8, 0.2, 2.0, 3.0};
	double xi = 12.0;
	double x1 = 0.01;
	double n1 = 100.0;
};

fxcast::Series run_simulate(const SimulateArgs &args,
                            fxcast::fractal::TransitionMode mode) {
	if (args.kind == "arfima") {
		const double sigma = args.sigma < 0.0 ? 1.0 : args.sigma;
		return fxcast::backtest::simulate_arfima(args.d, args.phi, sigma, args.n,
		                                         args.seed);
	}
	const double sigma = args.sigma < 0.0 ? 0.0 : args.sigma;
	if (args.kind == "dgm") {
		std::array<double, 4> beta{};
		std::copy(args.beta.begin(), args.beta.end(), beta.begin());
		return fxcast::backtest::simulate_dgm(beta, args.xi, sigma, args.n, args.seed);
	}
	return fxcast::backtest::simulate_fractal(args.x1, args.n1, sigma, args.n,
	                                          args.seed, mode);
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Exchange-rate forecasting and backtesting"};
	app.require_subcommand(1);

	fxcast::backtest::RunConfig config;
	std::string format = "text";
	std::string out_path;
	bool print_config = false;

	const std::map<std::string, fxcast::grey::PartitionScheme> partition_map{
	    {"quantile", fxcast::grey::PartitionScheme::quantile},
	    {"sigma", fxcast::grey::PartitionScheme::sigma}};
	const std::map<std::string, fxcast::grey::MarkovMidpoint> midpoint_map{
	    {"target", fxcast::grey::MarkovMidpoint::target},
	    {"source", fxcast::grey::MarkovMidpoint::source}};
	const std::map<std::string, fxcast::grey::Chi2Variant> chi2_map{
	    {"abs", fxcast::grey::Chi2Variant::abs_log},
	    {"lr", fxcast::grey::Chi2Variant::likelihood_ratio}};
	const std::map<std::string, fxcast::fractal::TransitionMode> transition_map{
	    {"derived", fxcast::fractal::TransitionMode::derived},
	    {"paper", fxcast::fractal::TransitionMode::paper_form}};
	const std::map<std::string, fxcast::hybrid::Direction> direction_map{
	    {"maximize", fxcast::hybrid::Direction::maximize},
	    {"minimize", fxcast::hybrid::Direction::minimize}};

	CLI::App *run = app.add_subcommand("run", "Backtest a CSV price series");
	run->add_option("--input", config.input_path, "Input CSV file (date,value)")
	    ->required();
	run->add_option("--horizon", config.horizon,
	                "Forecast horizon h; the holdout is the last h+1 points")
	    ->capture_default_str();
	run->add_option("--arfima-p", config.arfima_p, "AR order")->capture_default_str();
	run->add_option("--arfima-q", config.arfima_q, "MA order (only 0 is supported)")
	    ->capture_default_str();
	run->add_flag("--zero-mean", config.arfima_zero_mean,
	              "Fix the ARFIMA mean at 0 instead of the sample mean");
	run->add_flag("--difference-first", config.difference_first,
	              "Fit the ARFIMA model on first differences");
	run->add_option("--states", config.dgm_states, "Markov state count")
	    ->capture_default_str();
	run->add_option("--alpha", config.alpha, "Markov test confidence level")
	    ->capture_default_str();
	run->add_option("--rho", config.rho, "Grey relation identification coefficient")
	    ->capture_default_str();
	run->add_option("--kalman-q", config.kalman_q, "Kalman process noise variance")
	    ->capture_default_str();
	run->add_option("--kalman-r", config.kalman_r, "Kalman observation noise variance")
	    ->capture_default_str();
	run->add_option("--partition", config.partition_scheme,
	                "State partition scheme: quantile|sigma")
	    ->transform(CLI::CheckedTransformer(partition_map, CLI::ignore_case));
	run->add_option("--markov-midpoint", config.markov_midpoint,
	                "Correction midpoint convention: target|source")
	    ->transform(CLI::CheckedTransformer(midpoint_map, CLI::ignore_case));
	run->add_option("--chi2", config.chi2_variant,
	                "Markov test statistic variant: abs|lr")
	    ->transform(CLI::CheckedTransformer(chi2_map, CLI::ignore_case));
	run->add_option("--fractal-transition", config.fractal_transition,
	                "Kalman transition entries: derived|paper")
	    ->transform(CLI::CheckedTransformer(transition_map, CLI::ignore_case));
	run->add_option("--effective-direction", config.effective_direction,
	                "Effective-degree objective direction: maximize|minimize")
	    ->transform(CLI::CheckedTransformer(direction_map, CLI::ignore_case));
	run->add_option("--format", format, "Report format: text|json|csv")
	    ->check(CLI::IsMember({"text", "json", "csv"}))
	    ->capture_default_str();
	run->add_option("--out", out_path, "Write output to this path instead of stdout");
	run->add_flag("--print-config", print_config,
	              "Print the resolved configuration as JSON and exit");

	SimulateArgs sim_args;
	CLI::App *simulate =
	    app.add_subcommand("simulate", "Emit a deterministic synthetic series as CSV");
	simulate->add_option("--kind", sim_args.kind, "Generator: arfima|dgm|fractal")
	    ->required()
	    ->check(CLI::IsMember({"arfima", "dgm", "fractal"}));
	simulate->add_option("--n", sim_args.n, "Series length")->capture_default_str();
	simulate->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();
	simulate->add_option("--sigma", sim_args.sigma,
	                     "Noise standard deviation (default 1 for arfima, else 0)");
	simulate->add_option("--d", sim_args.d, "arfima: fractional d")->capture_default_str();
	simulate->add_option("--phi", sim_args.phi, "arfima: AR coefficients");
	simulate->add_option("--beta", sim_args.beta, "dgm: beta1..beta4")
	    ->expected(4);
	simulate->add_option("--xi", sim_args.xi, "dgm: initial value")->capture_default_str();
	simulate->add_option("--x1", sim_args.x1, "fractal: initial log price ratio")
	    ->capture_default_str();
	simulate->add_option("--n1", sim_args.n1, "fractal: initial price")
	    ->capture_default_str();
	fxcast::fractal::TransitionMode sim_mode = fxcast::fractal::TransitionMode::derived;
	simulate->add_option("--fractal-transition", sim_mode,
	                     "fractal: transition entries: derived|paper")
	    ->transform(CLI::CheckedTransformer(transition_map, CLI::ignore_case));
	simulate->add_option("--out", out_path, "Write CSV here instead of stdout");

	std::string report_input;
	CLI::App *report = app.add_subcommand("report", "Re-render a saved JSON report");
	report->add_option("--input", report_input, "Report JSON path")->required();
	report->add_option("--format", format, "Output format: text|json|csv")
	    ->check(CLI::IsMember({"text", "json", "csv"}))
	    ->capture_default_str();
	report->add_option("--out", out_path, "Write output here instead of stdout");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	try {
		if (run->parsed()) {
			if (print_config) {
				write_output(fxcast::backtest::config_json(config), out_path);
				return 0;
			}
			const fxcast::backtest::BacktestReport result =
			    fxcast::backtest::run_backtest(config);
			write_output(fxcast::backtest::emit_report(result, parse_format(format)),
			             out_path);
		} else if (simulate->parsed()) {
			write_output(series_csv(run_simulate(sim_args, sim_mode)), out_path);
		} else if (report->parsed()) {
			std::ifstream file(report_input);
			if (!file) {
				throw std::invalid_argument("cannot open input file: " + report_input);
			}
			const std::string text((std::istreambuf_iterator<char>(file)),
			                       std::istreambuf_iterator<char>());
			const fxcast::backtest::BacktestReport parsed =
			    fxcast::backtest::parse_json_report(text);
			write_output(fxcast::backtest::emit_report(parsed, parse_format(format)),
			             out_path);
		}
	} catch (const std::invalid_argument &e) {
		std::cerr << "forecast: error: " << e.what() << "\n";
		return 2;
	} catch (const std::exception &e) {
		std::cerr << "forecast: error: " << e.what() << "\n";
		return 3;
	}
	return 0;
}
