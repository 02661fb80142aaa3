#include "fxcast/backtest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <random>
#include <stdexcept>
#include <utility>

#include "fxcast/arfima.hpp"
#include "fxcast/log.hpp"

namespace fxcast::backtest {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string &text) {
	const auto first = text.find_first_not_of(" \t");
	if (first == std::string::npos) {
		return "";
	}
	const auto last = text.find_last_not_of(" \t");
	return text.substr(first, last - first + 1);
}

std::string lowercase(std::string text) {
	std::transform(text.begin(), text.end(), text.begin(),
	               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
	return text;
}

std::string strf(const char *format, ...) {
	va_list args;
	va_start(args, format);
	va_list measure;
	va_copy(measure, args);
	const int needed = std::vsnprintf(nullptr, 0, format, measure);
	va_end(measure);
	std::string out(needed > 0 ? static_cast<std::size_t>(needed) : 0, '\0');
	if (needed > 0) {
		std::vsnprintf(out.data(), out.size() + 1, format, args);
	}
	va_end(args);
	return out;
}

} // namespace

Series parse_csv(std::istream &in, const std::string &source) {
	std::vector<std::string> labels;
	std::vector<double> values;
	std::string line;
	std::size_t line_no = 0;
	bool seen_data = false;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		const std::string row = trim(line);
		if (row.empty()) {
			continue;
		}
		const auto at = [&](const std::string &message) {
			return std::invalid_argument(source + ":" + std::to_string(line_no) +
			                             ": " + message);
		};
		const auto comma = row.find(',');
		if (comma == std::string::npos) {
			throw at("expected two columns `date,value`");
		}
		const std::string label = trim(row.substr(0, comma));
		const std::string value_text = trim(row.substr(comma + 1));
		if (!seen_data && lowercase(value_text) == "value") {
			// Header row.
			continue;
		}
		if (value_text.find(',') != std::string::npos) {
			throw at("expected two columns `date,value`");
		}
		if (value_text.empty()) {
			throw at("missing value");
		}
		errno = 0;
		char *end = nullptr;
		const double value = std::strtod(value_text.c_str(), &end);
		if (end != value_text.c_str() + value_text.size() || errno == ERANGE ||
		    !std::isfinite(value)) {
			throw at("cannot parse value `" + value_text + "`");
		}
		labels.push_back(label);
		values.push_back(value);
		seen_data = true;
	}
	if (values.empty()) {
		throw std::invalid_argument(source + ": no data rows");
	}
	std::vector<std::int64_t> index(values.size());
	for (std::size_t i = 0; i < index.size(); ++i) {
		index[i] = static_cast<std::int64_t>(i) + 1;
	}
	return Series(std::move(index), std::move(values), std::move(labels));
}

Series ingest_csv(const std::string &path) {
	std::ifstream file(path);
	if (!file) {
		throw std::invalid_argument("cannot open input file: " + path);
	}
	return parse_csv(file, path);
}

namespace {

/// ARFIMA leg of the backtest. With difference_first the model is fitted
/// on first differences and both fitted values and forecasts are
/// integrated back to the level scale.
ForecastResult run_arfima_leg(const Series &train, const RunConfig &config,
                              std::size_t steps) {
	arfima::EstimateOptions options;
	options.zero_mean = config.arfima_zero_mean;
	if (!config.difference_first) {
		const arfima::ArfimaModel model =
		    arfima::estimate_css(train, config.arfima_p, config.arfima_q, options);
		log_info(strf("arfima: d=%.6f, p=%d, css=%.6g, mean=%.6g", model.d,
		              model.p, model.css, model.mean));
		return arfima::forecast(model, train, steps);
	}

	const std::vector<double> &x = train.values();
	std::vector<double> diff(x.size() - 1);
	for (std::size_t i = 0; i + 1 < x.size(); ++i) {
		diff[i] = x[i + 1] - x[i];
	}
	const Series diff_series{std::vector<double>(diff)};
	const arfima::ArfimaModel model =
	    arfima::estimate_css(diff_series, config.arfima_p, config.arfima_q, options);
	log_info(strf("arfima (first differences): d=%.6f, p=%d, css=%.6g", model.d,
	              model.p, model.css));
	const ForecastResult on_diff = arfima::forecast(model, diff_series, steps);

	ForecastResult out;
	out.method_id = on_diff.method_id;
	// Difference period s sits between level periods s and s+1, so the
	// level-scale fitted value for period s+1 is x_s plus the fitted step.
	out.fitted_start = on_diff.fitted_start + 1;
	out.fitted.resize(on_diff.fitted.size());
	for (std::size_t i = 0; i < on_diff.fitted.size(); ++i) {
		const std::size_t diff_period = static_cast<std::size_t>(on_diff.fitted_start) + i;
		out.fitted[i] = x[diff_period - 1] + on_diff.fitted[i];
	}
	out.forecasts.resize(on_diff.forecasts.size());
	double level = x.back();
	for (std::size_t i = 0; i < on_diff.forecasts.size(); ++i) {
		level += on_diff.forecasts[i];
		out.forecasts[i] = level;
	}
	return out;
}

void check_alignment(const ForecastResult &result, std::size_t n_train,
                     std::size_t steps) {
	const std::size_t last_fitted = static_cast<std::size_t>(result.fitted_start) +
	                                result.fitted.size() - 1;
	if (result.fitted_start < 1 || last_fitted != n_train ||
	    result.forecasts.size() != steps) {
		throw std::runtime_error("backtest: misaligned forecast output from " +
		                         result.method_id);
	}
}

} // namespace

BacktestReport run_backtest(const Series &series, const RunConfig &config) {
	const auto [train, test] = split(series, config.horizon);
	const std::size_t steps = config.horizon + 1;
	const std::size_t n_train = train.size();

	const ForecastResult arfima_leg = run_arfima_leg(train, config, steps);

	grey::FMarkovOptions fm_options;
	fm_options.states = config.dgm_states;
	fm_options.alpha = config.alpha;
	fm_options.scheme = config.partition_scheme;
	fm_options.midpoint = config.markov_midpoint;
	fm_options.chi2 = config.chi2_variant;
	const grey::DgmFMarkovForecast grey_leg =
	    grey::dgm_fmarkov_forecast(train, steps, fm_options);
	log_info(strf("grey: beta=(%.6g, %.6g, %.6g, %.6g), xi=%.6g, chi2=%.4f "
	              "(quantile %.4f), correction %s",
	              grey_leg.model.base.beta[0], grey_leg.model.base.beta[1],
	              grey_leg.model.base.beta[2], grey_leg.model.base.beta[3],
	              grey_leg.model.base.xi, grey_leg.markov.chi2,
	              grey_leg.markov.quantile,
	              grey_leg.correction_applied ? "applied" : "skipped"));

	fractal::KalmanConfig kalman_config;
	kalman_config.q = config.kalman_q;
	kalman_config.r = config.kalman_r;
	kalman_config.mode = config.fractal_transition;
	const ForecastResult kalman_leg = fractal::forecast(train, steps, kalman_config);

	const std::array<const ForecastResult *, 3> base = {&arfima_leg, &grey_leg.result,
	                                                    &kalman_leg};
	for (const ForecastResult *leg : base) {
		check_alignment(*leg, n_train, steps);
	}

	// Weights are estimated on the training-sample fit errors, over the
	// periods where every base model has a fitted value.
	int common_start = 1;
	for (const ForecastResult *leg : base) {
		common_start = std::max(common_start, leg->fitted_start);
	}
	const std::size_t common = n_train - static_cast<std::size_t>(common_start) + 1;
	std::vector<double> actual_common(common);
	std::vector<std::vector<double>> fitted_common(base.size(),
	                                               std::vector<double>(common));
	std::vector<std::vector<double>> error_rows(base.size(),
	                                            std::vector<double>(common));
	std::vector<std::string> base_ids;
	for (const ForecastResult *leg : base) {
		base_ids.push_back(leg->method_id);
	}
	for (std::size_t i = 0; i < common; ++i) {
		const std::size_t period = static_cast<std::size_t>(common_start) + i;
		actual_common[i] = train.value(period - 1);
		for (std::size_t j = 0; j < base.size(); ++j) {
			const double fitted =
			    base[j]->fitted[period - static_cast<std::size_t>(base[j]->fitted_start)];
			fitted_common[j][i] = fitted;
			error_rows[j][i] = actual_common[i] - fitted;
		}
	}

	const hybrid::MethodErrors method_errors(error_rows, base_ids);
	const hybrid::WeightVector w_ls = hybrid::ls_weights(method_errors);
	const hybrid::WeightVector w_eff = hybrid::optimize_effective_degree(
	    actual_common, fitted_common, config.effective_direction);
	const hybrid::WeightVector w_grey =
	    hybrid::optimize_grey_relation(method_errors, config.rho);
	const hybrid::WeightVector w_avg = hybrid::average_weights(base.size());
	const auto log_weights = [](const char *scheme, const std::vector<double> &w) {
		std::string row = strf("weights (%s):", scheme);
		for (double v : w) {
			row += strf(" %.4f", v);
		}
		log_debug(row);
	};
	log_weights("least squares", w_ls.w);
	log_weights("effective degree", w_eff.w);
	log_weights("grey relation", w_grey.w);

	std::vector<std::vector<double>> base_forecasts;
	for (const ForecastResult *leg : base) {
		base_forecasts.push_back(leg->forecasts);
	}

	std::vector<double> actual_with_prev;
	actual_with_prev.reserve(steps + 1);
	actual_with_prev.push_back(train.values().back());
	actual_with_prev.insert(actual_with_prev.end(), test.values().begin(),
	                        test.values().end());

	BacktestReport report;
	report.horizon = config.horizon;
	report.pre_period = train.index().back();
	report.pre_label = train.has_labels() ? train.labels().back() : "";
	report.pre_actual = train.values().back();

	const auto add_method = [&](const std::string &id, std::vector<double> forecasts) {
		MethodReport method;
		method.id = id;
		method.metrics = evaluate(actual_with_prev, forecasts);
		method.forecasts = std::move(forecasts);
		report.methods.push_back(std::move(method));
	};
	add_method(base_ids[0], arfima_leg.forecasts);
	add_method(base_ids[1], grey_leg.result.forecasts);
	add_method(base_ids[2], kalman_leg.forecasts);
	add_method("method-1-ls", hybrid::combine(base_forecasts, w_ls));
	add_method("method-2-effective", hybrid::combine(base_forecasts, w_eff));
	add_method("method-3-grey", hybrid::combine(base_forecasts, w_grey));
	add_method("average", hybrid::combine(base_forecasts, w_avg));

	report.weights.least_squares = w_ls.w;
	report.weights.effective_degree = w_eff.w;
	report.weights.grey_relation = w_grey.w;
	report.weights.average = w_avg.w;

	report.markov.chi2 = grey_leg.markov.chi2;
	report.markov.dof = grey_leg.markov.dof;
	report.markov.alpha = grey_leg.markov.alpha;
	report.markov.quantile = grey_leg.markov.quantile;
	report.markov.is_markov = grey_leg.markov.is_markov;
	report.markov.correction_applied = grey_leg.correction_applied;

	for (std::size_t i = 0; i < steps; ++i) {
		PointReport point;
		point.period = test.index()[i];
		point.label = test.has_labels() ? test.labels()[i] : "";
		point.actual = test.value(i);
		for (const MethodReport &method : report.methods) {
			point.predicted.push_back(method.forecasts[i]);
		}
		report.points.push_back(std::move(point));
	}
	return report;
}

BacktestReport run_backtest(const RunConfig &config) {
	return run_backtest(ingest_csv(config.input_path), config);
}

namespace {

std::string display_name(const std::string &id) {
	if (id == "arfima") return "ARFIMA";
	if (id == "dgm-fmarkov") return "DGM-FMarkov";
	if (id == "f-kalman") return "F-Kalman";
	if (id == "method-1-ls") return "Method 1 (least squares)";
	if (id == "method-2-effective") return "Method 2 (effective degree)";
	if (id == "method-3-grey") return "Method 3 (grey relation)";
	if (id == "average") return "Average";
	return id;
}

std::string weight_row(const std::string &name, const std::vector<double> &w) {
	std::string row = strf("  %-28s", name.c_str());
	for (double v : w) {
		row += strf(" %8.4f", v);
	}
	return row + "\n";
}

} // namespace

std::string emit_text(const BacktestReport &report) {
	std::string out = strf("Prediction performance (horizon %zu, %zu holdout points)\n\n",
	                       report.horizon, report.points.size());
	out += strf("%-30s %9s %9s %10s %10s\n", "Method", "MAPFE", "DA", "MAFE", "RMSFE");
	for (const MethodReport &method : report.methods) {
		out += strf("%-30s %9.4f %9.2f %10.5f %10.5f\n",
		            display_name(method.id).c_str(), method.metrics.mapfe,
		            method.metrics.da, method.metrics.mafe, method.metrics.rmsfe);
	}

	out += "\nCombination weights";
	const std::size_t base_count = report.weights.average.size();
	for (std::size_t j = 0; j < base_count && j < report.methods.size(); ++j) {
		out += (j == 0 ? " (" : ", ") + report.methods[j].id;
	}
	out += "):\n";
	out += weight_row("least squares", report.weights.least_squares);
	out += weight_row("effective degree", report.weights.effective_degree);
	out += weight_row("grey relation", report.weights.grey_relation);
	out += weight_row("average", report.weights.average);

	out += strf("\nMarkov property test: chi2 = %.4f vs chi2_%g(%zu) = %.4f -> %s\n",
	            report.markov.chi2, report.markov.alpha, report.markov.dof,
	            report.markov.quantile,
	            report.markov.is_markov ? "Markov property confirmed"
	                                    : "Markov property not confirmed");
	out += strf("Fuzzy Markov correction applied: %s\n",
	            report.markov.correction_applied ? "yes" : "no");
	return out;
}

std::string emit_json(const BacktestReport &report) {
	ordered_json j;
	j["horizon"] = report.horizon;
	j["pre_period"] = {{"period", report.pre_period},
	                   {"label", report.pre_label},
	                   {"actual", report.pre_actual}};
	j["methods"] = ordered_json::array();
	for (const MethodReport &method : report.methods) {
		ordered_json m;
		m["id"] = method.id;
		m["mapfe"] = method.metrics.mapfe;
		m["da"] = method.metrics.da;
		m["mafe"] = method.metrics.mafe;
		m["rmsfe"] = method.metrics.rmsfe;
		m["forecasts"] = method.forecasts;
		j["methods"].push_back(std::move(m));
	}
	j["weights"] = {{"least_squares", report.weights.least_squares},
	                {"effective_degree", report.weights.effective_degree},
	                {"grey_relation", report.weights.grey_relation},
	                {"average", report.weights.average}};
	j["markov_test"] = {{"chi2", report.markov.chi2},
	                    {"dof", report.markov.dof},
	                    {"alpha", report.markov.alpha},
	                    {"quantile", report.markov.quantile},
	                    {"is_markov", report.markov.is_markov},
	                    {"correction_applied", report.markov.correction_applied}};
	j["points"] = ordered_json::array();
	for (const PointReport &point : report.points) {
		ordered_json p;
		p["period"] = point.period;
		p["label"] = point.label;
		p["actual"] = point.actual;
		ordered_json predicted;
		for (std::size_t m = 0; m < report.methods.size(); ++m) {
			predicted[report.methods[m].id] = point.predicted[m];
		}
		p["predicted"] = std::move(predicted);
		j["points"].push_back(std::move(p));
	}
	return j.dump(2) + "\n";
}

std::string emit_csv(const BacktestReport &report) {
	std::string out = "method,period,label,actual,predicted,error\n";
	out += strf("pre-period,%lld,%s,%.17g,,\n",
	            static_cast<long long>(report.pre_period), report.pre_label.c_str(),
	            report.pre_actual);
	for (std::size_t m = 0; m < report.methods.size(); ++m) {
		for (const PointReport &point : report.points) {
			out += strf("%s,%lld,%s,%.17g,%.17g,%.17g\n",
			            report.methods[m].id.c_str(),
			            static_cast<long long>(point.period), point.label.c_str(),
			            point.actual, point.predicted[m],
			            point.actual - point.predicted[m]);
		}
	}
	return out;
}

std::string emit_report(const BacktestReport &report, ReportFormat format) {
	switch (format) {
	case ReportFormat::text:
		return emit_text(report);
	case ReportFormat::json:
		return emit_json(report);
	case ReportFormat::csv:
		return emit_csv(report);
	}
	throw std::invalid_argument("emit_report: unknown format");
}

BacktestReport parse_json_report(const std::string &text) {
	try {
		const ordered_json j = ordered_json::parse(text);
		BacktestReport report;
		report.horizon = j.at("horizon").get<std::size_t>();
		const auto &pre = j.at("pre_period");
		report.pre_period = pre.at("period").get<std::int64_t>();
		report.pre_label = pre.at("label").get<std::string>();
		report.pre_actual = pre.at("actual").get<double>();
		for (const auto &m : j.at("methods")) {
			MethodReport method;
			method.id = m.at("id").get<std::string>();
			method.metrics.mapfe = m.at("mapfe").get<double>();
			method.metrics.da = m.at("da").get<double>();
			method.metrics.mafe = m.at("mafe").get<double>();
			method.metrics.rmsfe = m.at("rmsfe").get<double>();
			method.forecasts = m.at("forecasts").get<std::vector<double>>();
			report.methods.push_back(std::move(method));
		}
		const auto &w = j.at("weights");
		report.weights.least_squares = w.at("least_squares").get<std::vector<double>>();
		report.weights.effective_degree =
		    w.at("effective_degree").get<std::vector<double>>();
		report.weights.grey_relation = w.at("grey_relation").get<std::vector<double>>();
		report.weights.average = w.at("average").get<std::vector<double>>();
		const auto &mk = j.at("markov_test");
		report.markov.chi2 = mk.at("chi2").get<double>();
		report.markov.dof = mk.at("dof").get<std::size_t>();
		report.markov.alpha = mk.at("alpha").get<double>();
		report.markov.quantile = mk.at("quantile").get<double>();
		report.markov.is_markov = mk.at("is_markov").get<bool>();
		report.markov.correction_applied = mk.at("correction_applied").get<bool>();
		for (const auto &p : j.at("points")) {
			PointReport point;
			point.period = p.at("period").get<std::int64_t>();
			point.label = p.at("label").get<std::string>();
			point.actual = p.at("actual").get<double>();
			for (const MethodReport &method : report.methods) {
				point.predicted.push_back(p.at("predicted").at(method.id).get<double>());
			}
			report.points.push_back(std::move(point));
		}
		return report;
	} catch (const ordered_json::exception &e) {
		throw std::invalid_argument(std::string("report JSON: ") + e.what());
	}
}

namespace {

const char *partition_name(grey::PartitionScheme scheme) {
	return scheme == grey::PartitionScheme::quantile ? "quantile" : "sigma";
}

const char *midpoint_name(grey::MarkovMidpoint midpoint) {
	return midpoint == grey::MarkovMidpoint::target ? "target" : "source";
}

const char *chi2_name(grey::Chi2Variant variant) {
	return variant == grey::Chi2Variant::abs_log ? "abs" : "lr";
}

const char *transition_name(fractal::TransitionMode mode) {
	return mode == fractal::TransitionMode::derived ? "derived" : "paper";
}

const char *direction_name(hybrid::Direction direction) {
	return direction == hybrid::Direction::maximize ? "maximize" : "minimize";
}

} // namespace

std::string config_json(const RunConfig &config) {
	ordered_json j;
	j["input"] = config.input_path;
	j["horizon"] = config.horizon;
	j["arfima"] = {{"p", config.arfima_p},
	               {"q", config.arfima_q},
	               {"zero_mean", config.arfima_zero_mean},
	               {"difference_first", config.difference_first}};
	j["grey_markov"] = {{"states", config.dgm_states},
	                    {"alpha", config.alpha},
	                    {"partition", partition_name(config.partition_scheme)},
	                    {"markov_midpoint", midpoint_name(config.markov_midpoint)},
	                    {"chi2", chi2_name(config.chi2_variant)}};
	j["kalman"] = {{"q", config.kalman_q},
	               {"r", config.kalman_r},
	               {"transition", transition_name(config.fractal_transition)}};
	j["hybrid"] = {{"rho", config.rho},
	               {"effective_direction", direction_name(config.effective_direction)}};
	j["seed"] = config.seed;
	return j.dump(2) + "\n";
}

namespace {

/// Deterministic standard normals: mt19937_64 bits through Box-Muller, so
/// the stream does not depend on the standard library's distribution
/// implementation.
class GaussianSampler {
public:
	explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

	double next() {
		if (have_spare_) {
			have_spare_ = false;
			return spare_;
		}
		const double u1 =
		    (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
		const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53; // [0, 1)
		const double radius = std::sqrt(-2.0 * std::log(u1));
		const double angle = 2.0 * 3.14159265358979323846 * u2;
		spare_ = radius * std::sin(angle);
		have_spare_ = true;
		return radius * std::cos(angle);
	}

private:
	std::mt19937_64 gen_;
	bool have_spare_ = false;
	double spare_ = 0.0;
};

} // namespace

Series simulate_arfima(double d, std::span<const double> phi, double sigma,
                       std::size_t n, std::uint64_t seed) {
	if (n < 1) {
		throw std::invalid_argument("simulate_arfima: n must be >= 1");
	}
	if (!(d > -0.5 && d < 0.5)) {
		throw std::invalid_argument("simulate_arfima: d must lie in (-0.5, 0.5)");
	}
	if (sigma < 0.0) {
		throw std::invalid_argument("simulate_arfima: sigma must be >= 0");
	}
	if (!phi.empty() && !arfima::roots_outside_unit_circle(phi)) {
		throw std::invalid_argument("simulate_arfima: non-stationary AR coefficients");
	}
	// Generate the ARMA core with a long warm-up, fractionally integrate the
	// whole path, keep the tail: the retained block then carries the full
	// long-memory history.
	const std::size_t burn = 500;
	const std::size_t total = n + burn;
	GaussianSampler gauss(seed);
	std::vector<double> w(total, 0.0);
	for (std::size_t t = 0; t < total; ++t) {
		double value = sigma * gauss.next();
		for (std::size_t i = 0; i < phi.size() && i < t; ++i) {
			value += phi[i] * w[t - 1 - i];
		}
		w[t] = value;
	}
	const std::vector<double> x = arfima::frac_diff(w, -d);
	return Series(std::vector<double>(x.end() - static_cast<std::ptrdiff_t>(n), x.end()));
}

Series simulate_dgm(const std::array<double, 4> &beta, double xi, double sigma,
                    std::size_t n, std::uint64_t seed) {
	if (n < 1) {
		throw std::invalid_argument("simulate_dgm: n must be >= 1");
	}
	if (sigma < 0.0) {
		throw std::invalid_argument("simulate_dgm: sigma must be >= 0");
	}
	std::vector<double> x0(n), x1(n);
	x0[0] = xi;
	x1[0] = xi;
	for (std::size_t k = 1; k < n; ++k) {
		x1[k] = beta[0] * x1[k - 1] + beta[1] * x0[k - 1] +
		        beta[2] * static_cast<double>(k) + beta[3];
		x0[k] = x1[k] - x1[k - 1];
	}
	if (sigma > 0.0) {
		GaussianSampler gauss(seed);
		for (double &v : x0) {
			v += sigma * gauss.next();
		}
	}
	return Series(std::move(x0));
}

Series simulate_fractal(double x1, double n1, double sigma, std::size_t n,
                        std::uint64_t seed, fractal::TransitionMode mode) {
	if (n < 3) {
		throw std::invalid_argument("simulate_fractal: need at least 3 prices");
	}
	if (!(n1 > 0.0)) {
		throw std::invalid_argument("simulate_fractal: initial price must be positive");
	}
	if (sigma < 0.0) {
		throw std::invalid_argument("simulate_fractal: sigma must be >= 0");
	}
	GaussianSampler gauss(seed);
	Eigen::Vector2d state(x1, x1 / std::log10(2.0));
	std::vector<double> z(n - 1);
	z[0] = state(0);
	for (std::size_t k = 1; k + 1 < n; ++k) {
		const auto [phi, gamma] =
		    fractal::state_transition(static_cast<std::int64_t>(k), mode);
		state = phi * state;
		if (sigma > 0.0) {
			state += gamma * (sigma * gauss.next());
		}
		z[k] = state(0);
	}
	std::vector<double> prices(n);
	prices[0] = n1;
	for (std::size_t k = 0; k + 1 < n; ++k) {
		prices[k + 1] = prices[k] / std::pow(10.0, z[k]);
	}
	return Series(std::move(prices));
}

} // namespace fxcast::backtest
