// beran: conditional survival curves, bootstrap bandwidths and confidence
// regions from the command line.
#include "beran/bandwidth.hpp"
#include "beran/benchmark.hpp"
#include "beran/data_io.hpp"
#include "beran/error.hpp"
#include "beran/estimators.hpp"
#include "beran/regions.hpp"
#include "beran/report_io.hpp"
#include "beran/rng.hpp"
#include "beran/simulation.hpp"
#include "beran/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace beran;

namespace {

struct DataOptions {
    std::string input;
    std::string x_col = "x", time_col = "z", status_col = "delta";
    std::vector<std::string> filters; // col=v1,v2
    std::string split_by;
    std::vector<double> support;

    void add(CLI::App* cmd, bool with_split) {
        cmd->add_option("--input", input, "CSV file with covariate, time and status columns")->required();
        cmd->add_option("--x-col", x_col, "Covariate column")->capture_default_str();
        cmd->add_option("--time-col", time_col, "Observed time column")->capture_default_str();
        cmd->add_option("--status-col", status_col, "Status column (1 = event, 0 = censored)")->capture_default_str();
        cmd->add_option("--filter", filters, "Subpopulation filter col=v1,v2 (repeatable)");
        cmd->add_option("--support", support, "Covariate support a b; enables boundary reflection")->expected(2);
        if (with_split) cmd->add_option("--split-by", split_by, "Run once per level of this column");
    }

    DatasetSchema schema() const {
        DatasetSchema s;
        s.covariate_column = x_col;
        s.time_column = time_col;
        s.status_column = status_col;
        return s;
    }

    SubpopulationFilter filter() const {
        SubpopulationFilter f;
        for (const auto& spec : filters) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos || eq == 0)
                throw Error(ErrorKind::invalid_input, "filter '" + spec + "' is not of the form col=v1,v2");
            auto& values = f[spec.substr(0, eq)];
            std::stringstream ss(spec.substr(eq + 1));
            std::string v;
            while (std::getline(ss, v, ',')) values.insert(v);
        }
        return f;
    }

    KernelSpec kernel() const {
        KernelSpec k;
        if (!support.empty()) k.support = Interval{support[0], support[1]};
        k.validate();
        return k;
    }

    /// The (filtered) dataset, split into labelled groups when requested.
    std::vector<std::pair<std::string, Dataset>> load() const {
        Dataset data = load_csv(input, schema());
        const auto f = filter();
        if (!f.empty()) data = filter_subpopulation(data, f);
        if (split_by.empty()) return {{"all", std::move(data)}};
        const auto it = data.factors.find(split_by);
        if (it == data.factors.end()) throw Error(ErrorKind::schema, "unknown split column '" + split_by + "'");
        std::set<std::string> levels(it->second.begin(), it->second.end());
        std::vector<std::pair<std::string, Dataset>> out;
        for (const auto& level : levels)
            out.emplace_back(split_by + "=" + level, filter_subpopulation(data, {{split_by, {level}}}));
        return out;
    }
};

struct GridOptions {
    std::size_t n_t = 100;
    std::optional<double> t_max;
    void add(CLI::App* cmd) {
        cmd->add_option("--n-t", n_t, "Number of grid points")->capture_default_str()->check(CLI::Range(2, 1000000));
        cmd->add_option("--t-max", t_max, "Last grid point (default: sample 0.95 quantile of the times)")
            ->check(CLI::PositiveNumber);
    }
    TimeGrid grid(const SurvivalSample& s) const {
        const double tm = t_max ? *t_max : quantile(s.z(), 0.95);
        if (!(tm > 0.0)) throw Error(ErrorKind::invalid_input, "grid end must be positive; pass --t-max");
        return TimeGrid::uniform(tm, n_t);
    }
};

Json grid_json(const TimeGrid& g) {
    return Json{{"n_T", g.size()}, {"t_max", g.t_max()}};
}

std::string fmt(double v) {
    return format_number(v);
}

SelectionStrategy make_strategy(const std::string& name, std::size_t m) {
    SelectionStrategy s;
    if (name == "grid")
        s.kind = SelectionStrategy::Kind::grid;
    else if (name == "multistart")
        s.kind = SelectionStrategy::Kind::multistart;
    else
        throw Error(ErrorKind::invalid_input, "unknown strategy '" + name + "' (grid or multistart)");
    s.m = m;
    return s;
}

Estimator smoothing_estimator(const std::string& name) {
    const Estimator e = parse_estimator(name);
    if (e == Estimator::kaplan_meier)
        throw Error(ErrorKind::invalid_input, "this command needs the beran or smoothed-beran estimator");
    return e;
}

ResamplingScheme scheme_for(Estimator e) {
    return e == Estimator::smoothed_beran ? ResamplingScheme::smoothed_beran : ResamplingScheme::beran;
}

std::optional<Interval> box_option(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return Interval{v[0], v[1]};
}

Json stochastic_meta(std::uint64_t seed, int B, std::size_t n) {
    return Json{{"seed", seed}, {"B", B}, {"n", n}, {"version", version}};
}

// Replace any flag set in the JSON config, then append the config values.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    if (path.empty()) return kept;
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::parse, "config '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw Error(ErrorKind::schema, "config must be a JSON object");
    if (cfg.contains("command")) {
        const bool has_command = !kept.empty() && kept[0].rfind("-", 0) != 0;
        if (!has_command) kept.insert(kept.begin(), cfg["command"].get<std::string>());
    }
    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") continue;
        const std::string flag = "--" + key;
        // Drop the flag and its values from the command line.
        std::vector<std::string> next;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            if (kept[i] == flag) {
                while (i + 1 < kept.size() && kept[i + 1].rfind("--", 0) != 0) ++i;
                continue;
            }
            if (kept[i].rfind(flag + "=", 0) == 0) continue;
            next.push_back(kept[i]);
        }
        kept = std::move(next);
        const auto scalar = [](const Json& v) {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_float()) return format_number(v.get<double>());
            return v.dump();
        };
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back(flag);
        } else if (value.is_array()) {
            extra.push_back(flag);
            for (const auto& v : value) extra.push_back(scalar(v));
        } else if (!value.is_null()) {
            extra.push_back(flag);
            extra.push_back(scalar(value));
        }
    }
    kept.insert(kept.end(), extra.begin(), extra.end());
    return kept;
}

void write_error_json(const std::string& target, const std::string& kind, const std::string& message, int code) {
    if (target.empty()) return;
    const Json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (target == "-")
        std::cerr << j.dump() << '\n';
    else
        write_json(target, j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional survival estimation with bootstrap bandwidths and confidence regions", "beran"};
    app.require_subcommand(1);
    // Single-letter long flags (--h, --g) would clash with -h.
    app.set_help_flag("--help", "Print this help message and exit");
    int threads = 0;
    std::string error_json;
    app.add_option("--threads", threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    app.add_option("--error-json", error_json, "On failure write a JSON error record here ('-' for stderr)");
    app.set_version_flag("--version", std::string(version));
    app.add_option("--config", "JSON object of flag values; overrides the command line");

    // fit
    auto* fit = app.add_subcommand("fit", "Estimate S(t|x0) on a time grid");
    DataOptions fit_data;
    GridOptions fit_grid;
    std::string fit_est = "beran", fit_out = "fit_out";
    std::vector<double> fit_x0;
    double fit_h = 0.0;
    std::optional<double> fit_g;
    fit_data.add(fit, false);
    fit_grid.add(fit);
    fit->add_option("--estimator", fit_est, "beran, smoothed-beran or kaplan-meier")->capture_default_str();
    fit->add_option("--x0", fit_x0, "Covariate values");
    fit->add_option("--h", fit_h, "Covariate bandwidth")->check(CLI::PositiveNumber);
    fit->add_option("--g", fit_g, "Time bandwidth (smoothed-beran)")->check(CLI::PositiveNumber);
    fit->add_option("--out-dir", fit_out, "Output directory")->capture_default_str();

    // select-bandwidth
    auto* sel = app.add_subcommand("select-bandwidth", "Bootstrap bandwidth selection at x0");
    DataOptions sel_data;
    GridOptions sel_grid;
    std::string sel_est = "beran", sel_strategy = "multistart", sel_out = "selection.json";
    double sel_x0 = 0.0, sel_c = 1.5;
    int sel_B = 500;
    std::uint64_t sel_seed = 0;
    std::size_t sel_m = 64;
    std::vector<double> sel_box_h, sel_box_g;
    sel_data.add(sel, false);
    sel_grid.add(sel);
    sel->add_option("--estimator", sel_est, "beran (selects h) or smoothed-beran (selects h and g)")
        ->capture_default_str();
    sel->add_option("--x0", sel_x0, "Covariate value")->required();
    sel->add_option("--B", sel_B, "Bootstrap resamples")->capture_default_str()->check(CLI::PositiveNumber);
    sel->add_option("--seed", sel_seed, "Random seed")->required();
    sel->add_option("--c", sel_c, "Constant of the covariate pilot bandwidth")->capture_default_str()->check(
        CLI::PositiveNumber);
    sel->add_option("--strategy", sel_strategy, "grid or multistart")->capture_default_str();
    sel->add_option("--m", sel_m, "Grid points per axis for the grid strategy")->capture_default_str()->check(
        CLI::Range(2, 100000));
    sel->add_option("--box-h", sel_box_h, "Search interval for h")->expected(2);
    sel->add_option("--box-g", sel_box_g, "Search interval for g")->expected(2);
    sel->add_option("--out", sel_out, "Selection JSON")->capture_default_str();

    // region
    auto* reg = app.add_subcommand("region", "Bootstrap confidence region for S(.|x0)");
    DataOptions reg_data;
    GridOptions reg_grid;
    std::string reg_est = "smoothed-beran", reg_out = "region_out", reg_strategy = "multistart";
    std::vector<double> reg_x0;
    std::optional<double> reg_h, reg_g;
    int reg_method = 1, reg_B = 500;
    double reg_alpha = 0.05, reg_c = 1.5;
    std::uint64_t reg_seed = 0;
    reg_data.add(reg, true);
    reg_grid.add(reg);
    reg->add_option("--estimator", reg_est, "beran or smoothed-beran")->capture_default_str();
    reg->add_option("--x0", reg_x0, "Covariate values")->required();
    reg->add_option("--h", reg_h, "Covariate bandwidth (default: bootstrap selection)")->check(CLI::PositiveNumber);
    reg->add_option("--g", reg_g, "Time bandwidth (default: bootstrap selection)")->check(CLI::PositiveNumber);
    reg->add_option("--method", reg_method, "1 (variance-scaled) or 2 (sup-norm ball)")->capture_default_str()->check(
        CLI::IsMember({1, 2}));
    reg->add_option("--alpha", reg_alpha, "1 - confidence level")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    reg->add_option("--B", reg_B, "Bootstrap resamples")->capture_default_str()->check(CLI::PositiveNumber);
    reg->add_option("--seed", reg_seed, "Random seed")->required();
    reg->add_option("--c", reg_c, "Constant of the covariate pilot bandwidth")->capture_default_str()->check(
        CLI::PositiveNumber);
    reg->add_option("--strategy", reg_strategy, "Selection strategy when h is not given")->capture_default_str();
    reg->add_option("--out-dir", reg_out, "Output directory")->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo study of the selectors and regions on the models");
    std::vector<std::string> sim_models{"model1"};
    std::vector<double> sim_cens{0.2};
    std::string sim_est = "beran", sim_strategy = "multistart", sim_out = "simulate_out";
    BenchConfig sim_cfg;
    bool sim_no_select = false, sim_no_regions = false;
    std::optional<double> sim_h, sim_g, sim_c;
    sim->add_option("--model", sim_models, "model1 and/or model2")->capture_default_str();
    sim->add_option("--censoring", sim_cens, "Censoring levels (0.2, 0.5)")->capture_default_str();
    sim->add_option("--estimator", sim_est, "beran or smoothed-beran")->capture_default_str();
    sim->add_option("--N", sim_cfg.N, "Simulated samples")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--B", sim_cfg.B, "Bootstrap resamples")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--n", sim_cfg.n, "Sample size")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--n-t", sim_cfg.n_T, "Grid points")->capture_default_str()->check(CLI::Range(2, 1000000));
    sim->add_option("--n-mise", sim_cfg.N_mise, "Samples behind the Monte Carlo MISE")->capture_default_str()->check(
        CLI::PositiveNumber);
    sim->add_option("--mise-grid", sim_cfg.mise_grid, "Grid points per axis for the MISE optimum")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000));
    sim->add_option("--h-mise", sim_h, "Skip the MISE search and use this h")->check(CLI::PositiveNumber);
    sim->add_option("--g-mise", sim_g, "Skip the MISE search and use this g")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_cfg.seed, "Master seed")->required();
    sim->add_option("--alpha", sim_cfg.alpha, "1 - confidence level")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    sim->add_option("--c", sim_c, "Pilot constant (default: model's)")->check(CLI::PositiveNumber);
    sim->add_option("--strategy", sim_strategy, "grid or multistart")->capture_default_str();
    sim->add_option("--m", sim_cfg.strategy.m, "Grid points per axis for the grid strategy")->capture_default_str();
    sim->add_flag("--no-select", sim_no_select, "Skip bandwidth selection");
    sim->add_flag("--no-regions", sim_no_regions, "Skip confidence regions");
    sim->add_option("--budget", sim_cfg.budget_seconds, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
    sim->add_option("--out-dir", sim_out, "Output directory")->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "Time the 1-D selector over sample sizes");
    std::string bench_model = "model1", bench_strategy = "multistart", bench_out = "bench.json";
    double bench_cens = 0.2;
    std::vector<std::size_t> bench_sizes{400, 800};
    int bench_B = 100;
    std::uint64_t bench_seed = 0;
    std::size_t bench_m = 64;
    bench->add_option("--model", bench_model)->capture_default_str();
    bench->add_option("--censoring", bench_cens)->capture_default_str();
    bench->add_option("--n", bench_sizes, "Sample sizes")->capture_default_str();
    bench->add_option("--B", bench_B, "Bootstrap resamples")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "Random seed")->required();
    bench->add_option("--strategy", bench_strategy)->capture_default_str();
    bench->add_option("--m", bench_m)->capture_default_str();
    bench->add_option("--out", bench_out, "Timing JSON")->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "Write a simulated sample as CSV");
    std::string gen_model = "model1", gen_out = "sample.csv";
    double gen_cens = 0.2;
    std::size_t gen_n = 400;
    std::uint64_t gen_seed = 0;
    gen->add_option("--model", gen_model)->capture_default_str();
    gen->add_option("--censoring", gen_cens)->capture_default_str();
    gen->add_option("--n", gen_n)->capture_default_str()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed)->required();
    gen->add_option("--out", gen_out)->capture_default_str();

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code != 0) {
            write_error_json(error_json, "invalid-input", e.what(), 2);
            return 2;
        }
        return 0;
    } catch (const Error& e) {
        write_error_json(error_json, to_string(e.kind()), e.what(), exit_code(e.kind()));
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }

    try {
        set_worker_count(threads);

        if (fit->parsed()) {
            const Estimator est = parse_estimator(fit_est);
            if (est != Estimator::kaplan_meier) {
                if (fit_x0.empty()) throw Error(ErrorKind::invalid_input, "--x0 is required for this estimator");
                if (!(fit_h > 0.0)) throw Error(ErrorKind::invalid_input, "--h is required for this estimator");
                if (est == Estimator::smoothed_beran && !fit_g)
                    throw Error(ErrorKind::invalid_input, "--g is required for the smoothed estimator");
            }
            const auto groups = fit_data.load();
            const Dataset& data = groups.front().second;
            const TimeGrid grid = fit_grid.grid(data.sample);
            const KernelSpec kernel = fit_data.kernel();
            fs::create_directories(fit_out);
            Json meta;
            meta["estimator"] = to_string(est);
            meta["n"] = data.stats.rows;
            meta["events"] = data.stats.events;
            meta["censoring_fraction"] = data.stats.censoring_fraction;
            meta["grid"] = grid_json(grid);
            meta["version"] = version;
            Json curves = Json::array();
            const std::vector<double> xs = est == Estimator::kaplan_meier ? std::vector<double>{0.0} : fit_x0;
            for (std::size_t k = 0; k < xs.size(); ++k) {
                const Bandwidths bw{fit_h, est == Estimator::smoothed_beran ? fit_g : std::nullopt};
                const SurvivalCurve c = estimate_curve(data.sample, est, xs[k], bw, grid, kernel);
                const std::string file = "curve_" + std::to_string(k) + ".csv";
                write_text(fs::path(fit_out) / file, curve_csv(c));
                Json row{{"file", file}};
                row["x0"] = est == Estimator::kaplan_meier ? Json(nullptr) : Json(xs[k]);
                row["bandwidths"] = est == Estimator::kaplan_meier ? Json(nullptr) : to_json(bw);
                curves.push_back(std::move(row));
            }
            meta["curves"] = std::move(curves);
            write_json(fs::path(fit_out) / "fit.json", meta);
        } else if (sel->parsed()) {
            const Estimator est = smoothing_estimator(sel_est);
            const auto groups = sel_data.load();
            const SurvivalSample& s = groups.front().second.sample;
            const TimeGrid grid = sel_grid.grid(s);
            const KernelSpec kernel = sel_data.kernel();
            const ResamplingPlan plan = pilot_plan(s, scheme_for(est), sel_B, sel_seed, sel_c);
            const SelectionStrategy strategy = make_strategy(sel_strategy, sel_m);
            const Interval box_h = box_option(sel_box_h).value_or(default_box_h(s));
            const BandwidthSelection result =
                est == Estimator::smoothed_beran
                    ? select_bandwidth_2d(s, sel_x0, box_h, box_option(sel_box_g).value_or(default_box_g(s)), plan,
                                          grid, kernel, strategy)
                    : select_bandwidth_1d(s, sel_x0, box_h, plan, grid, kernel, strategy);
            Json j = to_json(result);
            j["estimator"] = to_string(est);
            j["x0"] = sel_x0;
            j["strategy"] = sel_strategy;
            j["grid"] = grid_json(grid);
            j["meta"] = stochastic_meta(sel_seed, sel_B, s.size());
            write_json(sel_out, j);
        } else if (reg->parsed()) {
            const Estimator est = smoothing_estimator(reg_est);
            if (reg_g && est != Estimator::smoothed_beran)
                throw Error(ErrorKind::invalid_input, "--g only applies to the smoothed estimator");
            const KernelSpec kernel = reg_data.kernel();
            const auto groups = reg_data.load();
            fs::create_directories(reg_out);
            Json index = Json::array();
            std::size_t file_no = 0;
            for (const auto& [label, data] : groups) {
                const SurvivalSample& s = data.sample;
                const TimeGrid grid = reg_grid.grid(s);
                const ResamplingPlan plan = pilot_plan(s, scheme_for(est), reg_B, reg_seed, reg_c);
                for (double x0 : reg_x0) {
                    Bandwidths bw;
                    Json selection = nullptr;
                    const bool need_g = est == Estimator::smoothed_beran && !reg_g;
                    if (!reg_h || need_g) {
                        // Selection uses its own stream of the same seed.
                        ResamplingPlan sel_plan = plan;
                        sel_plan.seed = derive_seed(reg_seed, {1});
                        const SelectionStrategy strategy = make_strategy(reg_strategy, 64);
                        const BandwidthSelection bs =
                            est == Estimator::smoothed_beran
                                ? select_bandwidth_2d(s, x0, default_box_h(s), default_box_g(s), sel_plan, grid,
                                                      kernel, strategy)
                                : select_bandwidth_1d(s, x0, default_box_h(s), sel_plan, grid, kernel, strategy);
                        bw = {bs.h_star, bs.g_star};
                        selection = to_json(bs, false);
                    }
                    if (reg_h) bw.h = *reg_h;
                    if (reg_g) bw.g = reg_g;
                    const ConfidenceRegion r =
                        reg_method == 1 ? region_method1(s, x0, est, bw, plan, grid, kernel, reg_alpha)
                                        : region_method2(s, x0, est, bw, plan, grid, kernel, reg_alpha);
                    const std::string stem = "region_" + std::to_string(file_no++);
                    write_text(fs::path(reg_out) / (stem + ".csv"), region_csv(r));
                    Json side = region_sidecar(r);
                    side["group"] = label;
                    side["n"] = s.size();
                    side["B"] = reg_B;
                    side["pilot_r"] = plan.pilot_r;
                    side["pilot_s"] = plan.pilot_s ? Json(*plan.pilot_s) : Json(nullptr);
                    side["selection"] = std::move(selection);
                    side["grid"] = grid_json(grid);
                    side["version"] = version;
                    write_json(fs::path(reg_out) / (stem + ".json"), side);
                    index.push_back(Json{{"group", label}, {"x0", x0}, {"csv", stem + ".csv"},
                                         {"json", stem + ".json"}, {"average_width", side["average_width"]}});
                }
            }
            write_json(fs::path(reg_out) / "regions.json", Json{{"regions", index}});
        } else if (sim->parsed()) {
            const Estimator est = smoothing_estimator(sim_est);
            sim_cfg.estimator = est;
            sim_cfg.select = !sim_no_select;
            sim_cfg.regions = !sim_no_regions;
            sim_cfg.strategy = make_strategy(sim_strategy, sim_cfg.strategy.m);
            sim_cfg.pilot_c = sim_c;
            if (sim_h) sim_cfg.mise_bandwidths = Bandwidths{*sim_h, sim_g};
            else if (sim_g) throw Error(ErrorKind::invalid_input, "--g-mise needs --h-mise");
            std::vector<BenchReport> reports;
            Json all = Json::array();
            bool complete = true;
            for (const auto& m : sim_models) {
                for (double cens : sim_cens) {
                    BenchConfig cfg = sim_cfg;
                    cfg.model = parse_model(m);
                    cfg.censoring = cens;
                    reports.push_back(run_benchmark(cfg));
                    complete = complete && reports.back().complete;
                    all.push_back(to_json(reports.back()));
                }
            }
            fs::create_directories(sim_out);
            write_json(fs::path(sim_out) / "report.json", Json{{"version", version}, {"reports", all}});
            if (sim_cfg.select) write_text(fs::path(sim_out) / "selection_table.csv", selection_table_csv(reports));
            if (sim_cfg.regions) write_text(fs::path(sim_out) / "region_table.csv", region_table_csv(reports));
            if (!complete) throw Error(ErrorKind::budget_exceeded, "budget exhausted; partial report written");
        } else if (bench->parsed()) {
            const auto pts = run_scaling_bench(parse_model(bench_model), bench_cens, bench_sizes, bench_B, bench_seed,
                                               make_strategy(bench_strategy, bench_m));
            Json rows = Json::array();
            for (const auto& p : pts) rows.push_back(Json{{"n", p.n}, {"seconds", p.seconds}, {"h_star", p.h_star}});
            Json j{{"model", bench_model}, {"censoring", bench_cens}, {"B", bench_B}, {"seed", bench_seed},
                   {"threads", worker_count()}, {"version", version}, {"timings", rows}};
            if (pts.size() >= 2 && pts.front().seconds > 0.0)
                j["ratio_last_to_first"] = pts.back().seconds / pts.front().seconds;
            write_json(bench_out, j);
            for (const auto& p : pts) std::cout << "n=" << p.n << " seconds=" << fmt(p.seconds) << '\n';
        } else if (gen->parsed()) {
            const SimModel model = SimModel::make(parse_model(gen_model), gen_cens);
            save_csv(gen_out, generate_sample(model, gen_n, gen_seed));
        }
    } catch (const Error& e) {
        write_error_json(error_json, to_string(e.kind()), e.what(), exit_code(e.kind()));
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        write_error_json(error_json, "internal", e.what(), 1);
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
