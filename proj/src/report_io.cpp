#include "beran/report_io.hpp"

#include "beran/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace beran {

std::string format_number(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json to_json(const Bandwidths& bw) {
    Json j;
    j["h"] = bw.h;
    j["g"] = bw.g ? Json(*bw.g) : Json(nullptr);
    return j;
}

Json to_json(const ResampleDiagnostics& d) {
    return Json{{"saturated_lifetimes", d.saturated_lifetimes},
                {"saturated_censoring", d.saturated_censoring},
                {"covariate_retries", d.covariate_retries}};
}

Json to_json(const BandwidthSelection& sel, bool with_trace) {
    Json j;
    j["h_star"] = sel.h_star;
    j["g_star"] = sel.g_star ? Json(*sel.g_star) : Json(nullptr);
    j["box_h"] = {sel.box_h.low, sel.box_h.high};
    j["box_g"] = sel.box_g ? Json{sel.box_g->low, sel.box_g->high} : Json(nullptr);
    j["objective"] = sel.objective;
    j["B"] = sel.B;
    j["seed"] = sel.seed;
    j["pilot_r"] = sel.pilot_r;
    j["pilot_s"] = sel.pilot_s ? Json(*sel.pilot_s) : Json(nullptr);
    j["diagnostics"] = to_json(sel.diagnostics);
    if (with_trace) {
        Json trace = Json::array();
        for (const auto& p : sel.trace) {
            Json row;
            row["h"] = p.point[0];
            if (p.point.size() > 1) row["g"] = p.point[1];
            row["mise"] = std::isfinite(p.value) ? Json(p.value) : Json(nullptr);
            trace.push_back(std::move(row));
        }
        j["trace"] = std::move(trace);
    }
    return j;
}

Json region_sidecar(const ConfidenceRegion& r) {
    Json j;
    j["method"] = to_string(r.method);
    j["estimator"] = to_string(r.estimator);
    j["level"] = r.level;
    j["lambda_or_rho"] = r.calibration;
    j["bandwidths"] = to_json(r.bandwidths);
    j["x0"] = r.x0;
    j["seed"] = r.seed;
    j["degenerate"] = r.degenerate;
    double width = 0.0;
    for (std::size_t i = 0; i < r.lower.size(); ++i) width += r.upper[i] - r.lower[i];
    j["average_width"] = r.lower.empty() ? 0.0 : width / static_cast<double>(r.lower.size());
    j["diagnostics"] = to_json(r.diagnostics);
    return j;
}

Json to_json(const RelativeMetrics& m) {
    Json j;
    j["mean_h_star"] = m.mean_h;
    j["sd_h_star"] = m.sd_h;
    j["mean_g_star"] = m.mean_g ? Json(*m.mean_g) : Json(nullptr);
    j["sd_g_star"] = m.sd_g ? Json(*m.sd_g) : Json(nullptr);
    j["H_bar"] = m.h_bar;
    j["mean_rmise_at_selected"] = m.mean_rmise;
    j["R_bar"] = m.r_bar;
    j["H"] = m.h_rel;
    j["R"] = m.r_rel;
    return j;
}

Json to_json(const RegionMetrics& m) {
    return Json{{"regions", m.regions},
                {"average_width", m.average_width},
                {"coverage", m.coverage},
                {"pointwise_coverage", m.pointwise_coverage},
                {"iws", m.iws},
                {"winkler_dominance", m.winkler_dominance}};
}

Json to_json(const BenchReport& r) {
    const auto& c = r.config;
    Json j;
    j["model"] = to_string(c.model);
    j["censoring"] = c.censoring;
    j["estimator"] = to_string(c.estimator);
    j["N"] = c.N;
    j["B"] = c.B;
    j["n"] = c.n;
    j["n_T"] = c.n_T;
    j["N_mise"] = c.N_mise;
    j["alpha"] = c.alpha;
    j["seed"] = c.seed;
    j["strategy"] = c.strategy.kind == SelectionStrategy::Kind::grid ? "grid" : "multistart";
    j["scale"] = {{"desk", {{"N", c.N}, {"B", c.B}, {"n", c.n}}}, {"reference", {{"N", 300}, {"B", 500}, {"n", 400}}}};
    j["complete"] = r.complete;
    j["completed_samples"] = r.completed;
    j["mise_bandwidths"] = to_json(r.mise_bandwidths);
    j["rmise_at_optimal"] = r.rmise_at_optimal;
    j["selection"] = r.selection ? to_json(*r.selection) : Json(nullptr);
    Json regions = nullptr;
    if (r.method1 || r.method2) {
        regions = Json::object();
        if (r.method1) regions["method1"] = to_json(*r.method1);
        if (r.method2) regions["method2"] = to_json(*r.method2);
        regions["method1_failures"] = r.region_failures;
    }
    j["regions"] = std::move(regions);
    j["diagnostics"] = to_json(r.diagnostics);
    Json samples = Json::array();
    for (const auto& s : r.samples) {
        Json row;
        row["pilot_r"] = s.pilot_r;
        row["pilot_s"] = s.pilot_s ? Json(*s.pilot_s) : Json(nullptr);
        row["selected"] = s.selected ? to_json(*s.selected) : Json(nullptr);
        row["lambda_star"] = s.method1 ? Json(s.method1->calibration) : Json(nullptr);
        row["rho_star"] = s.method2 ? Json(s.method2->calibration) : Json(nullptr);
        if (s.region_error) row["region_error"] = *s.region_error;
        samples.push_back(std::move(row));
    }
    j["samples"] = std::move(samples);
    return j;
}

std::string curve_csv(const SurvivalCurve& curve) {
    std::ostringstream out;
    out << "t,S_hat\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << format_number(curve.grid[i]) << ',' << format_number(curve.values[i]) << '\n';
    return out.str();
}

std::string region_csv(const ConfidenceRegion& r) {
    std::ostringstream out;
    out << "t,lower,estimate,upper\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        out << format_number(r.grid[i]) << ',' << format_number(r.lower[i]) << ',' << format_number(r.estimate[i])
            << ',' << format_number(r.upper[i]) << '\n';
    return out.str();
}

std::string selection_table_csv(std::span<const BenchReport> reports) {
    std::ostringstream out;
    out << "model,estimator,censoring,h_mise,g_mise,rmise_at_mise,mean_h_star,sd_h_star,mean_g_star,sd_g_star,"
           "H_bar,mean_rmise_at_star,R_bar\n";
    const auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& r : reports) {
        if (!r.selection) continue;
        const auto& s = *r.selection;
        out << to_string(r.config.model) << ',' << to_string(r.config.estimator) << ','
            << format_number(r.config.censoring) << ',' << format_number(r.mise_bandwidths.h) << ','
            << opt(r.mise_bandwidths.g) << ',' << format_number(r.rmise_at_optimal) << ',' << format_number(s.mean_h)
            << ',' << format_number(s.sd_h) << ',' << opt(s.mean_g) << ',' << opt(s.sd_g) << ','
            << format_number(s.h_bar) << ',' << format_number(s.mean_rmise) << ',' << format_number(s.r_bar) << '\n';
    }
    return out.str();
}

std::string region_table_csv(std::span<const BenchReport> reports) {
    std::ostringstream out;
    out << "model,estimator,censoring,method,width,coverage_pct,pointwise_coverage_pct,iws\n";
    for (const auto& r : reports) {
        const auto row = [&](const char* method, const RegionMetrics& m) {
            out << to_string(r.config.model) << ',' << to_string(r.config.estimator) << ','
                << format_number(r.config.censoring) << ',' << method << ',' << format_number(m.average_width) << ','
                << format_number(100.0 * m.coverage) << ',' << format_number(100.0 * m.pointwise_coverage) << ','
                << format_number(m.iws) << '\n';
        };
        if (r.method1) row("method1", *r.method1);
        if (r.method2) row("method2", *r.method2);
    }
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

} // namespace beran
