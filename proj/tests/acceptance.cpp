// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any gated criterion fails (AC8 is reported only).

#include "beran/bandwidth.hpp"
#include "beran/benchmark.hpp"
#include "beran/estimators.hpp"
#include "beran/regions.hpp"
#include "beran/resampling.hpp"
#include "beran/rng.hpp"
#include "beran/simulation.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace beran;
namespace fs = std::filesystem;

namespace {

bool gated_failure = false;

void report(const char* id, bool pass, const std::string& detail, bool gated = true) {
    std::printf("%s %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass && gated) gated_failure = true;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SurvivalSample random_sample(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n), z(n);
    std::vector<int> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        // a coarse lattice half the time, so ties show up
        const double t = -std::log(u(rng));
        z[i] = (i % 2) ? std::ceil(t * 8.0) / 8.0 : t;
        d[i] = u(rng) < 0.65;
    }
    return {x, z, d};
}

void ac1() {
    const auto a = SimModel::make(ModelId::model1, 0.2);
    const auto b = SimModel::make(ModelId::model1, 0.5);
    const auto m2 = SimModel::make(ModelId::model2, 0.2);
    const double p02 = a.censoring_probability(0.6), p05 = b.censoring_probability(0.6);
    const double s1 = a.true_survival(0.8654, 0.6), s2 = m2.true_survival(3.8211, 0.8);
    const bool ok = std::abs(p02 - 0.2) <= 1e-15 && std::abs(p05 - 0.5) <= 1e-15 && std::abs(s1 - 0.05) <= 5e-4 &&
                    std::abs(s2 - 0.05) <= 5e-4;
    report("AC1", ok, fmt("p(0.6)=%.17g,%.17g S1=%.6f S2=%.6f", p02, p05, s1, s2));
}

void ac2() {
    Rng rng(2024);
    const TimeGrid grid = TimeGrid::uniform(3.0, 120);
    const KernelSpec k;
    double km_err = 0.0, mass_err = 0.0, g0_err = 0.0;
    bool monotone = true;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto s = random_sample(rng, 20 + rep % 80);
        const double x0 = 0.05 + 0.9 * (rep % 10) / 9.0;
        const double h = 0.05 + 0.02 * (rep % 13);
        const auto km = kaplan_meier(s, grid).values;
        const auto flat = beran_survival(s, x0, 1e9, grid, k).values;
        for (std::size_t i = 0; i < grid.size(); ++i) km_err = std::max(km_err, std::abs(km[i] - flat[i]));

        const auto b = beran_survival(s, x0, h, grid, k).values;
        const auto sm = smoothed_beran_survival(s, x0, h, 0.2, grid, k).values;
        for (const auto* c : {&b, &sm}) {
            double prev = 1.0;
            for (double v : *c) {
                monotone = monotone && v >= 0.0 && v <= 1.0 && v <= prev + 1e-15;
                prev = v;
            }
        }
        // jump masses add up to 1 - S(last time), and the smoothed curve tends to S(last time)
        const SortedSample sorted(s);
        CurveEvaluator eval(sorted, k);
        std::vector<double> tail(2);
        eval.beran(x0, h, TimeGrid({1e6, 2e6}), tail);
        const auto gs = eval.group_survival();
        double drops = 0.0, prev = 1.0;
        for (double v : gs) {
            drops += prev - v;
            prev = v;
        }
        mass_err = std::max(mass_err, std::abs(drops - (1.0 - tail[0])));
        std::vector<double> far(2);
        eval.smoothed(x0, h, 0.2, TimeGrid({1e3, 2e3}), far);
        mass_err = std::max(mass_err, std::abs(far[0] - tail[0]));

        if (rep % 10 == 0) {
            std::vector<double> pts;
            const auto z = s.z();
            for (double t : grid.points())
                if (std::none_of(z.begin(), z.end(), [&](double v) { return std::abs(v - t) < 1e-3; })) pts.push_back(t);
            const TimeGrid off(pts);
            const auto bb = beran_survival(s, x0, h, off, k).values;
            const auto ss = smoothed_beran_survival(s, x0, h, 1e-5, off, k).values;
            for (std::size_t i = 0; i < pts.size(); ++i) g0_err = std::max(g0_err, std::abs(bb[i] - ss[i]));
        }
    }
    const bool ok = km_err <= 1e-12 && monotone && mass_err <= 1e-12 && g0_err <= 1e-9;
    report("AC2", ok,
           fmt("km_err=%.3g mass_err=%.3g g0_err=%.3g monotone=%g", km_err, mass_err, g0_err, monotone ? 1.0 : 0.0));
}

void ac3() {
    // exact law of (X*, Z*, delta*) for a 5-point sample, built from an
    // independent product-limit and from the library's conditional laws
    const SurvivalSample s({0.1, 0.3, 0.5, 0.7, 0.9}, {0.5, 1.0, 1.5, 2.0, 2.5}, {1, 0, 1, 1, 0});
    const double r = 0.25;
    const ConditionalLaws laws(s, r, KernelSpec{});
    const std::vector<double> z(s.z().begin(), s.z().end());
    const std::vector<int> d(s.delta().begin(), s.delta().end());
    std::vector<int> dc(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) dc[i] = 1 - d[i];
    using Key = std::tuple<double, double, int>;
    std::map<Key, double> lib, ref;
    auto enumerate = [&](std::map<Key, double>& out, std::size_t j, const std::vector<double>& tv,
                         const std::vector<double>& tp, const std::vector<double>& cv, const std::vector<double>& cp) {
        for (std::size_t a = 0; a < tv.size(); ++a)
            for (std::size_t b = 0; b < cv.size(); ++b)
                out[{s.x()[j], std::min(tv[a], cv[b]), tv[a] <= cv[b] ? 1 : 0}] += tp[a] * cp[b] / 5.0;
    };
    auto masses = [&](std::span<const double> atoms, std::span<const double> cdf, std::vector<double>& v,
                      std::vector<double>& p) {
        double prev = 0.0;
        for (std::size_t m = 0; m < atoms.size(); ++m) {
            v.push_back(atoms[m]);
            p.push_back(cdf[m] - prev);
            prev = cdf[m];
        }
        v.push_back(laws.max_time());
        p.push_back(1.0 - prev);
    };
    for (std::size_t j = 0; j < 5; ++j) {
        std::vector<double> tv, tp, cv, cp;
        masses(laws.lifetime_atoms(), laws.lifetime_cdf(j), tv, tp);
        masses(laws.censoring_atoms(), laws.censoring_cdf(j), cv, cp);
        enumerate(lib, j, tv, tp, cv, cp);

        std::vector<double> w;
        for (double x : s.x()) w.push_back(oracle::normal_pdf((s.x()[j] - x) / r));
        double sum = 0.0;
        for (double v : w) sum += v;
        for (auto& v : w) v /= sum;
        std::vector<double> rtv, rtp, rcv, rcp;
        double prev = 1.0;
        for (double a : {0.5, 1.5, 2.0}) {
            const double sv = oracle::product_limit(z, d, w, a);
            rtv.push_back(a);
            rtp.push_back(prev - sv);
            prev = sv;
        }
        rtv.push_back(2.5);
        rtp.push_back(prev);
        // censoring law: ties go to the event first, so its risk set is the same tail
        prev = 1.0;
        for (double a : {1.0, 2.5}) {
            const double sv = oracle::product_limit(z, dc, w, a);
            rcv.push_back(a);
            rcp.push_back(prev - sv);
            prev = sv;
        }
        rcv.push_back(2.5);
        rcp.push_back(prev);
        enumerate(ref, j, rtv, rtp, rcv, rcp);
    }
    double enum_err = 0.0;
    std::set<Key> keys;
    for (const auto& [k, v] : lib) keys.insert(k);
    for (const auto& [k, v] : ref) keys.insert(k);
    for (const auto& k : keys) enum_err = std::max(enum_err, std::abs(lib[k] - ref[k]));

    // KS distance of inverse-transform draws against the estimated conditional cdf
    const std::size_t draws = 100000;
    const ConditionalLaws big(generate_sample(SimModel::make(ModelId::model1, 0.2), 200, 1), 0.15, KernelSpec{});
    const auto atoms = big.lifetime_atoms();
    const auto cdf = big.lifetime_cdf(17);
    Rng rng(7);
    std::vector<double> values(draws);
    for (auto& v : values) v = inverse_transform_sample(atoms, cdf, uniform_open(rng), big.max_time()).value;
    std::sort(values.begin(), values.end());
    double ks = 0.0;
    for (std::size_t m = 0; m < atoms.size(); ++m) {
        const double below =
            static_cast<double>(std::lower_bound(values.begin(), values.end(), atoms[m]) - values.begin()) / draws;
        const double upto =
            static_cast<double>(std::upper_bound(values.begin(), values.end(), atoms[m]) - values.begin()) / draws;
        ks = std::max({ks, std::abs(upto - cdf[m]), std::abs(below - (m ? cdf[m - 1] : 0.0))});
    }
    report("AC3", enum_err <= 1e-10 && ks <= 0.01, fmt("enumeration_err=%.3g ks=%.4f", enum_err, ks));
}

void ac4() {
    const auto t0 = std::chrono::steady_clock::now();
    BenchConfig one;
    one.model = ModelId::model1;
    one.censoring = 0.2;
    one.estimator = Estimator::beran;
    one.N = 50;
    one.B = 200;
    one.n = 400;
    one.seed = 101;
    one.regions = false;
    const auto r1 = run_benchmark(one);
    const double h1 = r1.selection->mean_h;
    const double t1 = seconds_since(t0);

    BenchConfig two = one;
    two.censoring = 0.5;
    two.estimator = Estimator::smoothed_beran;
    two.seed = 202;
    const auto r2 = run_benchmark(two);
    const double h2 = r2.selection->mean_h, g2 = *r2.selection->mean_g;

    // rerun a reduced study with another worker count: identical selections
    BenchConfig small = one;
    small.N = 4;
    small.N_mise = 10;
    small.mise_grid = 9;
    const int saved = worker_count();
    set_worker_count(1);
    const auto a = run_benchmark(small);
    set_worker_count(4);
    const auto b = run_benchmark(small);
    set_worker_count(saved);
    bool same = a.samples.size() == b.samples.size();
    for (std::size_t j = 0; same && j < a.samples.size(); ++j) same = a.samples[j].selected->h == b.samples[j].selected->h;

    const bool ok = h1 >= 0.12 && h1 <= 0.36 && h2 >= 0.10 && h2 <= 0.40 && g2 >= 0.05 && g2 <= 0.20 && same;
    std::ostringstream os;
    os << fmt("1d mean_h=%.5f sd=%.4f h_mise=%.4f Hbar=%.3f ", h1, r1.selection->sd_h, r1.mise_bandwidths.h,
              r1.selection->h_bar)
       << fmt("2d mean_h=%.5f mean_g=%.5f h_mise=%.4f g_mise=%.4f ", h2, g2, r2.mise_bandwidths.h,
              *r2.mise_bandwidths.g)
       << "deterministic=" << (same ? "yes" : "no") << fmt(" seconds=%.0f+%.0f", t1, seconds_since(t0) - t1);
    report("AC4", ok, os.str());
}

void ac5() {
    const auto t0 = std::chrono::steady_clock::now();
    BenchConfig c;
    c.model = ModelId::model1;
    c.censoring = 0.5;
    c.estimator = Estimator::smoothed_beran;
    c.N = 100;
    c.B = 200;
    c.n = 400;
    c.seed = 303;
    c.select = false;
    const auto r = run_benchmark(c);
    const auto& m1 = *r.method1;
    const auto& m2 = *r.method2;
    const bool ok = m2.pointwise_coverage >= 0.95 && m2.coverage >= 0.85 && m1.pointwise_coverage >= 0.90 &&
                    m1.winkler_dominance && m2.winkler_dominance;
    std::ostringstream os;
    os << fmt("m2 cov=%.3f pw=%.4f width=%.4f iws=%.4f ", m2.coverage, m2.pointwise_coverage, m2.average_width, m2.iws)
       << fmt("m1 cov=%.3f pw=%.4f width=%.4f iws=%.4f ", m1.coverage, m1.pointwise_coverage, m1.average_width, m1.iws)
       << "m1_failures=" << r.region_failures << fmt(" seconds=%.0f", seconds_since(t0));
    report("AC5", ok, os.str());
}

void ac6() {
    bool ok = true;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        std::normal_distribution<double> noise(0.0, 1.0);
        const std::size_t B = 50 + 30 * seed, T = 20;
        CurveBundle curves;
        curves.count = B;
        curves.points = T;
        std::vector<double> pilot(T);
        for (std::size_t i = 0; i < T; ++i) pilot[i] = std::exp(-0.1 * i);
        for (std::size_t k = 0; k < B; ++k)
            for (std::size_t i = 0; i < T; ++i) curves.values.push_back(pilot[i] + 0.03 * noise(rng) * (1.0 + (i % 4)));
        const auto sigma = bootstrap_sigma(curves);
        for (double alpha : {0.05, 0.1}) {
            const auto cal = calibrate_lambda(pilot, curves, sigma, alpha);
            // brute force: 10^4-point scan of p(lambda) on [0, lambda_max]
            double lmax = 0.0;
            for (std::size_t k = 0; k < B; ++k)
                for (std::size_t i = 0; i < T; ++i)
                    lmax = std::max(lmax, std::abs(pilot[i] - curves.values[k * T + i]) / sigma[i]);
            lmax *= 1.01;
            const std::size_t steps = 10000;
            double scan = lmax;
            for (std::size_t s = 0; s <= steps; ++s) {
                const double l = lmax * s / steps;
                if (coverage_fraction(l, pilot, curves, sigma) >= 1.0 - alpha) {
                    scan = l;
                    break;
                }
            }
            // jump points of p around the scan optimum
            std::vector<double> m;
            for (std::size_t k = 0; k < B; ++k) {
                double w = 0.0;
                for (std::size_t i = 0; i < T; ++i)
                    w = std::max(w, std::abs(pilot[i] - curves.values[k * T + i]) / sigma[i]);
                m.push_back(w);
            }
            std::sort(m.begin(), m.end());
            const auto it = std::lower_bound(m.begin(), m.end(), scan);
            const double left = it == m.begin() ? 0.0 : *(it - 1);
            const double right = it == m.end() ? lmax : *it;
            const bool inside = cal.lambda >= left - 1e-12 && cal.lambda <= right + lmax / steps;
            ok = ok && inside;
            worst = std::max(worst, std::abs(cal.lambda - scan));
        }
    }
    // order statistic fixtures with B = 5
    const std::vector<std::pair<std::vector<double>, double>> fixtures{
        {{0.5, 0.1, 0.3, 0.4, 0.2}, 0.4}, {{1.0, 1.0, 0.2, 0.7, 0.9}, 1.0}, {{0.31, 0.3, 0.33, 0.32, 0.34}, 0.33}};
    for (const auto& [q, expect] : fixtures) ok = ok && order_statistic_radius(q, 0.2) == expect;
    report("AC6", ok, fmt("max|lambda-scan|=%.3g", worst));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
    std::map<std::string, std::string> left, right;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) left[fs::relative(e.path(), a).string()] = slurp(e.path());
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) right[fs::relative(e.path(), b).string()] = slurp(e.path());
    files = left.size();
    return !left.empty() && left == right;
}

void ac7() {
    const fs::path work = fs::temp_directory_path() / "beran_acceptance_ac7";
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string cli = BERAN_CLI_PATH;
    const std::string data = (work / "data.csv").string();
    bool ok = std::system((cli + " generate --model model1 --censoring 0.5 --n 150 --seed 9 --out " + data).c_str()) == 0;
    for (int threads : {1, 4}) {
        const fs::path out = work / ("t" + std::to_string(threads));
        const std::string t = cli + " --threads " + std::to_string(threads) + " ";
        const std::vector<std::string> cmds{
            t + "generate --model model2 --n 120 --seed 4 --out " + (out / "gen.csv").string(),
            t + "select-bandwidth --input " + data + " --x0 0.6 --B 40 --seed 5 --out " + (out / "sel1.json").string(),
            t + "select-bandwidth --input " + data + " --estimator smoothed-beran --x0 0.6 --B 20 --seed 5 --out " +
                (out / "sel2.json").string(),
            t + "region --input " + data + " --x0 0.6 --estimator smoothed-beran --method 1 --B 60 --seed 6 --out-dir " +
                (out / "reg1").string(),
            t + "region --input " + data + " --x0 0.6 --method 2 --B 60 --seed 6 --out-dir " + (out / "reg2").string(),
            t + "fit --input " + data + " --x0 0.3 0.6 --h 0.2 --out-dir " + (out / "fit").string(),
            t + "simulate --model model1 --censoring 0.2 --N 3 --B 20 --n 100 --n-t 30 --n-mise 5 --mise-grid 7 "
                "--seed 8 --out-dir " + (out / "sim").string(),
        };
        for (const auto& c : cmds) ok = std::system((c + " > /dev/null").c_str()) == 0 && ok;
    }
    std::size_t files = 0;
    ok = ok && same_tree(work / "t1", work / "t4", files);
    report("AC7", ok, "files_compared=" + std::to_string(files));
}

void ac8() {
    const std::vector<std::size_t> sizes{400, 800};
    const auto pts = run_scaling_bench(ModelId::model1, 0.2, sizes, 200, 11, SelectionStrategy{});
    const double ratio = pts[1].seconds / pts[0].seconds;
    report("AC8", ratio > 2.0, fmt("t400=%.2fs t800=%.2fs ratio=%.2f (reported only)", pts[0].seconds, pts[1].seconds, ratio),
           false);
}

} // namespace

int main(int argc, char** argv) {
    // optional subset, e.g. `beran_acceptance AC1 AC6`
    std::set<std::string> only(argv + 1, argv + argc);
    const std::vector<std::pair<std::string, void (*)()>> all{{"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
                                                              {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
    for (const auto& [id, fn] : all) {
        if (!only.empty() && !only.count(id)) continue;
        try {
            fn();
        } catch (const std::exception& e) {
            report(id.c_str(), false, std::string("error: ") + e.what(), id != "AC8");
        }
    }
    return gated_failure ? 1 : 0;
}
