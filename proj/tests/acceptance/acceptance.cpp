// Acceptance checks. One PASS/FAIL line per criterion; nonzero exit if any
// criterion fails. Usage: acceptance <path-to-aggnet> <work-dir>

#include "aggnet/consensus.hpp"
#include "aggnet/dynamics.hpp"
#include "aggnet/errors.hpp"
#include "aggnet/formulas.hpp"
#include "aggnet/local_aggregators.hpp"
#include "aggnet/random.hpp"
#include "aggnet/robust_set.hpp"
#include "aggnet/two_island.hpp"

#include "../support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

using namespace aggnet;

namespace {

// Pinned tolerances and budgets.
constexpr double kC1IterTol = 1e-8;
constexpr double kC1SchweitzerTol = 1e-9;
constexpr double kC1Seconds = 30.0;
constexpr double kC2Tol = 1e-9;
constexpr double kC3Tol = 1e-10;
constexpr double kC4Seconds = 60.0;
constexpr double kC6LogStep = 1e-3;
constexpr double kC7SumTol = 1e-14;
constexpr double kC8RelTol = 1e-6;
constexpr double kC8MinGap = 1e-8;
constexpr double kC9Seconds = 120.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

TwoIslandEnv env(double h, double pi, double rho, double alpha, double b1, double b2) {
    TwoIslandEnv e;
    e.h = h;
    e.pi = pi;
    e.rho = rho;
    e.alpha = alpha;
    e.beta1 = b1;
    e.beta2 = b2;
    return e;
}

Outcome criterion1() {
    const auto start = Clock::now();
    Rng rng(20261);
    double worst_iter = 0.0;
    double worst_sch = 0.0;
    for (int k = 0; k < 200; ++k) {
        const int n = 2 + static_cast<int>(rng.below(11));
        const Matrix m = oracle::random_primitive(rng, n, rng.uniform(0.1, 0.9));
        const auto t = validate_row_stochastic(m);
        const auto spec = oracle::random_spec(rng, n);
        const Vector p0 = oracle::random_beliefs(rng, n);
        const double closed = consensus_closed_form(t, spec, p0).value;
        worst_iter = std::max(worst_iter, std::abs(closed - oracle::iterate_global(m, spec, p0)));
        worst_sch = std::max(worst_sch, std::abs(closed - consensus_schweitzer(t, spec, p0).value));
    }
    const double secs = seconds_since(start);
    return {worst_iter < kC1IterTol && worst_sch < kC1SchweitzerTol && secs < kC1Seconds,
            "max |closed - iterate| " + fmt("%.3g", worst_iter) + ", max |closed - schweitzer| " +
                fmt("%.3g", worst_sch) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome criterion2() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    const auto t = validate_row_stochastic(m);
    GlobalAggregatorSpec spec;
    spec.rho = 0.5;
    spec.alpha = RowVector(2);
    spec.alpha << 1, 0;
    spec.beta = Vector::Constant(2, 0.5);
    Vector p0(2);
    p0 << 1, 0;
    const double values[] = {oracle::iterate_global(m, spec, p0), consensus_closed_form(t, spec, p0).value,
                             consensus_schweitzer(t, spec, p0).value, consensus_simulated(t, spec, p0).value};
    double worst = 0.0;
    for (double v : values) worst = std::max(worst, std::abs(v - 0.75));
    return {worst < kC2Tol, "max deviation from 0.75 " + fmt("%.3g", worst)};
}

Outcome criterion3() {
    const double h = 2.0;
    const double pi = 2.0;
    const double bench = pi / (pi + 1.0);
    const Matrix f = oracle::island_matrix(h, pi);

    const double d0 = delta0(h, pi);
    const double d0_stat = std::abs(oracle::power_stationary(f)(0) - bench);
    Vector p0(2);
    p0 << 1, 0;
    Vector p = p0;
    for (int k = 0; k < 10000; ++k) p = f * p;
    const double d0_sim = std::abs(p(0) - bench);

    const double d1 = delta1(env(h, pi, 0.5, 0.5, 0.5, 0.5)).gap;
    GlobalAggregatorSpec spec;
    spec.rho = 0.5;
    spec.alpha = RowVector(2);
    spec.alpha << 0.5, 0.5;
    spec.beta = Vector::Constant(2, 0.5);
    Matrix g(3, 3);
    g(0, 0) = spec.rho;
    g.block(0, 1, 1, 2) = (1 - spec.rho) * spec.alpha;
    g.block(1, 0, 2, 1) = spec.beta;
    g.block(1, 1, 2, 2) = 0.5 * f;
    const RowVector s = oracle::power_stationary(g);
    Vector state(3);
    state << spec.alpha.dot(p0.transpose()), (f * p0)(0), (f * p0)(1);
    const double d1_stat = std::abs(s.dot(state.transpose()) - bench);
    const double d1_sim = std::abs(oracle::iterate_global(f, spec, p0, 1e-14) - bench);

    const double errs[] = {std::abs(d0 - 1.0 / 21.0), std::abs(d0_stat - 1.0 / 21.0), std::abs(d0_sim - 1.0 / 21.0),
                           std::abs(d1 - 4.0 / 51.0), std::abs(d1_stat - 4.0 / 51.0), std::abs(d1_sim - 4.0 / 51.0)};
    const double worst = *std::max_element(std::begin(errs), std::end(errs));
    return {worst < kC3Tol, "delta0 " + fmt("%.15g", d0) + ", delta1 " + fmt("%.15g", d1) + ", max oracle error " +
                                fmt("%.3g", worst)};
}

Outcome criterion4() {
    const auto start = Clock::now();
    RobustQuery q;
    q.pi = 1.5;
    q.h_lo = 4.0;
    q.h_hi = 40.0;
    q.rho = 0.5;
    const AlphaInterval slow = robust_set(q);
    q.rho = 0.999;
    const AlphaInterval fast = robust_set(q);
    const double r = rho_star(q);

    bool monotone = true;
    double prev = -1.0;
    for (int k = 0; k < 50; ++k) {
        q.rho = 0.5 + 0.499 * k / 49.0;
        const double mu = robust_set(q).measure;
        if (mu < prev) monotone = false;
        prev = mu;
    }
    const double secs = seconds_since(start);
    const bool ok = slow.empty && slow.measure == 0.0 && !fast.empty && fast.measure > 0.0 && r >= 0.5 &&
                    r < 1.0 && monotone && secs < kC4Seconds;
    return {ok, "measure(0.5) " + fmt("%.3g", slow.measure) + ", measure(0.999) " + fmt("%.4g", fast.measure) +
                    ", rho* " + fmt("%.10g", r) + (monotone ? ", monotone" : ", not monotone") + ", " +
                    fmt("%.2f", secs) + " s"};
}

Outcome criterion5() {
    long bad_sign = 0;
    long bad_slope = 0;
    long points = 0;
    for (double pi : {1.5, 2.0, 3.0}) {
        const double alpha = pi * pi / (pi * pi + 1.0) + 0.05;
        for (int ib = 0; ib < 20; ++ib) {
            const double b = 0.02 + 0.96 * ib / 19.0;
            for (int ir = 0; ir < 10; ++ir) {
                const double rho = 0.05 + 0.9 * ir / 9.0;
                double prev = -1.0;
                for (int ih = 0; ih < 20; ++ih) {
                    const double h = 1.05 * std::pow(100.0 / 1.05, ih / 19.0);
                    const TwoIslandEnv e = env(h, pi, rho, alpha, b, b);
                    ++points;
                    if (!(delta_star(e) > 0.0)) ++bad_sign;
                    const double d1 = delta1(e).gap;
                    if (ih > 0 && !(d1 > prev)) ++bad_slope;
                    prev = d1;
                }
            }
        }
    }
    return {bad_sign == 0 && bad_slope == 0, std::to_string(points) + " points, " + std::to_string(bad_sign) +
                                                 " with delta_star <= 0, " + std::to_string(bad_slope) +
                                                 " non-increasing steps"};
}

Outcome criterion6() {
    const auto shape = [](double h) { return env(h, 2.0, 0.5, 0.3, 0.05, 0.05); };
    const RegimeClassification c = classify_regime(shape(10.0));
    if (c.regime != Regime::MinorityMidH) return {false, std::string("regime ") + to_string(c.regime)};
    const double lo = c.thresholds.at("h_lower");
    const double hi = c.thresholds.at("h_upper");
    if (!(1.0 < lo && lo < hi && std::isfinite(hi))) return {false, "threshold order violated"};

    long mismatches = 0;
    long points = 0;
    for (double x = kC6LogStep; x <= std::log(1e4); x += kC6LogStep) {
        const double h = std::exp(x);
        // skip the grid cells that straddle a threshold
        if (std::abs(x - std::log(lo)) < kC6LogStep || std::abs(x - std::log(hi)) < kC6LogStep) continue;
        const bool inside = h > lo && h < hi;
        const double d = delta_star(shape(h));
        ++points;
        if (inside ? !(d < 0.0) : !(d > 0.0)) ++mismatches;
    }
    return {mismatches == 0, "h_lower " + fmt("%.6g", lo) + ", h_upper " + fmt("%.6g", hi) + ", " +
                                 std::to_string(points) + " scan points, " + std::to_string(mismatches) +
                                 " sign mismatches"};
}

Outcome criterion7() {
    Rng rng(7007);
    long not_better = 0;
    long no_worse_topic = 0;
    double worst_sum = 0.0;
    for (int k = 0; k < 500; ++k) {
        LocalAggregatorSpec s;
        s.rho = rng.uniform(0.01, 0.99);
        s.b11 = rng.uniform(0.02, 0.99);
        s.b12 = rng.uniform(0.0, 1.0) * s.b11 * 0.99;
        s.b22 = rng.uniform(0.02, 0.99);
        s.b21 = rng.uniform(0.0, 1.0) * s.b22 * 0.99;
        const double h = std::exp(rng.uniform(std::log(1.01), std::log(100.0)));
        const double pi = std::exp(rng.uniform(std::log(1.01), std::log(10.0)));

        const TopicGapVector local = delta2(s, h, pi);
        const TopicGapVector none = delta0_topics(h, pi);
        if (!(local.gap1 < none.gap1 && local.gap2 < none.gap2)) ++not_better;

        const TwoIslandEnv g = env(h, pi, s.rho, rng.uniform(), rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99));
        const GlobalVsLocal r = check_global_vs_local(g, s);
        const bool exists = r.global.gap1 > r.local.gap1 || r.global.gap2 > r.local.gap2;
        if (!exists || r.worse_topic == 0) ++no_worse_topic;
        worst_sum = std::max(worst_sum, std::abs(r.global.sum() - 1.0));
    }
    return {not_better == 0 && no_worse_topic == 0 && worst_sum <= kC7SumTol,
            std::to_string(not_better) + " local specs not improving, " + std::to_string(no_worse_topic) +
                " pairs without a worse topic, max |sum - 1| " + fmt("%.3g", worst_sum)};
}

Outcome criterion8() {
    using L = long double;
    Rng rng(8008);
    double worst = 0.0;
    int used = 0;
    int tries = 0;
    const auto rel = [](double analytic, long double fd) {
        const long double scale = std::max<long double>(std::abs(fd), 1e-300L);
        return static_cast<double>(std::abs(static_cast<long double>(analytic) - fd) / scale);
    };
    while (used < 500 && tries < 100000) {
        ++tries;
        const double h = std::exp(rng.uniform(std::log(1.05), std::log(50.0)));
        const double pi = std::exp(rng.uniform(std::log(1.05), std::log(5.0)));
        const double rho = rng.uniform(0.05, 0.95);
        const double a = rng.uniform(0.02, 0.98);
        const double b = rng.uniform(0.02, 0.98);
        const TwoIslandEnv e = env(h, pi, rho, a, b, b);
        if (std::abs(delta1(e).signed_gap) <= kC8MinGap) continue;
        ++used;
        const auto gap = [&](L hh, L aa, L bb) {
            return formulas::signed_gap_equal<L>(rho, aa, bb, hh, static_cast<L>(pi));
        };
        const L eh = 1e-7L * h;
        const L ea = 1e-7L;
        const L eb = 1e-7L;
        const L fd_h = (gap(h + eh, a, b) - gap(h - eh, a, b)) / (2 * eh);
        const L fd_a = (gap(h, a + ea, b) - gap(h, a - ea, b)) / (2 * ea);
        const L fd_b = (gap(h, a, b + eb) - gap(h, a, b - eb)) / (2 * eb);
        worst = std::max({worst, rel(d_signed_gap_dh(e), fd_h), rel(d_signed_gap_dalpha(e), fd_a),
                          rel(d_signed_gap_dbeta(e), fd_b)});
    }
    return {used == 500 && worst < kC8RelTol,
            std::to_string(used) + " points, max relative error " + fmt("%.3g", worst)};
}

Outcome criterion9() {
    const auto start = Clock::now();
    const double h = 3.0;
    const double p_s = 0.6;
    const double p_d = p_s / h;
    const int sizes[][2] = {{20, 10}, {67, 33}, {200, 100}};
    std::vector<double> medians;
    std::string detail;
    for (const auto& sz : sizes) {
        const double pi = static_cast<double>(sz[0]) / sz[1];
        const double predicted = consensus_no_ai(h, pi);
        std::vector<double> errs;
        int skipped = 0;
        for (std::uint64_t seed = 1; errs.size() < 50 && seed <= 1000; ++seed) {
            const TwoIslandSample sample = sample_two_island(sz[0], sz[1], p_s, p_d, seed);
            if (!is_primitive(sample.t)) {
                ++skipped;
                continue;
            }
            const RowVector s = stationary_distribution(sample.t).weights;
            double simulated = 0.0;
            for (int i = 0; i < sz[0]; ++i) simulated += s(i);
            errs.push_back(std::abs(simulated - predicted));
        }
        if (errs.size() < 50) return {false, "too few connected samples"};
        std::nth_element(errs.begin(), errs.begin() + 25, errs.end());
        const double upper = errs[25];
        const double lower = *std::max_element(errs.begin(), errs.begin() + 25);
        medians.push_back(0.5 * (lower + upper));
        detail += "n=" + std::to_string(sz[0] + sz[1]) + " median " + fmt("%.4g", medians.back()) + " (" +
                  std::to_string(skipped) + " disconnected skipped), ";
    }
    const double secs = seconds_since(start);
    const bool decreasing = medians[0] > medians[1] && medians[1] > medians[2];
    return {decreasing && secs < kC9Seconds, detail + fmt("%.2f", secs) + " s"};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion10(const std::string& cli, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto config = dir / "sim.json";
    {
        std::ofstream out(config);
        out << R"({"n1": 40, "n2": 20, "p_s": 0.3, "p_d": 0.1, "rho": 0.5, "alpha": 0.5, "beta": "0.1:0.5:3"})";
    }
    const std::vector<std::string> runs = {
        "simulate --config " + config.string() + " --seed 11 --threads 2",
        "gap --set h=1.1:100:40:log --set pi=2 --set rho=0.5 --set alpha=0.3 --set beta=0.05 --format json",
        "regime --set h=1.1:100:5:log --set pi=2 --set rho=0.5 --set alpha=0.3 --set beta=0.05 --threads 3",
    };
    int identical = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const auto path = dir / ("run" + std::to_string(k) + "_" + std::to_string(rep) + ".out");
            const std::string cmd = "\"" + cli + "\" " + runs[k] + " --out " + path.string();
            if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + runs[k]};
            outputs[rep] = read_file(path);
        }
        if (!outputs[0].empty() && outputs[0] == outputs[1]) ++identical;
    }
    return {identical == static_cast<int>(runs.size()),
            std::to_string(identical) + "/" + std::to_string(runs.size()) + " runs byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <aggnet> <work-dir>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::filesystem::path dir = argv[2];

    const std::vector<std::function<Outcome()>> checks = {
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9,
        [&] { return criterion10(cli, dir); },
    };
    int failed = 0;
    for (std::size_t k = 0; k < checks.size(); ++k) {
        Outcome o;
        try {
            o = checks[k]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", k + 1, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
