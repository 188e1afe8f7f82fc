// Acceptance checks, one PASS/FAIL line each. argv[1] is the CLI binary
// used by the determinism checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "cyclosense/detectors.hpp"
#include "cyclosense/fusion.hpp"
#include "cyclosense/harness.hpp"
#include "cyclosense/optimal_users.hpp"
#include "cyclosense/pso_threshold.hpp"
#include "cyclosense/sigmodel.hpp"
#include "oracles.hpp"

namespace cs = cyclosense;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kFusionAbsTol = 1e-12;
constexpr long kOptimalNSlack = 1;
constexpr long kPeakBinSlack = 1;
constexpr double kPeakRuntimeSec = 1.0;
constexpr double kOracleRelTol = 1e-6;
constexpr double kSigmas = 3.0;
constexpr double kScalingRelTol = 1e-9;
constexpr double kAwgnRelTol = 0.05;
constexpr double kMonteCarloRuntimeSec = 600.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    fmt::print("{} [{:>2}] {}: {}\n", o.pass ? "PASS" : "FAIL", id, name, o.detail);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> pf_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(0.05 * i);
    return g;
}

Outcome fusion_exactness() {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                worst = std::max(worst, std::abs(cs::fusion_probability(p, n, k) - oracle::fusion_by_enumeration(p, n, k)));
            }
        }
    }
    return {worst < kFusionAbsTol, fmt::format("max |formula - enumeration| = {:.3g} (tol {:g})", worst, kFusionAbsTol)};
}

Outcome optimal_n_vs_oracle() {
    long worst = 0;
    int cells = 0;
    for (double pf : pf_grid()) {
        for (double pm : pf_grid()) {
            if (!(pf < 1.0 - pm)) continue;
            for (std::size_t k : {4u, 8u, 16u}) {
                const long a = long(cs::optimal_n(pf, pm, k).n_opt);
                const long b = long(cs::brute_force_optimal_n(pf, 1.0 - pm, k));
                worst = std::max(worst, std::abs(a - b));
                ++cells;
            }
        }
    }
    return {worst <= kOptimalNSlack, fmt::format("max |closed form - argmin| = {} over {} cells (tol {})", worst, cells,
                                                 kOptimalNSlack)};
}

Outcome optimal_n_trend() {
    std::string detail;
    bool ok = true;
    for (double pm : pf_grid()) {
        const auto rows = cs::optimal_n_curve(pm, 8, pf_grid());
        std::string seq;
        std::size_t prev = 0;
        bool first = true;
        for (const auto& r : rows) {
            if (!r.valid) continue;
            if (!first && r.result.n_opt > prev) ok = false;
            seq += (first ? "" : ",") + std::to_string(r.result.n_opt);
            prev = r.result.n_opt;
            first = false;
        }
        if (pm == pf_grid().front() || pm == pf_grid()[1]) detail += fmt::format("pm={:g}: n_opt={} ", pm, seq);
    }
    return {ok, detail + "(required nonincreasing in pf)"};
}

Outcome csd_peaks() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto tone = cs::generate_tone(0.125, 1.0, 8192);
    cs::DetectorConfig cfg;
    cfg.window_len = 1024;
    cfg.alpha_set = cs::full_alpha_grid(1024);
    const auto est = cs::estimate_csd(tone, cfg);
    const double elapsed = seconds_since(t0);

    const double mx = *std::max_element(est.magnitudes.begin(), est.magnitudes.end());
    const double n = double(est.window_len);
    const std::pair<double, double> features[] = {{0.125, 0.0}, {-0.125, 0.0}, {0.0, 0.25}, {0.0, -0.25}};
    std::size_t maxima = 0;
    long worst = 0;
    std::vector<bool> hit(4, false);
    for (std::size_t a = 0; a < est.alpha_axis.size(); ++a) {
        for (std::size_t f = 0; f < est.f_axis.size(); ++f) {
            if (est.at(f, a) < mx * (1.0 - 1e-9)) continue;
            ++maxima;
            long best = 1 << 30;
            for (std::size_t i = 0; i < 4; ++i) {
                const long d = std::max(std::lround(std::abs(est.f_axis[f] - features[i].first) * n),
                                        std::lround(std::abs(est.alpha_axis[a] - features[i].second) * n));
                if (d <= kPeakBinSlack) hit[i] = true;
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
    }
    const bool all_hit = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    return {worst <= kPeakBinSlack && all_hit && elapsed < kPeakRuntimeSec,
            fmt::format("{} global maxima, farthest {} bin(s) from a feature point, all 4 features hit: {}, {:.3f} s",
                        maxima, worst, all_hit ? "yes" : "no", elapsed)};
}

Outcome csd_oracle() {
    double worst = 0.0;
    std::size_t cells = 0;
    struct Case {
        std::size_t len;
        std::size_t window;
        double overlap;
    };
    for (const Case c : {Case{2048, 64, 0.5}, Case{1536, 128, 0.25}}) {
        const auto x = cs::apply_awgn(cs::generate_tone(0.11, 1.0, c.len), 0.0, c.len);
        cs::DetectorConfig cfg;
        cfg.window_len = c.window;
        cfg.overlap_fraction = c.overlap;
        cfg.alpha_set = cs::full_alpha_grid(c.window);
        cfg.alpha_set.push_back(0.0173);
        const auto est = cs::estimate_csd(x, cfg);
        const std::size_t hop = std::size_t(std::llround(double(c.window) * (1.0 - c.overlap)));
        const auto ref = oracle::csd_caf_then_transform(x.samples, c.window, hop, est.alpha_axis);
        for (std::size_t a = 0; a < est.alpha_axis.size(); ++a) {
            for (std::size_t f = 0; f < c.window; ++f) {
                const double want = ref[a * c.window + f];
                if (want <= 0.0) continue;
                worst = std::max(worst, std::abs(est.at(f, a) - want) / want);
                ++cells;
            }
        }
    }
    return {worst < kOracleRelTol, fmt::format("max relative deviation {:.3g} over {} cells (tol {:g})", worst, cells,
                                               kOracleRelTol)};
}

struct CoopRun {
    cs::Scenario scenario;
    cs::TrialStats stats;
    double seconds = 0.0;
};

CoopRun cooperative_run() {
    CoopRun r;
    r.scenario.snr_db = -5.0;
    r.scenario.n_users = 8;
    r.scenario.n_trials = 500;
    const auto t0 = std::chrono::steady_clock::now();
    r.stats = cs::run_trials(r.scenario);
    r.seconds = seconds_since(t0);
    return r;
}

double pd_se(const cs::RocCurve& c, double pd) {
    return cs::standard_error(pd, c.points.empty() ? 1 : c.points.front().n_trials);
}

Outcome fusion_roc(const CoopRun& run) {
    const auto fine = cs::auto_thresholds(run.stats, 1000);
    const auto grid = cs::auto_thresholds(run.stats, run.scenario.threshold_grid.auto_points);
    const auto single = cs::single_user_roc(run.stats, grid);
    const auto or_c = cs::fused_roc(run.stats, fine, cs::FusionRule::or_rule());
    const auto maj = cs::fused_roc(run.stats, fine, cs::FusionRule::majority());
    const auto and_c = cs::fused_roc(run.stats, fine, cs::FusionRule::and_rule());

    int points = 0;
    double single_lo = 1.0;
    double single_hi = 0.0;
    double or_lo = 1.0;
    double worst_or = 1e9;
    double worst_order = 1e9;
    for (const auto& p : single.points) {
        if (p.pf_hat < 0.05 || p.pf_hat > 0.5) continue;
        ++points;
        const double d_or = cs::pd_at_pf(or_c, p.pf_hat);
        const double d_maj = cs::pd_at_pf(maj, p.pf_hat);
        const double d_and = cs::pd_at_pf(and_c, p.pf_hat);
        single_lo = std::min(single_lo, p.pd_hat);
        single_hi = std::max(single_hi, p.pd_hat);
        or_lo = std::min(or_lo, d_or);
        const double se1 = std::hypot(pd_se(or_c, d_or), cs::standard_error(p.pd_hat, p.n_trials));
        worst_or = std::min(worst_or, (d_or - p.pd_hat) + kSigmas * se1);
        const double se2 = std::hypot(pd_se(or_c, d_or), pd_se(maj, d_maj));
        const double se3 = std::hypot(pd_se(maj, d_maj), pd_se(and_c, d_and));
        worst_order = std::min({worst_order, (d_or - d_maj) + kSigmas * se2, (d_maj - d_and) + kSigmas * se3});
    }
    const bool ok = points > 0 && worst_or >= 0.0 && worst_order >= 0.0 && run.seconds < kMonteCarloRuntimeSec;
    return {ok, fmt::format("{} operating points, single pd {:.3f}..{:.3f}, OR pd >= {:.4f}; min margin OR vs single "
                            "{:+.4f}, ordering {:+.4f} (>= 0 within {} se); trials {:.1f} s",
                            points, single_lo, single_hi, or_lo, worst_or, worst_order, kSigmas, run.seconds)};
}

Outcome optimal_error_curve(const CoopRun& run) {
    std::vector<cs::FusionRule> rules;
    for (std::size_t k = 1; k <= run.scenario.n_users; ++k) rules.push_back(cs::FusionRule::k_out_of_n(k));
    const auto grid = pf_grid();
    const auto rows = cs::error_curve(run.scenario, run.stats, grid, rules, true);
    double worst = 1e9;
    int checked = 0;
    std::string note;
    std::string ns;
    double max_opt = 0.0;
    for (double target : grid) {
        const cs::ErrorRow* best = nullptr;
        const cs::ErrorRow* opt = nullptr;
        for (const auto& r : rows) {
            if (r.pf_target != target || !r.valid) continue;
            if (r.rule == "OPTIMAL_N") {
                opt = &r;
            } else if (!best || r.error < best->error) {
                best = &r;
            }
        }
        if (!opt || !best) {
            worst = -1.0;
            note = fmt::format(" (no valid OPTIMAL_N row at pf={:g})", target);
            continue;
        }
        ++checked;
        ns += (ns.empty() ? "" : ",") + std::to_string(opt->n);
        max_opt = std::max(max_opt, opt->error);
        const double se = std::hypot(opt->standard_error, best->standard_error);
        worst = std::min(worst, best->error + kSigmas * se - opt->error);
    }
    return {worst >= 0.0 && checked == int(grid.size()),
            fmt::format("{} target pf values, optimal n {}, optimal error <= {:.4f}; min margin (best fixed + {} se - "
                        "optimal) {:+.4f}{}",
                        checked, ns, max_opt, kSigmas, worst, note)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& out) {
    const std::string cmd = "\"" + cli + "\" " + args + " --out \"" + out.string() + "\" > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

bool cli_twice(const std::string& cli, const fs::path& dir, const std::string& name, const std::string& args,
               std::string& why) {
    const fs::path a = dir / (name + "_a.csv");
    const fs::path b = dir / (name + "_b.csv");
    if (run_cli(cli, args, a) != 0 || run_cli(cli, args, b) != 0) {
        why += name + ": nonzero exit; ";
        return false;
    }
    const std::string sa = slurp(a);
    const std::string sb = slurp(b);
    if (sa.empty() || sa != sb) {
        why += name + ": outputs differ; ";
        return false;
    }
    return true;
}

Outcome pso_fixed_point(const std::string& cli, const fs::path& dir) {
    cs::PsoConfig cfg;
    cs::Swarm s;
    s.particles.push_back({0.7, 0.7, 0.1, 0.0});
    s.gbest = 0.7;
    s.gbest_fitness = 0.1;
    const auto fitness = [](double l) { return 0.1 + std::abs(l - 0.2); };
    bool still = true;
    for (int i = 0; i < 50; ++i) {
        s = cs::pso_step(s, cfg, fitness);
        still = still && s.particles[0].lambda_current == 0.7 && s.gbest == 0.7;
    }

    cs::Scenario sc;
    sc.n_users = 1;
    cs::PsoExperimentConfig ex;
    ex.calibration_bursts = 100;
    ex.test_bursts = 50;
    const auto a = cs::run_pso_experiment(sc, ex);
    const auto b = cs::run_pso_experiment(sc, ex);
    const bool same = a.run.history == b.run.history && a.run.fitness_history == b.run.fitness_history;

    std::string why;
    const bool cli_same = cli_twice(cli, dir, "pso_fixed", "pso --seed 5 --calibration 100 --test 50", why);
    return {still && same && cli_same,
            fmt::format("fixed point held for 50 steps: {}; in-process rerun identical: {}; CLI rerun byte-identical: {}",
                        still ? "yes" : "no", same ? "yes" : "no", cli_same ? "yes" : why)};
}

Outcome pso_vs_baseline() {
    cs::Scenario sc;
    sc.snr_db = -5.0;
    sc.n_users = 1;
    cs::PsoExperimentConfig ex;
    ex.pso.c0 = 0.0;
    ex.pso.c1 = 1.0;
    ex.pso.c2 = 1.0;
    ex.pso.r_mode = cs::PsoConfig::RMode::fixed(0.3811, 0.1895);
    ex.pso.max_iters = 50;
    ex.calibration_bursts = 500;
    ex.test_bursts = 500;
    const auto r = cs::run_pso_experiment(sc, ex);
    const auto& p = r.pso_point;
    const auto& b = r.baseline_point;
    const std::size_t n = p.n_trials;
    const auto err_se = [n](const cs::RocPoint& q) {
        return std::hypot(cs::standard_error(q.pf_hat, n), cs::standard_error(q.pd_hat, n));
    };
    const double se_err = std::hypot(err_se(p), err_se(b));
    const double se_pd = std::hypot(cs::standard_error(p.pd_hat, n), cs::standard_error(b.pd_hat, n));
    const double se_pf = std::hypot(cs::standard_error(p.pf_hat, n), cs::standard_error(b.pf_hat, n));
    const bool err_ok = p.error_hat <= b.error_hat + kSigmas * se_err;
    const bool pd_ok = p.pd_hat >= b.pd_hat - kSigmas * se_pd;
    const bool pf_ok = p.pf_hat <= b.pf_hat + kSigmas * se_pf;
    return {err_ok && pd_ok && pf_ok,
            fmt::format("PSO lambda={:.4g} (pf {:.3f}, pd {:.3f}, err {:.3f}) vs baseline lambda={:.4g} (pf {:.3f}, pd "
                        "{:.3f}, err {:.3f}); {} iterations",
                        r.run.gbest, p.pf_hat, p.pd_hat, p.error_hat, r.baseline_threshold, b.pf_hat, b.pd_hat,
                        b.error_hat, r.run.history.size())};
}

Outcome scaling_laws() {
    const auto x = cs::generate_ofdm(cs::OfdmParams{}, 21);
    cs::DetectorConfig cfg;
    cfg.alpha_set = cs::targeted_alpha_set(0.125, cfg.window_len, 2);
    cfg.alpha_set.push_back(0.0313);
    const auto base = cs::estimate_csd(x, cfg);
    double worst = 0.0;
    for (double c : {2.0, 0.5, 10.0}) {
        cs::SampleBuffer y = x;
        for (double& v : y.samples) v *= c;
        worst = std::max(worst, std::abs(cs::energy_statistic(y) / (c * c * cs::energy_statistic(x)) - 1.0));
        const auto scaled = cs::estimate_csd(y, cfg);
        for (std::size_t i = 0; i < base.magnitudes.size(); ++i) {
            if (base.magnitudes[i] > 0.0) {
                worst = std::max(worst, std::abs(scaled.magnitudes[i] / (c * c * base.magnitudes[i]) - 1.0));
            }
        }
    }
    double worst_awgn = 0.0;
    const std::size_t n = 100000;
    const auto sig = cs::generate_tone(0.125, std::sqrt(2.0), n);
    for (double snr : {0.0, -5.0}) {
        const auto noisy = cs::apply_awgn(sig, snr, 3);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += noisy.samples[i] - sig.samples[i];
        mean /= double(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = noisy.samples[i] - sig.samples[i] - mean;
            var += d * d;
        }
        var /= double(n - 1);
        worst_awgn = std::max(worst_awgn, std::abs(var / cs::noise_variance_for_snr(snr) - 1.0));
    }
    return {worst < kScalingRelTol && worst_awgn < kAwgnRelTol,
            fmt::format("max c^2 scaling deviation {:.3g} (tol {:g}); AWGN variance off by {:.2f}% (tol {:g}%)", worst,
                        kScalingRelTol, 100.0 * worst_awgn, 100.0 * kAwgnRelTol)};
}

Outcome cli_determinism(const std::string& cli, const fs::path& dir) {
    const std::vector<std::pair<std::string, std::string>> runs{
        {"gen_ofdm", "gen --kind ofdm --snr -5 --seed 3"},
        {"gen_noise", "gen --kind noise --length 2048 --seed 3"},
        {"csd", "csd --source h1 --seed 3"},
        {"roc", "roc --trials 60 --seed 3"},
        {"error", "error --trials 60 --seed 3"},
        {"fuse", "fuse --p 0.7 --n 8 --rule majority --seed 3"},
        {"optn", "optn --pm 0.1 --k 8 --pf-grid 0.05:0.95:0.05 --seed 3"},
        {"pso", "pso --calibration 80 --test 40 --r-mode random --seed 3"},
    };
    std::string why;
    int ok = 0;
    for (const auto& [name, args] : runs) ok += cli_twice(cli, dir, name, args, why) ? 1 : 0;
    return {ok == int(runs.size()),
            fmt::format("{}/{} invocations byte-identical across two runs{}", ok, runs.size(), why.empty() ? "" : ": " + why)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to cyclosense cli>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path dir = fs::temp_directory_path() / "cyclosense_acceptance";
    fs::create_directories(dir);

    report(1, "fusion formula vs enumeration", fusion_exactness());
    report(2, "optimal n closed form vs exhaustive argmin", optimal_n_vs_oracle());
    report(3, "optimal n nonincreasing in pf (k=8)", optimal_n_trend());
    report(4, "CSD feature locations of a noiseless tone", csd_peaks());
    report(5, "CSD estimator vs CAF-then-transform oracle", csd_oracle());
    const CoopRun coop = cooperative_run();
    report(6, "fused ROC: OR >= single, OR >= MAJORITY >= AND", fusion_roc(coop));
    report(7, "OPTIMAL_N error tracks best fixed n", optimal_error_curve(coop));
    report(8, "PSO fixed point and reproducibility", pso_fixed_point(cli, dir));
    report(9, "PSO threshold vs median baseline", pso_vs_baseline());
    report(10, "scaling laws", scaling_laws());
    report(11, "CLI determinism", cli_determinism(cli, dir));

    fs::remove_all(dir);
    fmt::print("{} of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
