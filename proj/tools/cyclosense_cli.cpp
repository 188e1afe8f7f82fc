// cyclosense: command-line front end for the spectrum sensing simulator.
//
//   cyclosense gen   --kind ofdm|tone|noise ...       sample buffer CSV
//   cyclosense csd   --source h1|noise|noiseless|carrier ...  f,alpha,magnitude
//   cyclosense roc   --rules single,or,majority,and   threshold,pf,pd,pm,error,rule,n_users
//   cyclosense error --pf-grid 0.05:0.45:0.05         pf_target,rule,n,error
//   cyclosense fuse  --p 0.7 --n 8 --rule majority    fused probability
//   cyclosense optn  --pf 0.1 --pm 0.2 --k 8          n_opt and alpha_ratio (or CSV with --pf-grid)
//   cyclosense pso   --iters 30 ...                   iteration,gbest,gbest_fitness
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error, 4 I/O error.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cyclosense/error.hpp"
#include "cyclosense/harness.hpp"
#include "cyclosense/seeding.hpp"

namespace cs = cyclosense;

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out = "-";
    std::string scenario_path;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Base seed (overrides the scenario file)");
    cmd->add_option("--out", c.out, "Output path, '-' for stdout");
    cmd->add_option("--scenario", c.scenario_path, "Scenario file (key = value lines)");
}

cs::Scenario load(const Common& c) {
    cs::Scenario s;
    if (!c.scenario_path.empty()) s = cs::load_scenario(c.scenario_path);
    if (c.seed) s.base_seed = *c.seed;
    return s;
}

void emit(const Common& c, const std::function<void(std::ostream&)>& body) {
    if (c.out == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(c.out, std::ios::binary | std::ios::trunc);
    if (!file) throw cs::IoError("cannot open " + c.out + " for writing");
    body(file);
    file.flush();
    if (!file) throw cs::IoError("failed writing " + c.out);
}

std::vector<double> parse_range(const std::string& spec) {
    double a = 0.0;
    double b = 0.0;
    double step = 0.0;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
        throw cs::ConfigError("grid '" + spec + "' is not of the form start:stop:step");
    }
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double v = a + static_cast<double>(i) * step;
        if (v > b + 1e-9 * step) break;
        out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cyclostationary spectrum sensing simulator"};
    app.require_subcommand(1);

    // gen
    Common gen_c;
    std::string gen_kind = "ofdm";
    std::optional<double> gen_snr;
    double gen_f0 = 0.125;
    double gen_amp = 1.0;
    std::size_t gen_len = 4096;
    double gen_var = 1.0;
    auto* gen = app.add_subcommand("gen", "Generate a sample buffer");
    add_common(gen, gen_c);
    gen->add_option("--kind", gen_kind, "ofdm | tone | noise")->check(CLI::IsMember({"ofdm", "tone", "noise"}));
    gen->add_option("--snr", gen_snr, "Add white noise at this SNR in dB (ofdm, tone)");
    gen->add_option("--f0", gen_f0, "Tone frequency, cycles/sample");
    gen->add_option("--amplitude", gen_amp, "Tone amplitude");
    gen->add_option("--length", gen_len, "Tone/noise length in samples");
    gen->add_option("--variance", gen_var, "Noise variance");

    // csd
    Common csd_c;
    std::string csd_source = "h1";
    std::optional<std::size_t> csd_window;
    std::optional<double> csd_snr;
    auto* csd = app.add_subcommand("csd", "Full-grid cyclic spectral density of one burst");
    add_common(csd, csd_c);
    csd->add_option("--source", csd_source, "h1 | noise | noiseless | carrier")
        ->check(CLI::IsMember({"h1", "noise", "noiseless", "carrier"}));
    csd->add_option("--window", csd_window, "Window length (power of two)");
    csd->add_option("--snr", csd_snr, "SNR in dB");

    // roc
    Common roc_c;
    std::string roc_rules = "single,or,majority,and";
    std::optional<std::size_t> roc_trials;
    std::optional<std::size_t> roc_users;
    std::optional<double> roc_snr;
    auto* roc = app.add_subcommand("roc", "Monte Carlo ROC for single-user and fused detection");
    add_common(roc, roc_c);
    roc->add_option("--rules", roc_rules, "Comma list of single, and, or, majority, k:<k>");
    roc->add_option("--trials", roc_trials, "Trials per hypothesis");
    roc->add_option("--users", roc_users, "Number of cooperating users");
    roc->add_option("--snr", roc_snr, "SNR in dB");

    // error
    Common err_c;
    std::string err_grid = "0.05:0.45:0.05";
    std::optional<std::size_t> err_trials;
    std::optional<double> err_snr;
    auto* err = app.add_subcommand("error", "Fused error against per-user false-alarm level");
    add_common(err, err_c);
    err->add_option("--pf-grid", err_grid, "start:stop:step");
    err->add_option("--trials", err_trials, "Trials per hypothesis");
    err->add_option("--snr", err_snr, "SNR in dB");

    // fuse
    Common fuse_c;
    double fuse_p = 0.5;
    std::size_t fuse_n = 8;
    std::string fuse_rule = "or";
    std::optional<std::size_t> fuse_k;
    auto* fuse = app.add_subcommand("fuse", "k-out-of-n fused probability");
    add_common(fuse, fuse_c);
    fuse->add_option("--p", fuse_p, "Per-user probability")->required();
    fuse->add_option("--n", fuse_n, "Number of users")->required();
    fuse->add_option("--rule", fuse_rule, "and | or | majority | k");
    fuse->add_option("--k", fuse_k, "Vote threshold for --rule k");

    // optn
    Common optn_c;
    std::optional<double> optn_pf;
    double optn_pm = 0.1;
    std::size_t optn_k = 8;
    std::string optn_grid;
    auto* optn = app.add_subcommand("optn", "Closed-form optimal number of votes");
    add_common(optn, optn_c);
    optn->add_option("--pf", optn_pf, "Per-user false-alarm probability");
    optn->add_option("--pm", optn_pm, "Per-user miss probability");
    optn->add_option("--k", optn_k, "Total number of users");
    optn->add_option("--pf-grid", optn_grid, "start:stop:step, emits CSV");

    // pso
    Common pso_c;
    cs::PsoExperimentConfig pso_cfg;
    std::string pso_rmode = "fixed";
    std::optional<double> pso_zeta;
    std::optional<double> pso_snr;
    std::string pso_roc_out;
    auto* pso = app.add_subcommand("pso", "Particle-swarm threshold adaptation for one user");
    add_common(pso, pso_c);
    pso->add_option("--c0", pso_cfg.pso.c0, "Coefficient on lambda(n) (or on V(n) with --standard-inertia)");
    pso->add_option("--c1", pso_cfg.pso.c1, "Personal-best coefficient");
    pso->add_option("--c2", pso_cfg.pso.c2, "Global-best coefficient");
    pso->add_option("--r-mode", pso_rmode, "fixed | random")->check(CLI::IsMember({"fixed", "random"}));
    pso->add_option("--r1", pso_cfg.pso.r_mode.r1, "Fixed r1");
    pso->add_option("--r2", pso_cfg.pso.r_mode.r2, "Fixed r2");
    pso->add_option("--iters", pso_cfg.pso.max_iters, "Maximum iterations");
    pso->add_option("--zeta", pso_zeta, "Stop when successive gbest differ by less than this");
    pso->add_flag("--standard-inertia", pso_cfg.pso.standard_inertia, "Use c0*V(n) as the first velocity term");
    pso->add_option("--swarm-size", pso_cfg.swarm_size, "Number of particles");
    pso->add_option("--calibration", pso_cfg.calibration_bursts, "Calibration bursts per hypothesis");
    pso->add_option("--test", pso_cfg.test_bursts, "Test bursts per hypothesis");
    pso->add_option("--snr", pso_snr, "SNR in dB");
    pso->add_option("--roc-out", pso_roc_out, "Also write the test-set ROC with the PSO and baseline points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            const cs::Scenario s = load(gen_c);
            cs::SampleBuffer buf;
            double fc = s.ofdm.carrier_fc;
            if (gen_kind == "ofdm") {
                buf = cs::generate_ofdm(s.ofdm, s.base_seed);
            } else if (gen_kind == "tone") {
                buf = cs::generate_tone(gen_f0, gen_amp, gen_len);
                fc = gen_f0;
            } else {
                buf = cs::generate_noise({gen_var, s.base_seed}, gen_len);
            }
            if (gen_snr && gen_kind != "noise") buf = cs::apply_awgn(buf, *gen_snr, cs::mix64(s.base_seed));
            emit(gen_c, [&](std::ostream& os) { cs::write_samples_csv(os, buf, fc); });
        } else if (*csd) {
            cs::Scenario s = load(csd_c);
            if (csd_window) s.detector.window_len = *csd_window;
            if (csd_snr) s.snr_db = *csd_snr;
            const auto source = csd_source == "h1"      ? cs::ContourSource::kH1
                                : csd_source == "noise" ? cs::ContourSource::kNoiseOnly
                                : csd_source == "carrier" ? cs::ContourSource::kCarrier
                                                        : cs::ContourSource::kNoiseless;
            const cs::CsdEstimate est = cs::contour_csd(s, source);
            emit(csd_c, [&](std::ostream& os) { cs::write_csd_csv(os, est); });
        } else if (*roc) {
            cs::Scenario s = load(roc_c);
            if (roc_trials) s.n_trials = *roc_trials;
            if (roc_users) s.n_users = *roc_users;
            if (roc_snr) s.snr_db = *roc_snr;
            const cs::TrialStats stats = cs::run_trials(s);
            const std::vector<double> grid = cs::threshold_grid(s, stats);
            std::vector<cs::RocCurve> curves;
            for (const std::string& r : split(roc_rules)) {
                if (r == "single" || r == "SINGLE") {
                    curves.push_back(cs::single_user_roc(stats, grid));
                } else {
                    curves.push_back(cs::fused_roc(stats, grid, cs::FusionRule::parse(r)));
                }
            }
            emit(roc_c, [&](std::ostream& os) { cs::write_roc_csv(os, curves); });
        } else if (*err) {
            cs::Scenario s = load(err_c);
            if (err_trials) s.n_trials = *err_trials;
            if (err_snr) s.snr_db = *err_snr;
            const cs::TrialStats stats = cs::run_trials(s);
            std::vector<cs::FusionRule> rules;
            for (std::size_t k = 1; k <= s.n_users; ++k) rules.push_back(cs::FusionRule::k_out_of_n(k));
            const auto rows = cs::error_curve(s, stats, parse_range(err_grid), rules, true);
            emit(err_c, [&](std::ostream& os) { cs::write_error_csv(os, rows); });
        } else if (*fuse) {
            cs::FusionRule rule = fuse_rule == "k" ? cs::FusionRule::k_out_of_n(fuse_k.value_or(0))
                                                   : cs::FusionRule::parse(fuse_rule);
            if (fuse_rule != "k" && fuse_k) throw cs::ConfigError("--k only applies to --rule k");
            const std::size_t k = cs::rule_to_k(rule, fuse_n);
            const double p = cs::fusion_probability(fuse_p, fuse_n, k);
            emit(fuse_c, [&](std::ostream& os) { fmt::print(os, "{}\n", p); });
        } else if (*optn) {
            if (!optn_grid.empty()) {
                const auto rows = cs::optimal_n_curve(optn_pm, optn_k, parse_range(optn_grid));
                emit(optn_c, [&](std::ostream& os) { cs::write_optn_csv(os, rows); });
            } else {
                if (!optn_pf) throw cs::ConfigError("optn needs --pf or --pf-grid");
                const cs::UserCountResult r = cs::optimal_n(*optn_pf, optn_pm, optn_k);
                emit(optn_c, [&](std::ostream& os) {
                    fmt::print(os, "n_opt={}\nalpha_ratio={}\nerror={}\n", r.n_opt, r.alpha_ratio, r.error_at_opt);
                });
            }
        } else if (*pso) {
            cs::Scenario s = load(pso_c);
            if (pso_snr) s.snr_db = *pso_snr;
            if (pso_rmode == "random") {
                pso_cfg.pso.r_mode = cs::PsoConfig::RMode::random(cs::mix64(s.base_seed ^ 0x5053'4fULL));
            }
            pso_cfg.pso.tolerance_zeta = pso_zeta;
            const cs::PsoExperimentResult res = cs::run_pso_experiment(s, pso_cfg);
            emit(pso_c, [&](std::ostream& os) { cs::write_pso_csv(os, res.run); });
            if (!pso_roc_out.empty()) {
                Common roc_target = pso_c;
                roc_target.out = pso_roc_out;
                const cs::RocCurve pso_curve{"PSO", 1, {res.pso_point}};
                const cs::RocCurve base_curve{"BASELINE", 1, {res.baseline_point}};
                const std::vector<cs::RocCurve> curves{res.test_roc, pso_curve, base_curve};
                emit(roc_target, [&](std::ostream& os) { cs::write_roc_csv(os, curves); });
            }
        }
    } catch (const cs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const cs::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 4;
    } catch (const cs::Error& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
