#include "cyclosense/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cyclosense/error.hpp"
#include "cyclosense/seeding.hpp"

namespace cyclosense {

void validate(const Scenario& s) {
    if (s.n_users < 1) throw ConfigError("scenario: n_users must be at least 1");
    if (s.n_trials < 1) throw ConfigError("scenario: n_trials must be at least 1");
    if (!std::isfinite(s.snr_db)) throw ConfigError("scenario: snr_db must be finite");
    validate(s.ofdm);
    validate(effective_detector(s));
    if (s.ofdm.burst_length() < s.detector.window_len) {
        throw ConfigError("scenario: OFDM burst is shorter than the detector window");
    }
    rule_to_k(s.fusion_rule, s.n_users);
    if (s.threshold_grid.is_auto()) {
        if (s.threshold_grid.auto_points < 2) throw ConfigError("scenario: AUTO threshold grid needs >= 2 points");
    } else {
        const auto& v = s.threshold_grid.values;
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (!(v[i] > v[i - 1])) throw ConfigError("scenario: explicit threshold grid must be strictly increasing");
        }
    }
}

DetectorConfig effective_detector(const Scenario& s) {
    DetectorConfig det = s.detector;
    if (det.alpha_set.empty()) {
        det.alpha_set = targeted_alpha_set(s.ofdm.carrier_fc, det.window_len, det.peak_neighborhood);
    }
    return det;
}

std::uint64_t burst_seed(std::uint64_t base, Stream stream, BurstTag tag, std::size_t user, std::size_t trial) {
    return derive_seed(base, {static_cast<std::uint64_t>(stream), static_cast<std::uint64_t>(tag), user, trial});
}

SampleBuffer simulate_burst(const Scenario& s, Hypothesis hyp, Stream stream, std::size_t user, std::size_t trial) {
    if (hyp == Hypothesis::kH0) {
        const NoiseSpec noise{noise_variance_for_snr(s.snr_db),
                              burst_seed(s.base_seed, stream, BurstTag::kH0Noise, user, trial)};
        return generate_noise(noise, s.ofdm.burst_length());
    }
    const SampleBuffer clean = generate_ofdm(s.ofdm, burst_seed(s.base_seed, stream, BurstTag::kH1Signal, user, trial));
    return apply_awgn(clean, s.snr_db, burst_seed(s.base_seed, stream, BurstTag::kH1Noise, user, trial));
}

double burst_statistic(const Scenario& s, const DetectorConfig& det, Hypothesis hyp, Stream stream, std::size_t user,
                       std::size_t trial) {
    return cyclostationary_statistic(simulate_burst(s, hyp, stream, user, trial), det, s.ofdm.carrier_fc);
}

TrialStats run_trials(const Scenario& s) {
    validate(s);
    const DetectorConfig det = effective_detector(s);
    TrialStats stats;
    stats.n_users = s.n_users;
    stats.n_trials = s.n_trials;
    stats.h0.resize(s.n_users * s.n_trials);
    stats.h1.resize(s.n_users * s.n_trials);
    for (std::size_t u = 0; u < s.n_users; ++u) {
        for (std::size_t t = 0; t < s.n_trials; ++t) {
            stats.h0[u * s.n_trials + t] = burst_statistic(s, det, Hypothesis::kH0, Stream::kCooperative, u, t);
            stats.h1[u * s.n_trials + t] = burst_statistic(s, det, Hypothesis::kH1, Stream::kCooperative, u, t);
        }
    }
    return stats;
}

double standard_error(double p, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double empirical_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw ArgumentError("empirical_quantile: no samples");
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> auto_thresholds(const TrialStats& stats, std::size_t points) {
    std::vector<double> pooled = stats.h0;
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < points; ++i) {
        const double q = 1.0 - static_cast<double>(i) / static_cast<double>(points - 1);
        const double t = empirical_quantile(pooled, q);
        if (out.empty() || t < out.back()) out.push_back(t);
    }
    return out;
}

std::vector<double> threshold_grid(const Scenario& s, const TrialStats& stats) {
    if (s.threshold_grid.is_auto()) return auto_thresholds(stats, s.threshold_grid.auto_points);
    return {s.threshold_grid.values.rbegin(), s.threshold_grid.values.rend()};
}

RocPoint make_roc_point(double threshold, std::size_t false_alarms, std::size_t detections, std::size_t n) {
    RocPoint p;
    p.threshold = threshold;
    p.n_trials = n;
    p.pf_hat = static_cast<double>(false_alarms) / static_cast<double>(n);
    p.pd_hat = static_cast<double>(detections) / static_cast<double>(n);
    p.pm_hat = 1.0 - p.pd_hat;
    p.error_hat = p.pf_hat + p.pm_hat;
    return p;
}

RocCurve single_user_roc(const TrialStats& stats, std::span<const double> thresholds) {
    RocCurve curve{"SINGLE", 1, {}};
    for (double t : thresholds) {
        const auto fa = static_cast<std::size_t>(
            std::count_if(stats.h0.begin(), stats.h0.end(), [t](double v) { return decide(v, t).hypothesis == Hypothesis::kH1; }));
        const auto det = static_cast<std::size_t>(
            std::count_if(stats.h1.begin(), stats.h1.end(), [t](double v) { return decide(v, t).hypothesis == Hypothesis::kH1; }));
        curve.points.push_back(make_roc_point(t, fa, det, stats.h0.size()));
    }
    return curve;
}

RocPoint fused_point(const TrialStats& stats, double threshold, std::size_t n_votes) {
    const FusionRule rule = FusionRule::k_out_of_n(n_votes);
    std::size_t fa = 0;
    std::size_t det = 0;
    for (std::size_t t = 0; t < stats.n_trials; ++t) {
        std::size_t votes0 = 0;
        std::size_t votes1 = 0;
        for (std::size_t u = 0; u < stats.n_users; ++u) {
            votes0 += decide(stats.h0_at(u, t), threshold).hypothesis == Hypothesis::kH1 ? 1 : 0;
            votes1 += decide(stats.h1_at(u, t), threshold).hypothesis == Hypothesis::kH1 ? 1 : 0;
        }
        fa += fuse_votes(votes0, stats.n_users, rule) == Hypothesis::kH1 ? 1 : 0;
        det += fuse_votes(votes1, stats.n_users, rule) == Hypothesis::kH1 ? 1 : 0;
    }
    return make_roc_point(threshold, fa, det, stats.n_trials);
}

RocCurve fused_roc(const TrialStats& stats, std::span<const double> thresholds, const FusionRule& rule) {
    const std::size_t k = rule_to_k(rule, stats.n_users);
    RocCurve curve{rule.name(), stats.n_users, {}};
    for (double t : thresholds) curve.points.push_back(fused_point(stats, t, k));
    return curve;
}

std::vector<RocCurve> roc_curve(const Scenario& s, const TrialStats& stats) {
    const std::vector<double> grid = threshold_grid(s, stats);
    return {fused_roc(stats, grid, s.fusion_rule), single_user_roc(stats, grid)};
}

std::vector<RocCurve> roc_curve(const Scenario& s) { return roc_curve(s, run_trials(s)); }

double pd_at_pf(const RocCurve& curve, double pf) {
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
    for (const RocPoint& p : curve.points) pts.emplace_back(p.pf_hat, p.pd_hat);
    pts.emplace_back(1.0, 1.0);
    std::stable_sort(pts.begin(), pts.end());

    std::size_t i = 0;
    while (i + 1 < pts.size() && pts[i + 1].first <= pf) ++i;
    if (pts[i].first == pf || i + 1 == pts.size()) return pts[i].second;
    const auto [x0, y0] = pts[i];
    const auto [x1, y1] = pts[i + 1];
    return y0 + (y1 - y0) * (pf - x0) / (x1 - x0);
}

std::vector<ErrorRow> error_curve(const Scenario& s, const TrialStats& stats, std::span<const double> pf_targets,
                                  std::span<const FusionRule> rules, bool include_optimal_n) {
    if (stats.n_users != s.n_users || stats.h0.empty()) {
        throw ArgumentError("error_curve: statistics do not belong to this scenario");
    }
    std::vector<double> pooled = stats.h0;
    std::sort(pooled.begin(), pooled.end());
    const std::size_t pool = pooled.size();
    const double floor_p = 0.5 / static_cast<double>(pool);

    std::vector<ErrorRow> rows;
    for (double target : pf_targets) {
        ErrorRow base;
        base.pf_target = target;
        if (!(target >= 1.0 / static_cast<double>(pool) && target <= 1.0 - 1.0 / static_cast<double>(pool))) {
            base.valid = false;
            base.note = "target pf unreachable on the statistic support";
            for (const FusionRule& r : rules) {
                ErrorRow row = base;
                row.rule = r.name();
                rows.push_back(row);
            }
            if (include_optimal_n) {
                base.rule = "OPTIMAL_N";
                rows.push_back(base);
            }
            continue;
        }

        const double threshold = empirical_quantile(pooled, 1.0 - target);
        const RocPoint user = single_user_roc(stats, std::span<const double>(&threshold, 1)).points.front();
        base.pf_user = user.pf_hat;
        base.pm_user = user.pm_hat;

        const auto fill = [&](ErrorRow row, std::size_t n) {
            const RocPoint fused = fused_point(stats, threshold, n);
            row.n = n;
            row.pf_fused = fused.pf_hat;
            row.pd_fused = fused.pd_hat;
            row.error = fused.error_hat;
            row.standard_error = std::hypot(standard_error(fused.pf_hat, fused.n_trials),
                                            standard_error(fused.pd_hat, fused.n_trials));
            rows.push_back(std::move(row));
        };

        for (const FusionRule& r : rules) {
            ErrorRow row = base;
            row.rule = r.name();
            fill(row, rule_to_k(r, stats.n_users));
        }
        if (include_optimal_n) {
            ErrorRow row = base;
            row.rule = "OPTIMAL_N";
            // Empirical 0 or 1 would put the closed form's logs at infinity.
            const double pf = std::clamp(user.pf_hat, floor_p, 1.0 - floor_p);
            const double pm = std::clamp(user.pm_hat, floor_p, 1.0 - floor_p);
            try {
                fill(row, optimal_n(pf, pm, stats.n_users).n_opt);
            } catch (const DomainError& e) {
                row.valid = false;
                row.note = e.what();
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

CsdEstimate contour_csd(const Scenario& s, ContourSource source) {
    validate(s);
    DetectorConfig det = s.detector;
    det.alpha_set = full_alpha_grid(det.window_len);

    SampleBuffer burst;
    switch (source) {
        case ContourSource::kH1:
            burst = simulate_burst(s, Hypothesis::kH1, Stream::kContour, 0, 0);
            break;
        case ContourSource::kNoiseOnly:
            burst = simulate_burst(s, Hypothesis::kH0, Stream::kContour, 0, 0);
            break;
        case ContourSource::kNoiseless:
            burst = generate_ofdm(s.ofdm, burst_seed(s.base_seed, Stream::kContour, BurstTag::kH1Signal, 0, 0));
            break;
        case ContourSource::kCarrier:
            burst = generate_tone(s.ofdm.carrier_fc, std::sqrt(2.0), s.ofdm.burst_length());
            break;
    }
    return estimate_csd(burst, det);
}

void export_csd_contour(const Scenario& s, const std::filesystem::path& path, ContourSource source) {
    const CsdEstimate csd = contour_csd(s, source);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_csd_csv(out, csd);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

PsoExperimentResult run_pso_experiment(const Scenario& s, const PsoExperimentConfig& cfg) {
    validate(s);
    validate(cfg.pso);
    if (cfg.swarm_size < 1) throw ConfigError("pso experiment: swarm_size must be at least 1");
    if (cfg.calibration_bursts < 1 || cfg.test_bursts < 1 || cfg.init_training_bursts < 1) {
        throw ConfigError("pso experiment: burst counts must be at least 1");
    }
    if (!(cfg.init_pf > 0.0 && cfg.init_pf < 1.0)) throw ConfigError("pso experiment: init_pf must lie in (0, 1)");

    const DetectorConfig det = effective_detector(s);
    const auto collect = [&](Stream stream, std::size_t count) {
        TrialStats st;
        st.n_users = 1;
        st.n_trials = count;
        for (std::size_t t = 0; t < count; ++t) {
            st.h0.push_back(burst_statistic(s, det, Hypothesis::kH0, stream, 0, t));
            st.h1.push_back(burst_statistic(s, det, Hypothesis::kH1, stream, 0, t));
        }
        return st;
    };

    PsoExperimentResult res;
    for (std::size_t p = 0; p < cfg.swarm_size; ++p) {
        std::vector<double> local;
        for (std::size_t t = 0; t < cfg.init_training_bursts; ++t) {
            local.push_back(burst_statistic(s, det, Hypothesis::kH0, Stream::kInitTraining, p, t));
        }
        std::sort(local.begin(), local.end());
        res.initial_thresholds.push_back(empirical_quantile(local, 1.0 - cfg.init_pf));
    }
    {
        std::vector<double> sorted = res.initial_thresholds;
        std::sort(sorted.begin(), sorted.end());
        res.baseline_threshold = empirical_quantile(sorted, 0.5);
    }

    const TrialStats calibration = collect(Stream::kCalibration, cfg.calibration_bursts);
    const FitnessFn fitness = [&calibration](double lambda) {
        return single_user_roc(calibration, std::span<const double>(&lambda, 1)).points.front().error_hat;
    };
    res.run = pso_run(res.initial_thresholds, cfg.pso, fitness);

    const TrialStats test = collect(Stream::kTest, cfg.test_bursts);
    const double probes[] = {res.run.gbest, res.baseline_threshold};
    const RocCurve at = single_user_roc(test, probes);
    res.pso_point = at.points[0];
    res.baseline_point = at.points[1];
    res.test_roc = single_user_roc(test, auto_thresholds(test, s.threshold_grid.auto_points));
    return res;
}

}  // namespace cyclosense
