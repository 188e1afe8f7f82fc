#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cyclosense/detectors.hpp"
#include "cyclosense/fusion.hpp"
#include "cyclosense/optimal_users.hpp"
#include "cyclosense/pso_threshold.hpp"
#include "cyclosense/sigmodel.hpp"

namespace cyclosense {

/// Explicit thresholds, or AUTO: `auto_points` quantiles of the pooled H0
/// statistics.
struct ThresholdGrid {
    std::vector<double> values;  // empty means AUTO
    std::size_t auto_points = 50;

    bool is_auto() const { return values.empty(); }
};

/// One Monte Carlo experiment. An empty detector.alpha_set means "targeted":
/// only the rows peak_statistic reads are estimated.
struct Scenario {
    double snr_db = -5.0;
    std::size_t n_users = 8;
    std::size_t n_trials = 500;
    DetectorConfig detector;
    OfdmParams ofdm;
    FusionRule fusion_rule = FusionRule::or_rule();
    ThresholdGrid threshold_grid;
    std::uint64_t base_seed = 1;
};

void validate(const Scenario& scenario);

/// The scenario's detector with an empty alpha_set replaced by the targeted set.
DetectorConfig effective_detector(const Scenario& scenario);

/// Parses `key = value` lines ('#' starts a comment). Unknown keys and
/// malformed values throw ConfigError naming the line; cross-field checks
/// are left to validate(Scenario). Keys:
///   snr_db, n_users, n_trials, base_seed,
///   window_len, overlap_fraction, peak_neighborhood,
///   alpha_set            targeted | full | comma-separated list,
///   n_subcarriers, n_symbols, guard_fraction, carrier_fc, subcarrier_bw,
///   fusion_rule          and | or | majority | k:<k>,
///   threshold_grid       auto | auto:<points> | comma-separated list.
Scenario parse_scenario(const std::string& text, Scenario base = {});
Scenario load_scenario(const std::filesystem::path& path, Scenario base = {});

// Seed derivation ------------------------------------------------------------

/// Independent random streams. Each burst draws from
/// derive_seed(base_seed, {stream, tag, user, trial}).
enum class Stream : std::uint64_t {
    kCooperative = 0,
    kCalibration = 1,
    kTest = 2,
    kInitTraining = 3,
    kContour = 4,
};

enum class BurstTag : std::uint64_t { kH0Noise = 0, kH1Signal = 1, kH1Noise = 2 };

std::uint64_t burst_seed(std::uint64_t base, Stream stream, BurstTag tag, std::size_t user, std::size_t trial);

/// Noise-only burst (H0) or OFDM burst plus noise at the scenario SNR (H1).
SampleBuffer simulate_burst(const Scenario& scenario, Hypothesis hyp, Stream stream, std::size_t user,
                            std::size_t trial);

/// Cyclostationary statistic of one simulated burst.
double burst_statistic(const Scenario& scenario, const DetectorConfig& det, Hypothesis hyp, Stream stream,
                       std::size_t user, std::size_t trial);

// Trials and ROC ------------------------------------------------------------

/// Per-user statistics, user-major.
struct TrialStats {
    std::size_t n_users = 0;
    std::size_t n_trials = 0;
    std::vector<double> h0;
    std::vector<double> h1;

    double h0_at(std::size_t user, std::size_t trial) const { return h0[user * n_trials + trial]; }
    double h1_at(std::size_t user, std::size_t trial) const { return h1[user * n_trials + trial]; }
};

TrialStats run_trials(const Scenario& scenario);

struct RocPoint {
    double threshold = 0.0;
    double pf_hat = 0.0;
    double pd_hat = 0.0;
    double pm_hat = 0.0;
    double error_hat = 0.0;
    std::size_t n_trials = 0;  // samples behind each probability estimate
};

struct RocCurve {
    std::string rule;  // "SINGLE", "OR", "AND", "MAJORITY", "K<k>"
    std::size_t n_users = 1;
    std::vector<RocPoint> points;  // descending threshold
};

/// Binomial standard error sqrt(p(1-p)/n).
double standard_error(double p, std::size_t n);

/// Type-7 (linear interpolation) empirical quantile, q in [0, 1].
double empirical_quantile(std::span<const double> sorted, double q);

/// Scenario grid, or AUTO quantiles of the pooled H0 statistics, descending.
std::vector<double> threshold_grid(const Scenario& scenario, const TrialStats& stats);
std::vector<double> auto_thresholds(const TrialStats& stats, std::size_t points);

RocPoint make_roc_point(double threshold, std::size_t false_alarms, std::size_t detections, std::size_t n);

/// Single-user curve over all users pooled (each user is an i.i.d. detector).
RocCurve single_user_roc(const TrialStats& stats, std::span<const double> thresholds);

/// Fusion-centre curve: per-trial vote count across users against the rule.
RocCurve fused_roc(const TrialStats& stats, std::span<const double> thresholds, const FusionRule& rule);

/// {fused curve for scenario.fusion_rule, single-user curve}.
std::vector<RocCurve> roc_curve(const Scenario& scenario);
std::vector<RocCurve> roc_curve(const Scenario& scenario, const TrialStats& stats);

/// Detection probability of a curve at a false-alarm level, by linear
/// interpolation between operating points with (0,0) and (1,1) as anchors.
double pd_at_pf(const RocCurve& curve, double pf);

// Error curve --------------------------------------------------------------

struct ErrorRow {
    double pf_target = 0.0;
    std::string rule;  // fusion rule name, or "OPTIMAL_N"
    std::size_t n = 0; // vote threshold used
    double error = 0.0;
    double pf_fused = 0.0;
    double pd_fused = 0.0;
    double standard_error = 0.0;
    double pf_user = 0.0;  // measured single-user operating point
    double pm_user = 0.0;
    bool valid = true;
    std::string note;
};

/// For each per-user target false-alarm level: invert the pooled H0 CDF for
/// the threshold, then measure the fused error for each rule and for the
/// closed-form optimal vote threshold at the measured per-user (pf, pm).
std::vector<ErrorRow> error_curve(const Scenario& scenario, const TrialStats& stats,
                                  std::span<const double> pf_targets, std::span<const FusionRule> rules,
                                  bool include_optimal_n = true);

/// Fused (pf, pd) at one threshold with an n-out-of-n_users vote.
RocPoint fused_point(const TrialStats& stats, double threshold, std::size_t n_votes);

// CSD contour --------------------------------------------------------------

enum class ContourSource { kH1, kNoiseOnly, kNoiseless, kCarrier };

/// Full-grid CSD of one burst: H1 at the scenario SNR, noise only, the
/// clean OFDM burst, or a clean unit-power carrier at carrier_fc (the
/// calibration case whose peaks sit exactly on the feature points).
CsdEstimate contour_csd(const Scenario& scenario, ContourSource source);

/// Writes contour_csd as `f,alpha,magnitude`. Throws IoError.
void export_csd_contour(const Scenario& scenario, const std::filesystem::path& path,
                        ContourSource source = ContourSource::kH1);

// Threshold adaptation experiment -------------------------------------------

struct PsoExperimentConfig {
    PsoConfig pso;
    std::size_t swarm_size = 8;
    std::size_t calibration_bursts = 500;  // per hypothesis
    std::size_t test_bursts = 500;         // per hypothesis
    std::size_t init_training_bursts = 20; // local H0 bursts each particle uses for its start value
    double init_pf = 0.1;                  // false-alarm level of the start values
};

struct PsoExperimentResult {
    std::vector<double> initial_thresholds;
    double baseline_threshold = 0.0;  // median of the initial thresholds
    PsoResult run;
    RocPoint pso_point;       // on the test set
    RocPoint baseline_point;  // on the test set
    RocCurve test_roc;        // single-user ROC of the test set, AUTO grid
};

/// Single-user threshold adaptation. Each particle is one user whose start
/// value is the (1 - init_pf) quantile of its own short noise-only training
/// run. The fitness is pf_hat + pm_hat on a calibration set; results are
/// reported on an independent test set.
PsoExperimentResult run_pso_experiment(const Scenario& scenario, const PsoExperimentConfig& cfg);

// CSV ------------------------------------------------------------------------

void write_samples_csv(std::ostream& os, const SampleBuffer& buf, double fc);
void write_csd_csv(std::ostream& os, const CsdEstimate& csd);
void write_roc_csv(std::ostream& os, std::span<const RocCurve> curves);
void write_error_csv(std::ostream& os, std::span<const ErrorRow> rows);
void write_pso_csv(std::ostream& os, const PsoResult& run);
/// `pf,n_opt,alpha_ratio,error`; out-of-domain rows carry empty fields.
void write_optn_csv(std::ostream& os, std::span<const OptimalNRow> rows);

}  // namespace cyclosense
