#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cyclosense/sigmodel.hpp"

namespace cyclosense {

/// Cyclic spectral density magnitudes on an (f, alpha) grid.
///
/// Rows are cyclic frequencies, columns are spectral frequencies; both axes
/// are in cycles/sample and strictly increasing. f_axis always covers the
/// full [-0.5, 0.5) range at resolution 1/window_len.
struct CsdEstimate {
    std::vector<double> f_axis;
    std::vector<double> alpha_axis;
    std::vector<double> magnitudes;  // alpha-major: magnitudes[a * f_axis.size() + f]
    std::size_t window_len = 0;
    std::size_t n_blocks = 0;

    double at(std::size_t f_bin, std::size_t alpha_bin) const {
        return magnitudes[alpha_bin * f_axis.size() + f_bin];
    }
    double& at(std::size_t f_bin, std::size_t alpha_bin) {
        return magnitudes[alpha_bin * f_axis.size() + f_bin];
    }
};

struct DetectorConfig {
    std::size_t window_len = 1024;
    double overlap_fraction = 0.5;
    std::vector<double> alpha_set;
    std::size_t peak_neighborhood = 2;
};

/// Throws ConfigError on a violated invariant (window_len a power of two and
/// >= 16, overlap in [0, 1), alpha_set nonempty and inside [-0.5, 0.5)).
void validate(const DetectorConfig& cfg);

/// Every cyclic frequency m/window_len in [-0.5, 0.5): the contour grid.
std::vector<double> full_alpha_grid(std::size_t window_len);

/// Cyclic frequencies {0, +2fc, -2fc}, each widened by +-neighborhood bins of
/// 1/window_len. Enough rows for peak_statistic at a known carrier.
std::vector<double> targeted_alpha_set(double fc, std::size_t window_len, std::size_t neighborhood);

enum class Hypothesis { kH0, kH1 };

struct Decision {
    Hypothesis hypothesis = Hypothesis::kH0;
    double statistic = 0.0;
    double threshold = 0.0;
};

/// Sum of squares.
double energy_statistic(const SampleBuffer& x);

/// Time-averaged cyclic autocorrelation
///   (1/M) * sum_n x(n+tau) x(n-tau) exp(-j 2 pi alpha n)
/// over the M = N - 2|tau| indices where both samples exist.
std::complex<double> cyclic_autocorrelation(const SampleBuffer& x, double alpha, long tau);

/// Time-smoothed cyclic periodogram.
///
/// The buffer is cut into Hann-windowed blocks of window_len samples with the
/// configured overlap. For each cyclic frequency alpha the block is shifted
/// by -alpha/2 and +alpha/2 (u = z e^{-j pi alpha n}, v = z e^{+j pi alpha n}),
/// both are transformed, and |U(f) conj(V(f))| / window_len is averaged over
/// blocks. Rows whose alpha is a multiple of 1/window_len reuse two
/// transforms per block; other rows pay two transforms each.
CsdEstimate estimate_csd(const SampleBuffer& x, const DetectorConfig& cfg);

/// Largest magnitude within `neighborhood` bins of (f=+-fc, alpha=0) and
/// (f=0, alpha=+-2fc). Throws ArgumentError when a point falls off the grid.
double peak_statistic(const CsdEstimate& csd, double fc, std::size_t neighborhood);

/// H1 iff statistic > lambda. A tie resolves to H0.
Decision decide(double statistic, double lambda);

/// peak_statistic(estimate_csd(x, cfg), fc, cfg.peak_neighborhood).
double cyclostationary_statistic(const SampleBuffer& x, const DetectorConfig& cfg, double fc);

}  // namespace cyclosense
