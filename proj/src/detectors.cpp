#include "cyclosense/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cyclosense/error.hpp"
#include "fft.hpp"

namespace cyclosense {

namespace {

using cplx = std::complex<double>;
using detail::FftPlan;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(-j*2*pi*freq*n), with the phase reduced before scaling so long
// buffers keep full precision.
cplx unit_phasor(double freq, long n) {
    const double cycles = freq * static_cast<double>(n);
    return std::polar(1.0, -kTwoPi * (cycles - std::floor(cycles)));
}

// n is a power of two.
std::size_t wrap(long idx, std::size_t n) { return static_cast<std::size_t>(idx) & (n - 1); }

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double a : v) {
        if (out.empty() || a - out.back() > 1e-12) out.push_back(a);
    }
    return out;
}

}  // namespace

void validate(const DetectorConfig& cfg) {
    const std::size_t n = cfg.window_len;
    if (n < 16 || (n & (n - 1)) != 0) {
        throw ConfigError("detector: window_len must be a power of two >= 16");
    }
    if (!(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction < 1.0)) {
        throw ConfigError("detector: overlap_fraction must lie in [0, 1)");
    }
    if (cfg.alpha_set.empty()) throw ConfigError("detector: alpha_set must be nonempty");
    for (double a : cfg.alpha_set) {
        if (!(a >= -0.5 && a < 0.5)) {
            throw ConfigError("detector: cyclic frequency " + std::to_string(a) + " outside [-0.5, 0.5)");
        }
    }
}

std::vector<double> full_alpha_grid(std::size_t window_len) {
    std::vector<double> out(window_len);
    const long half = static_cast<long>(window_len / 2);
    for (std::size_t i = 0; i < window_len; ++i) {
        out[i] = static_cast<double>(static_cast<long>(i) - half) / static_cast<double>(window_len);
    }
    return out;
}

std::vector<double> targeted_alpha_set(double fc, std::size_t window_len, std::size_t neighborhood) {
    const double step = 1.0 / static_cast<double>(window_len);
    std::vector<double> out;
    for (double centre : {-2.0 * fc, 0.0, 2.0 * fc}) {
        // snap to the grid so the fast path applies
        const double snapped = std::round(centre * static_cast<double>(window_len)) * step;
        for (long j = -static_cast<long>(neighborhood); j <= static_cast<long>(neighborhood); ++j) {
            const double a = snapped + static_cast<double>(j) * step;
            if (a >= -0.5 && a < 0.5) out.push_back(a);
        }
    }
    return sorted_unique(std::move(out));
}

double energy_statistic(const SampleBuffer& x) {
    if (x.samples.empty()) throw ArgumentError("energy_statistic: buffer is empty");
    double acc = 0.0;
    for (double v : x.samples) acc += v * v;
    return acc;
}

cplx cyclic_autocorrelation(const SampleBuffer& x, double alpha, long tau) {
    const long len = static_cast<long>(x.size());
    const long lag = std::abs(tau);
    if (2 * lag >= len) {
        throw ArgumentError("cyclic_autocorrelation: |tau| must be below length/2");
    }
    cplx acc{};
    for (long n = lag; n < len - lag; ++n) {
        acc += x.samples[static_cast<std::size_t>(n + tau)] * x.samples[static_cast<std::size_t>(n - tau)] *
               unit_phasor(alpha, n);
    }
    return acc / static_cast<double>(len - 2 * lag);
}

CsdEstimate estimate_csd(const SampleBuffer& x, const DetectorConfig& cfg) {
    validate(cfg);
    const std::size_t n = cfg.window_len;
    if (x.size() < n) throw ArgumentError("estimate_csd: buffer shorter than window_len");

    const std::size_t hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - cfg.overlap_fraction))));

    CsdEstimate est;
    est.window_len = n;
    est.f_axis = full_alpha_grid(n);
    est.alpha_axis = sorted_unique(cfg.alpha_set);
    est.magnitudes.assign(est.alpha_axis.size() * n, 0.0);

    // Split rows into grid-aligned (integer m = alpha*n) and off-grid ones.
    struct Row {
        std::size_t index;
        long m;
        bool on_grid;
    };
    std::vector<Row> rows;
    bool need_half_shift = false;
    for (std::size_t a = 0; a < est.alpha_axis.size(); ++a) {
        const double scaled = est.alpha_axis[a] * static_cast<double>(n);
        const double m = std::round(scaled);
        const bool on_grid = std::abs(scaled - m) < 1e-9;
        rows.push_back({a, static_cast<long>(m), on_grid});
        if (on_grid && (static_cast<long>(m) & 1L) != 0) need_half_shift = true;
    }

    const std::vector<double> window = hann(n);
    FftPlan fft(n, FftPlan::Direction::kForward);
    const auto transform = [&fft](std::vector<cplx>& dest, auto&& fill) {
        auto in = fft.in();
        for (std::size_t i = 0; i < in.size(); ++i) in[i] = fill(i);
        fft.execute();
        const auto out = fft.out();
        dest.assign(out.begin(), out.end());
    };
    std::vector<cplx> z;
    std::vector<cplx> zh;
    std::vector<cplx> u;
    std::vector<cplx> v;
    std::vector<double> mag;
    std::vector<double> mag_half;
    const auto magnitudes_of = [](const std::vector<cplx>& spec, std::vector<double>& dest) {
        dest.resize(spec.size());
        for (std::size_t i = 0; i < spec.size(); ++i) dest[i] = std::sqrt(std::norm(spec[i]));
    };
    std::vector<cplx> half_bin(n);
    for (std::size_t i = 0; i < n; ++i) half_bin[i] = unit_phasor(0.5 / static_cast<double>(n), static_cast<long>(i));

    const double norm = 1.0 / static_cast<double>(n);
    const long centre = static_cast<long>(n / 2);

    for (std::size_t start = 0; start + n <= x.size(); start += hop) {
        ++est.n_blocks;
        const double* block = x.samples.data() + start;
        transform(z, [&](std::size_t i) { return cplx(block[i] * window[i]); });
        magnitudes_of(z, mag);
        if (need_half_shift) {
            transform(zh, [&](std::size_t i) { return block[i] * window[i] * half_bin[i]; });
            magnitudes_of(zh, mag_half);
        }

        for (const Row& row : rows) {
            double* out = est.magnitudes.data() + row.index * n;
            if (row.on_grid) {
                const bool odd = (row.m & 1L) != 0;
                // |U conj V| = |U| |V|, and both are shifted copies of one spectrum.
                const std::vector<double>& spec = odd ? mag_half : mag;
                const long up_shift = odd ? (row.m - 1) / 2 : row.m / 2;
                const long down_shift = odd ? (row.m + 1) / 2 : row.m / 2;
                for (std::size_t i = 0; i < n; ++i) {
                    const long bin = static_cast<long>(i) - centre;
                    out[i] += spec[wrap(bin + up_shift, n)] * spec[wrap(bin - down_shift, n)] * norm;
                }
            } else {
                const double alpha = est.alpha_axis[row.index];
                transform(u, [&](std::size_t i) {
                    return block[i] * window[i] * unit_phasor(0.5 * alpha, static_cast<long>(i));
                });
                transform(v, [&](std::size_t i) {
                    return block[i] * window[i] * std::conj(unit_phasor(0.5 * alpha, static_cast<long>(i)));
                });
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t k = wrap(static_cast<long>(i) - centre, n);
                    out[i] += std::abs(u[k] * std::conj(v[k])) * norm;
                }
            }
        }
    }

    const double inv_blocks = 1.0 / static_cast<double>(est.n_blocks);
    for (double& m : est.magnitudes) m *= inv_blocks;
    return est;
}

double peak_statistic(const CsdEstimate& csd, double fc, std::size_t neighborhood) {
    if (csd.f_axis.empty() || csd.alpha_axis.empty() || csd.window_len == 0) {
        throw ArgumentError("peak_statistic: empty grid");
    }
    const double step = 1.0 / static_cast<double>(csd.window_len);
    const double radius = (static_cast<double>(neighborhood) + 0.5) * step + 1e-12;
    const auto inside = [&](const std::vector<double>& axis, double v) {
        return std::isfinite(v) && v >= axis.front() - 0.5 * step && v <= axis.back() + 0.5 * step;
    };
    if (!inside(csd.f_axis, fc) || !inside(csd.f_axis, -fc) || !inside(csd.alpha_axis, 2.0 * fc) ||
        !inside(csd.alpha_axis, -2.0 * fc)) {
        throw ArgumentError("peak_statistic: carrier " + std::to_string(fc) + " falls outside the grid");
    }

    const struct {
        double f, alpha;
    } points[] = {{fc, 0.0}, {-fc, 0.0}, {0.0, 2.0 * fc}, {0.0, -2.0 * fc}};

    double best = 0.0;
    for (const auto& p : points) {
        bool any = false;
        for (std::size_t a = 0; a < csd.alpha_axis.size(); ++a) {
            if (std::abs(csd.alpha_axis[a] - p.alpha) > radius) continue;
            for (std::size_t f = 0; f < csd.f_axis.size(); ++f) {
                if (std::abs(csd.f_axis[f] - p.f) > radius) continue;
                any = true;
                best = std::max(best, csd.at(f, a));
            }
        }
        if (!any) {
            throw ArgumentError("peak_statistic: no grid cells near (f=" + std::to_string(p.f) +
                                ", alpha=" + std::to_string(p.alpha) + ")");
        }
    }
    return best;
}

Decision decide(double statistic, double lambda) {
    return {statistic > lambda ? Hypothesis::kH1 : Hypothesis::kH0, statistic, lambda};
}

double cyclostationary_statistic(const SampleBuffer& x, const DetectorConfig& cfg, double fc) {
    return peak_statistic(estimate_csd(x, cfg), fc, cfg.peak_neighborhood);
}

}  // namespace cyclosense
