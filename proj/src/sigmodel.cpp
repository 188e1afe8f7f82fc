#include "cyclosense/sigmodel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cyclosense/error.hpp"
#include "fft.hpp"

namespace cyclosense {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t guard_length(const OfdmParams& p) {
    return static_cast<std::size_t>(std::llround(p.guard_fraction * static_cast<double>(p.n_subcarriers)));
}

}  // namespace

void validate(const SampleBuffer& buf) {
    if (buf.samples.empty()) throw ArgumentError("sample buffer is empty");
    for (std::size_t i = 0; i < buf.samples.size(); ++i) {
        if (!std::isfinite(buf.samples[i])) {
            throw ArgumentError("sample buffer holds a non-finite value at index " + std::to_string(i));
        }
    }
}

double mean_power(const SampleBuffer& buf) {
    if (buf.samples.empty()) return 0.0;
    double acc = 0.0;
    for (double v : buf.samples) acc += v * v;
    return acc / static_cast<double>(buf.samples.size());
}

std::size_t OfdmParams::symbol_length() const { return n_subcarriers + guard_length(*this); }

std::size_t OfdmParams::active_half_width() const {
    // One subcarrier spacing of margin inside the band edge keeps the
    // rectangular-pulse sidelobes of the outermost carriers in band.
    const double edge = subcarrier_bw / 2.0 * static_cast<double>(n_subcarriers) - 1.0;
    return edge < 1.0 ? 0 : static_cast<std::size_t>(std::floor(edge));
}

void validate(const OfdmParams& p) {
    if (!is_power_of_two(p.n_subcarriers)) {
        throw ConfigError("ofdm: n_subcarriers must be a power of two");
    }
    if (p.n_symbols == 0) throw ConfigError("ofdm: n_symbols must be at least 1");
    if (!(p.guard_fraction >= 0.0 && p.guard_fraction < 0.5)) {
        throw ConfigError("ofdm: guard_fraction must lie in [0, 0.5)");
    }
    const double guard = p.guard_fraction * static_cast<double>(p.n_subcarriers);
    if (std::abs(guard - std::round(guard)) > 1e-9) {
        throw ConfigError("ofdm: guard_fraction * n_subcarriers must be an integer");
    }
    if (!(p.carrier_fc > 0.0 && p.carrier_fc < 0.25)) {
        throw ConfigError("ofdm: carrier_fc must lie in (0, 0.25)");
    }
    if (!(p.subcarrier_bw > 0.0)) throw ConfigError("ofdm: subcarrier_bw must be positive");
    if (!(p.carrier_fc + p.subcarrier_bw / 2.0 < 0.5)) {
        throw ConfigError("ofdm: carrier_fc + subcarrier_bw/2 must stay below 0.5 (aliasing)");
    }
    if (p.active_half_width() == 0 || 2 * p.active_half_width() >= p.n_subcarriers) {
        throw ConfigError("ofdm: subcarrier_bw leaves no loadable subcarrier pair for this n_subcarriers");
    }
}

SampleBuffer generate_ofdm(const OfdmParams& params, std::uint64_t seed) {
    validate(params);
    const std::size_t n = params.n_subcarriers;
    const std::size_t guard = guard_length(params);
    const std::size_t half = params.active_half_width();
    const double qpsk = 1.0 / std::numbers::sqrt2;

    std::mt19937_64 rng(seed);
    detail::FftPlan ifft(n, detail::FftPlan::Direction::kInverse);

    SampleBuffer out;
    out.samples.reserve(params.burst_length());
    for (std::size_t s = 0; s < params.n_symbols; ++s) {
        auto bins = ifft.in();
        std::fill(bins.begin(), bins.end(), std::complex<double>{});
        bins[0] = (rng() & 1U) ? 1.0 : -1.0;
        for (std::size_t k = 1; k <= half; ++k) {
            const auto bits = rng();
            const std::complex<double> sym{(bits & 1U) ? qpsk : -qpsk, (bits & 2U) ? qpsk : -qpsk};
            bins[k] = sym;
            bins[n - k] = std::conj(sym);
        }
        ifft.execute();
        const auto body = ifft.out();
        for (std::size_t i = n - guard; i < n; ++i) out.samples.push_back(body[i].real());
        for (std::size_t i = 0; i < n; ++i) out.samples.push_back(body[i].real());
    }

    const double w = 2.0 * std::numbers::pi * params.carrier_fc;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] *= std::cos(w * static_cast<double>(i));
    }
    const double scale = 1.0 / std::sqrt(mean_power(out));
    for (double& v : out.samples) v *= scale;
    return out;
}

SampleBuffer generate_tone(double f0, double amplitude, std::size_t length) {
    if (!(f0 > 0.0 && f0 < 0.5)) throw ConfigError("tone: f0 must lie in (0, 0.5)");
    SampleBuffer out;
    out.samples.resize(length);
    const double w = 2.0 * std::numbers::pi * f0;
    for (std::size_t i = 0; i < length; ++i) {
        out.samples[i] = amplitude * std::cos(w * static_cast<double>(i));
    }
    return out;
}

double noise_variance_for_snr(double snr_db) { return 1.0 / std::pow(10.0, snr_db / 10.0); }

SampleBuffer apply_awgn(const SampleBuffer& signal, double snr_db, std::uint64_t seed) {
    if (signal.samples.empty()) throw ArgumentError("apply_awgn: signal is empty");
    const double variance = mean_power(signal) * noise_variance_for_snr(snr_db);
    SampleBuffer out = signal;
    if (variance == 0.0) return out;
    const SampleBuffer noise = generate_noise({variance, seed}, signal.size());
    for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += noise.samples[i];
    return out;
}

SampleBuffer generate_noise(const NoiseSpec& spec, std::size_t length) {
    if (length == 0) throw ArgumentError("generate_noise: length must be at least 1");
    if (!(spec.variance >= 0.0) || !std::isfinite(spec.variance)) {
        throw ConfigError("noise: variance must be finite and >= 0");
    }
    SampleBuffer out;
    out.samples.assign(length, 0.0);
    if (spec.variance == 0.0) return out;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(spec.variance));
    for (double& v : out.samples) v = gauss(rng);
    return out;
}

}  // namespace cyclosense
