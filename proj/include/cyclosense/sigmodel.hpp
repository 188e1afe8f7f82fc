#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cyclosense {

/// Real-valued sample sequence. All frequencies in the library are in
/// cycles/sample, so sample_rate_norm is 1 unless a caller resamples.
struct SampleBuffer {
    std::vector<double> samples;
    double sample_rate_norm = 1.0;

    std::size_t size() const noexcept { return samples.size(); }
};

/// Throws ArgumentError if the buffer is empty or holds a non-finite value.
void validate(const SampleBuffer& buf);

/// Mean of squares.
double mean_power(const SampleBuffer& buf);

struct OfdmParams {
    std::size_t n_subcarriers = 256;
    std::size_t n_symbols = 13;
    double guard_fraction = 0.25;
    double carrier_fc = 0.125;
    double subcarrier_bw = 0.11;

    /// Samples per symbol including the cyclic prefix.
    std::size_t symbol_length() const;
    std::size_t burst_length() const { return symbol_length() * n_symbols; }
    /// Highest loaded baseband subcarrier index; subcarriers -K..K carry data.
    std::size_t active_half_width() const;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const OfdmParams& params);

struct NoiseSpec {
    double variance = 1.0;
    std::uint64_t seed = 0;
};

/// Real passband OFDM burst with unit mean power.
///
/// Each symbol carries a Hermitian-symmetric load (QPSK on subcarriers
/// 1..K mirrored onto -K..-1, BPSK on DC) so the inverse DFT is real. The
/// cyclic prefix is the last guard_fraction*n_subcarriers samples of the
/// symbol. The baseband burst is mixed up by cos(2*pi*fc*n) and rescaled to
/// unit mean power.
SampleBuffer generate_ofdm(const OfdmParams& params, std::uint64_t seed);

/// samples[n] = amplitude * cos(2*pi*f0*n).
SampleBuffer generate_tone(double f0, double amplitude, std::size_t length);

/// Adds white Gaussian noise of variance P / 10^(snr_db/10), P being the
/// measured mean power of the input. A zero-power input has no defined SNR;
/// the noise variance falls back to 0 and the input is returned unchanged.
SampleBuffer apply_awgn(const SampleBuffer& signal, double snr_db, std::uint64_t seed);

/// i.i.d. zero-mean Gaussian samples.
SampleBuffer generate_noise(const NoiseSpec& spec, std::size_t length);

/// Noise variance that apply_awgn would use on a unit-power signal.
double noise_variance_for_snr(double snr_db);

}  // namespace cyclosense
