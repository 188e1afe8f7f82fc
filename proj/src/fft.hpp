#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace cyclosense::detail {

/// Owns an out-of-place complex DFT plan and its aligned buffers.
/// Planned with FFTW_ESTIMATE so the same size always yields the same
/// plan and therefore bit-identical output.
class FftPlan {
public:
    enum class Direction { kForward, kInverse };

    FftPlan(std::size_t n, Direction dir);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::span<std::complex<double>> in() noexcept { return {in_, n_}; }
    std::span<const std::complex<double>> out() const noexcept { return {out_, n_}; }

    /// Unnormalized transform of in() into out().
    void execute() noexcept;

private:
    std::size_t n_;
    std::complex<double>* in_;
    std::complex<double>* out_;
    fftw_plan plan_;
};

}  // namespace cyclosense::detail
