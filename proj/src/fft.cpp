#include "fft.hpp"

#include <new>

namespace cyclosense::detail {

FftPlan::FftPlan(std::size_t n, Direction dir)
    : n_(n),
      in_(reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n))),
      out_(reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n))) {
    if (in_ == nullptr || out_ == nullptr) {
        fftw_free(in_);
        fftw_free(out_);
        throw std::bad_alloc();
    }
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in_),
                             reinterpret_cast<fftw_complex*>(out_),
                             dir == Direction::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
    for (std::size_t i = 0; i < n; ++i) in_[i] = 0.0;
}

FftPlan::~FftPlan() {
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
}

void FftPlan::execute() noexcept { fftw_execute(plan_); }

}  // namespace cyclosense::detail
