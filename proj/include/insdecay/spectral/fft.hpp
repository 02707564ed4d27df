#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace insdecay::detail {

/// Process-wide cache of in-place 2D complex FFTW plans, one pair per n.
///
/// Plans are created under a mutex (the FFTW planner is not thread-safe) with
/// FFTW_ESTIMATE, which makes the chosen algorithm, and therefore every
/// rounding error, identical from run to run. Execution through
/// fftw_execute_dft is re-entrant.
class FftPlanCache {
 public:
  struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
  };

  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  FftPlanCache(const FftPlanCache&) = delete;
  FftPlanCache& operator=(const FftPlanCache&) = delete;

  PlanPair plans(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n * n));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    plans_.emplace(n, p);
    return p;
  }

 private:
  FftPlanCache() = default;
  ~FftPlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

/// Unnormalized in-place forward transform, sum_x f(x) e^{-i k x}.
inline void fft_forward(std::span<std::complex<double>> data, int n) {
  auto p = FftPlanCache::instance().plans(n);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p.forward, ptr, ptr);
}

/// Unnormalized in-place backward transform, sum_k c(k) e^{+i k x}.
inline void fft_backward(std::span<std::complex<double>> data, int n) {
  auto p = FftPlanCache::instance().plans(n);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p.backward, ptr, ptr);
}

}  // namespace insdecay::detail
