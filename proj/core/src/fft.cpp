#include "fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <map>
#include <mutex>
#include <utility>

namespace fracnls::detail {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plans] : plans_) {
      fftw_destroy_plan(plans.first);
      fftw_destroy_plan(plans.second);
    }
  }

  fftw_plan get(std::size_t n, bool forward) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it == plans_.end()) {
      auto* a = fftw_alloc_complex(n);
      auto* b = fftw_alloc_complex(n);
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      const int len = static_cast<int>(n);
      fftw_plan fwd = fftw_plan_dft_1d(len, a, b, FFTW_FORWARD, flags);
      fftw_plan bwd = fftw_plan_dft_1d(len, a, b, FFTW_BACKWARD, flags);
      fftw_free(a);
      fftw_free(b);
      it = plans_.emplace(n, std::make_pair(fwd, bwd)).first;
    }
    return forward ? it->second.first : it->second.second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, std::pair<fftw_plan, fftw_plan>> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, bool forward) {
  assert(in.size() == out.size());
  assert(in.data() != out.data());
  fftw_plan plan = cache().get(in.size(), forward);
  // c2c out-of-place transforms leave the input untouched.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

}  // namespace

void dft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  run(in, out, true);
}

void dft_backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  run(in, out, false);
}

}  // namespace fracnls::detail
