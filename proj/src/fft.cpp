#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace doppler::detail {
namespace {

// FFTW's planner is not re-entrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out, int sign) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(in.size()),
                             reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

}  // namespace

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> in, FftSign sign) {
  std::vector<std::complex<double>> work(in.begin(), in.end());
  std::vector<std::complex<double>> out(in.size());
  if (in.empty()) return out;
  Plan plan(work, out, sign == FftSign::Negative ? FFTW_FORWARD : FFTW_BACKWARD);
  plan.execute();
  return out;
}

std::size_t fast_fft_size(std::size_t n) {
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p5 = 1; p5 < best; p5 *= 5) {
    for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
      std::size_t m = p35;
      while (m < n) m *= 2;
      best = std::min(best, m);
    }
  }
  return best;
}

}  // namespace doppler::detail
