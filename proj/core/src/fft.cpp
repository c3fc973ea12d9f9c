#include "nodal/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace nodal {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<int, bool>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(int n, bool forward) {
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  auto key = std::make_pair(n, forward);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  // Planning needs scratch arrays; FFTW_ESTIMATE leaves them untouched.
  fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  c.plans.emplace(key, plan);
  return plan;
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, bool forward) {
  if (data.size() <= 1) return;
  fftw_plan plan = plan_for(static_cast<int>(data.size()), forward);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace nodal
