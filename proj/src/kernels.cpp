#include <atomic>

#include "kernels_internal.hpp"

namespace spinwire::kernels {

namespace {

// -1: automatic, otherwise an Isa value.
std::atomic<int> g_override{-1};

}  // namespace

void mode_sums_direct(const ModeSumTask& task, std::span<std::complex<double>> out) {
  detail::validate(task, out.size());
  const std::size_t modes = task.omega.size();
  for (int n = 0; n < task.steps; ++n) {
    const double t = task.t0 + n * task.dt;
    for (int m = 0; m < task.rows; ++m) {
      const double* w = task.weights.data() + m * modes;
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < modes; ++k) {
        const double phase = task.omega[k] * t;
        re += w[k] * std::cos(phase);
        im -= w[k] * std::sin(phase);
      }
      out[static_cast<std::size_t>(m) * task.steps + n] = {re, im};
    }
  }
}

bool avx2_compiled() {
#ifdef SPINWIRE_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

bool avx2_supported() {
#if defined(SPINWIRE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

void set_isa_override(std::optional<Isa> isa) {
  if (isa == Isa::avx2 && !avx2_supported())
    throw std::invalid_argument("AVX2 kernel not available on this build or CPU");
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void mode_sums(const ModeSumTask& task, std::span<std::complex<double>> out) {
  if (active_isa() == Isa::avx2)
    mode_sums_avx2(task, out);
  else
    mode_sums_scalar(task, out);
}

#ifndef SPINWIRE_HAVE_AVX2
void mode_sums_avx2(const ModeSumTask&, std::span<std::complex<double>>) {
  throw std::invalid_argument("AVX2 kernel not compiled into this build");
}
#endif

}  // namespace spinwire::kernels
