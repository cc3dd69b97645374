#pragma once

#include <complex>
#include <optional>
#include <span>

namespace spinwire::kernels {

// Batched mode sums on a uniform time grid:
//   out[m * steps + n] = sum_k weights[m * modes + k] * exp(-i omega_k (t0 + n dt))
// with modes = omega.size() and m < rows. Every boundary amplitude is a few such sums.
struct ModeSumTask {
  std::span<const double> omega;
  std::span<const double> weights;
  int rows = 0;
  double t0 = 0.0;
  double dt = 0.0;
  int steps = 0;
};

enum class Isa { scalar, avx2 };

// The phasor recurrence is re-seeded from exact cos/sin every this many steps.
inline constexpr int kReseedInterval = 32;

// Reference: one cos/sin per (mode, time).
void mode_sums_direct(const ModeSumTask& task, std::span<std::complex<double>> out);
// Phasor recurrence, plain loops.
void mode_sums_scalar(const ModeSumTask& task, std::span<std::complex<double>> out);
// Phasor recurrence, four modes per AVX2 register. Throws if the build or CPU lacks AVX2.
void mode_sums_avx2(const ModeSumTask& task, std::span<std::complex<double>> out);

bool avx2_compiled();
bool avx2_supported();  // compiled and the CPU reports AVX2 + FMA
Isa active_isa();
// Pins the dispatcher (std::nullopt restores automatic selection).
void set_isa_override(std::optional<Isa> isa);
const char* isa_name(Isa isa);

// Dispatches to the selected variant.
void mode_sums(const ModeSumTask& task, std::span<std::complex<double>> out);

}  // namespace spinwire::kernels
