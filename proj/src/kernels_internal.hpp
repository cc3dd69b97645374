#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinwire/kernels.hpp"

namespace spinwire::kernels::detail {

inline void validate(const ModeSumTask& task, std::size_t out_size) {
  if (task.rows < 0 || task.steps < 0) throw std::invalid_argument("negative mode-sum extent");
  if (!std::isfinite(task.t0) || !std::isfinite(task.dt))
    throw std::invalid_argument("time grid must be finite");
  if (task.weights.size() != static_cast<std::size_t>(task.rows) * task.omega.size())
    throw std::invalid_argument("weights must hold rows x modes entries");
  if (out_size < static_cast<std::size_t>(task.rows) * static_cast<std::size_t>(task.steps))
    throw std::invalid_argument("output buffer too small");
}

// z_k = exp(-i omega_k t) for k < count; entries beyond stay as they are.
inline void seed_phasors(std::span<const double> omega, double t, double* re, double* im) {
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const double phase = omega[k] * t;
    re[k] = std::cos(phase);
    im[k] = -std::sin(phase);
  }
}

}  // namespace spinwire::kernels::detail
