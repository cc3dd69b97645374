#include "kernels_internal.hpp"

namespace spinwire::kernels {

void mode_sums_scalar(const ModeSumTask& task, std::span<std::complex<double>> out) {
  detail::validate(task, out.size());
  const std::size_t modes = task.omega.size();
  std::vector<double> z_re(modes), z_im(modes), step_re(modes), step_im(modes);
  detail::seed_phasors(task.omega, task.dt, step_re.data(), step_im.data());

  for (int n = 0; n < task.steps; ++n) {
    if (n % kReseedInterval == 0) {
      detail::seed_phasors(task.omega, task.t0 + n * task.dt, z_re.data(), z_im.data());
    } else {
      for (std::size_t k = 0; k < modes; ++k) {
        const double re = z_re[k] * step_re[k] - z_im[k] * step_im[k];
        z_im[k] = z_re[k] * step_im[k] + z_im[k] * step_re[k];
        z_re[k] = re;
      }
    }
    for (int m = 0; m < task.rows; ++m) {
      const double* w = task.weights.data() + m * modes;
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < modes; ++k) {
        re += w[k] * z_re[k];
        im += w[k] * z_im[k];
      }
      out[static_cast<std::size_t>(m) * task.steps + n] = {re, im};
    }
  }
}

}  // namespace spinwire::kernels
