// Compiled with -mavx2 -mfma; only reached after the runtime CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace spinwire::kernels {

namespace {

double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

void mode_sums_avx2(const ModeSumTask& task, std::span<std::complex<double>> out) {
  detail::validate(task, out.size());
  const std::size_t modes = task.omega.size();
  const std::size_t padded = (modes + 3) / 4 * 4;

  // Zero-padded copies so every block is a full register.
  std::vector<double> z_re(padded, 0.0), z_im(padded, 0.0);
  std::vector<double> step_re(padded, 1.0), step_im(padded, 0.0);
  std::vector<double> w(static_cast<std::size_t>(task.rows) * padded, 0.0);
  for (int m = 0; m < task.rows; ++m)
    for (std::size_t k = 0; k < modes; ++k) w[m * padded + k] = task.weights[m * modes + k];
  detail::seed_phasors(task.omega, task.dt, step_re.data(), step_im.data());

  for (int n = 0; n < task.steps; ++n) {
    if (n % kReseedInterval == 0) {
      detail::seed_phasors(task.omega, task.t0 + n * task.dt, z_re.data(), z_im.data());
    } else {
      for (std::size_t k = 0; k < padded; k += 4) {
        const __m256d zr = _mm256_loadu_pd(&z_re[k]);
        const __m256d zi = _mm256_loadu_pd(&z_im[k]);
        const __m256d sr = _mm256_loadu_pd(&step_re[k]);
        const __m256d si = _mm256_loadu_pd(&step_im[k]);
        _mm256_storeu_pd(&z_re[k], _mm256_fmsub_pd(zr, sr, _mm256_mul_pd(zi, si)));
        _mm256_storeu_pd(&z_im[k], _mm256_fmadd_pd(zr, si, _mm256_mul_pd(zi, sr)));
      }
    }
    for (int m = 0; m < task.rows; ++m) {
      const double* wm = w.data() + m * padded;
      __m256d acc_re = _mm256_setzero_pd();
      __m256d acc_im = _mm256_setzero_pd();
      for (std::size_t k = 0; k < padded; k += 4) {
        const __m256d wk = _mm256_loadu_pd(wm + k);
        acc_re = _mm256_fmadd_pd(wk, _mm256_loadu_pd(&z_re[k]), acc_re);
        acc_im = _mm256_fmadd_pd(wk, _mm256_loadu_pd(&z_im[k]), acc_im);
      }
      out[static_cast<std::size_t>(m) * task.steps + n] = {horizontal_sum(acc_re),
                                                           horizontal_sum(acc_im)};
    }
  }
}

}  // namespace spinwire::kernels
