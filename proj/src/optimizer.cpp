#include "spinwire/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "spinwire/analytics.hpp"
#include "spinwire/channel.hpp"

namespace spinwire::opt {

namespace {

constexpr double kMaxGridStep = 0.05;

bool better(double f, double t, const std::vector<double>& x, double best_f, double best_t,
            const std::vector<double>& best_x) {
  if (f != best_f) return f > best_f;
  if (t != best_t) return t < best_t;
  return std::lexicographical_compare(x.begin(), x.end(), best_x.begin(), best_x.end());
}

}  // namespace

double objective_value(const BoundaryEntries& e, int n, const Objective& objective) {
  if (objective.kind == ObjectiveKind::direct) return direct_channel_fidelity(e, objective.p).fidelity;
  return optimal_average_fidelity(encoded_channel(e, n).d_matrix, e.t).fidelity;
}

Peak peak_fidelity(const BoundaryModes& bm, const Objective& objective, double t_lo, double t_hi) {
  if (!(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo < t_hi))
    throw std::invalid_argument("empty time window");
  const int steps = static_cast<int>(std::ceil((t_hi - t_lo) / kMaxGridStep)) + 1;
  const double dt = (t_hi - t_lo) / (steps - 1);
  const auto series = boundary_series_uniform(bm, t_lo, dt, steps);
  int best = 0;
  double best_f = -1.0;
  for (int i = 0; i < steps; ++i) {
    const double f = objective_value(series[i], bm.n, objective);
    if (f > best_f) {
      best_f = f;
      best = i;
    }
  }
  Peak peak{series[best].t, best_f};

  const double lo = series[std::max(best - 1, 0)].t;
  const double hi = series[std::min(best + 1, steps - 1)].t;
  auto negative = [&](double t) { return -objective_value(boundary_entries(bm, t), bm.n, objective); };
  std::uintmax_t iterations = 60;
  const auto [t_ref, f_ref] = boost::math::tools::brent_find_minima(negative, lo, hi, 40, iterations);
  if (-f_ref > peak.fidelity) peak = {t_ref, -f_ref};
  return peak;
}

Peak peak_fidelity(const ChainSpec& spec, const Objective& objective, double t_lo, double t_hi) {
  return peak_fidelity(boundary_modes(spec), objective, t_lo, t_hi);
}

ChainTemplate xx_multi_template(int n, int params) {
  if (params < 1 || params > 4) throw std::invalid_argument("xx_multi takes 1 to 4 couplings");
  ChainTemplate t;
  for (int k = 1; k <= params; ++k) t.names.push_back("j" + std::to_string(k));
  t.build = [n](std::span<const double> x) { return xx_multi_param(n, x); };
  return t;
}

ChainTemplate ising_template(int n, double gamma, double h) {
  return {{"j1", "h1"}, [=](std::span<const double> x) { return xy_minimal(n, x[0], x[1], gamma, h); }};
}

ChainTemplate fixed_template(ChainSpec spec) {
  return {{}, [spec = std::move(spec)](std::span<const double>) { return spec; }};
}

namespace {

class Search {
 public:
  Search(const ChainTemplate& family, const Objective& objective, const SearchWindow& window,
         int budget)
      : family_(family), objective_(objective), window_(window), budget_(budget) {}

  [[nodiscard]] bool exhausted() const { return evaluations_ >= budget_; }

  // Objective at x (clamped into the boxes).
  Peak evaluate(std::vector<double> x) {
    clamp(x);
    Peak peak{window_.t_lo, 0.0};
    try {
      peak = peak_fidelity(family_.build(x), objective_, window_.t_lo, window_.t_hi);
    } catch (const std::invalid_argument&) {
      peak.fidelity = 0.0;  // parameter combination outside the family's domain
    }
    ++evaluations_;
    if (!has_best_ || better(peak.fidelity, peak.t_star, x, best_.fidelity, best_.t_star, best_x_)) {
      best_ = peak;
      best_x_ = x;
      has_best_ = true;
    }
    trace_.push_back(best_.fidelity);
    return peak;
  }

  void clamp(std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], window_.boxes[i].lo, window_.boxes[i].hi);
  }

  double penalty(const std::vector<double>& x) const {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& b = window_.boxes[i];
      d += std::pow(std::max({0.0, b.lo - x[i], x[i] - b.hi}), 2);
    }
    return 1e3 * d;
  }

  // Nelder-Mead; returns true when the simplex converged before the budget ran out.
  bool simplex(const std::vector<double>& start, double relative_step) {
    const std::size_t d = start.size();
    gsl_set_error_handler_off();
    gsl_vector* x = gsl_vector_alloc(d);
    gsl_vector* step = gsl_vector_alloc(d);
    for (std::size_t i = 0; i < d; ++i) {
      gsl_vector_set(x, i, start[i]);
      gsl_vector_set(step, i, relative_step * (window_.boxes[i].hi - window_.boxes[i].lo));
    }
    gsl_multimin_function fn;
    fn.n = d;
    fn.params = this;
    fn.f = [](const gsl_vector* v, void* self) {
      auto* s = static_cast<Search*>(self);
      if (s->exhausted()) return 0.0;
      std::vector<double> p(v->size);
      for (std::size_t i = 0; i < v->size; ++i) p[i] = gsl_vector_get(v, i);
      return -s->evaluate(p).fidelity + s->penalty(p);
    };
    gsl_multimin_fminimizer* nm = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, d);
    bool converged = false;
    if (!exhausted()) {
      gsl_multimin_fminimizer_set(nm, &fn, x, step);
      while (!exhausted()) {
        if (gsl_multimin_fminimizer_iterate(nm) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm), 1e-5) == GSL_SUCCESS) {
          converged = true;
          break;
        }
      }
    }
    gsl_multimin_fminimizer_free(nm);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return converged;
  }

  const Peak& best() const { return best_; }
  const std::vector<double>& best_x() const { return best_x_; }
  int evaluations() const { return evaluations_; }
  std::vector<double>& trace() { return trace_; }

 private:
  const ChainTemplate& family_;
  const Objective& objective_;
  const SearchWindow& window_;
  int budget_;
  int evaluations_ = 0;
  bool has_best_ = false;
  Peak best_;
  std::vector<double> best_x_;
  std::vector<double> trace_;
};

std::vector<std::vector<double>> latin_hypercube(const std::vector<Box>& boxes, int samples,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> points(samples, std::vector<double>(boxes.size()));
  for (std::size_t dim = 0; dim < boxes.size(); ++dim) {
    std::vector<int> strata(samples);
    for (int i = 0; i < samples; ++i) strata[i] = i;
    std::shuffle(strata.begin(), strata.end(), rng);
    for (int i = 0; i < samples; ++i) {
      const double u = (strata[i] + unit(rng)) / samples;
      points[i][dim] = boxes[dim].lo + u * (boxes[dim].hi - boxes[dim].lo);
    }
  }
  return points;
}

// The encoded closed form only covers particle-conserving chains.
void require_supported(const ChainTemplate& family, const Objective& objective, const std::vector<Box>& boxes) {
  if (objective.kind != ObjectiveKind::encoded) return;
  std::vector<double> centre(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) centre[i] = 0.5 * (boxes[i].lo + boxes[i].hi);
  if (!family.build(centre).number_conserving())
    throw std::invalid_argument("encoded objective needs a particle-conserving family");
}

}  // namespace

OptimizationResult optimize(const ChainTemplate& family, const Objective& objective,
                            const SearchWindow& window, const OptimizeOptions& options) {
  const std::size_t d = family.names.size();
  if (!(window.t_lo < window.t_hi)) throw std::invalid_argument("empty time window");
  if (window.boxes.size() != d) throw std::invalid_argument("one box per free parameter required");
  for (const auto& b : window.boxes)
    if (!(b.lo < b.hi)) throw std::invalid_argument("degenerate parameter box");
  if (d > 4) throw std::invalid_argument("at most four free parameters");
  if (options.budget < 1) throw std::invalid_argument("budget must be positive");
  require_supported(family, objective, window.boxes);

  OptimizationResult result;
  result.names = family.names;
  result.objective = objective.tag();
  Search search(family, objective, window, options.budget);

  if (d == 0) {
    search.evaluate({});
  } else {
    if (!options.initial.empty()) {
      if (options.initial.size() != d) throw std::invalid_argument("seed has the wrong dimension");
      result.seed_fidelity = search.evaluate(options.initial).fidelity;
      result.has_seed = true;
    }
    const int coarse = options.coarse_samples > 0
                           ? options.coarse_samples
                           : std::clamp(options.budget / 4, 4, 16 * static_cast<int>(d));
    for (const auto& x : latin_hypercube(window.boxes, coarse, options.seed)) {
      if (search.exhausted()) break;
      search.evaluate(x);
    }
    result.best_coarse = search.best().fidelity;
    bool converged = search.simplex(search.best_x(), 0.1);
    if (converged) converged = search.simplex(search.best_x(), 0.02);
    result.budget_exhausted = !converged && search.exhausted();
  }
  result.values = search.best_x();
  result.t_star = search.best().t_star;
  result.fidelity = search.best().fidelity;
  result.evaluations = search.evaluations();
  result.trace = std::move(search.trace());
  if (d == 0) result.best_coarse = result.fidelity;
  return result;
}

ScanResult scan2d(const ChainTemplate& family, std::span<const double> p1, std::span<const double> p2,
                  const Objective& objective, double t_lo, double t_hi) {
  if (family.names.size() != 2) throw std::invalid_argument("scan2d needs a two-parameter family");
  if (!p1.empty() && !p2.empty())
    require_supported(family, objective, {{p1[0], p1[0]}, {p2[0], p2[0]}});
  ScanResult scan{{p1.begin(), p1.end()}, {p2.begin(), p2.end()},
                  Eigen::MatrixXd(p1.size(), p2.size()), Eigen::MatrixXd(p1.size(), p2.size())};
  for (std::size_t i = 0; i < p1.size(); ++i) {
    for (std::size_t j = 0; j < p2.size(); ++j) {
      const double x[] = {p1[i], p2[j]};
      const Peak peak = peak_fidelity(family.build(x), objective, t_lo, t_hi);
      scan.fidelity(i, j) = peak.fidelity;
      scan.t_star(i, j) = peak.t_star;
    }
  }
  return scan;
}

std::pair<double, double> ballistic_window(int n, double velocity) {
  if (!(velocity > 0)) throw std::invalid_argument("ballistic window needs a positive velocity");
  return {0.8 * (n + 1) / velocity, 1.4 * (n + 1) / velocity};
}

Seed seed_from_analytics(int n, SeedModel model, double h) {
  if (n < 3) throw std::invalid_argument("seeds need N >= 3");
  const double nn = n;
  Seed seed;
  switch (model) {
    case SeedModel::xx_1: seed.params = {std::pow(nn, -1.0 / 6)}; break;
    case SeedModel::xx_2: seed.params = {std::pow(nn, -1.0 / 3), std::pow(nn, -1.0 / 6)}; break;
    case SeedModel::xx_3:
      seed.params = {std::pow(nn, -1.0 / 3), std::pow(nn, -1.0 / 6), std::pow(nn, -1.0 / 12)};
      break;
    case SeedModel::ising: {
      const double j1 = 0.5;
      seed.params = {j1, analytics::ising_optimal_field(j1, h)};
      seed.velocity = analytics::ising_group_velocity(h);
      break;
    }
  }
  std::tie(seed.t_lo, seed.t_hi) = ballistic_window(n, seed.velocity);
  return seed;
}

}  // namespace spinwire::opt
