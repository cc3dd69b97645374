#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinwire/chain_model.hpp"
#include "spinwire/dynamics.hpp"

namespace spinwire::opt {

enum class ObjectiveKind { direct, encoded };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::direct;
  double p = 1.0;  // bulk parity factor, direct objective only

  static Objective direct(double p = 1.0) { return {ObjectiveKind::direct, p}; }
  static Objective encoded() { return {ObjectiveKind::encoded, 1.0}; }
  [[nodiscard]] const char* tag() const { return kind == ObjectiveKind::direct ? "direct" : "encoded"; }
};

double objective_value(const BoundaryEntries& e, int n, const Objective& objective);

struct Box {
  double lo = 0.0;
  double hi = 0.0;
};

struct SearchWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::vector<Box> boxes;  // one per free parameter
};

struct Peak {
  double t_star = 0.0;
  double fidelity = 0.0;
};

// Maximum of F(t) on [t_lo, t_hi]: grid with spacing <= 0.05 (earliest grid maximum
// wins ties), then Brent's parabolic/golden refinement inside the neighbouring cells.
Peak peak_fidelity(const BoundaryModes& bm, const Objective& objective, double t_lo, double t_hi);
Peak peak_fidelity(const ChainSpec& spec, const Objective& objective, double t_lo, double t_hi);

// Parametric chain family.
struct ChainTemplate {
  std::vector<std::string> names;
  std::function<ChainSpec(std::span<const double>)> build;
};

ChainTemplate xx_multi_template(int n, int params);         // j1..jK
ChainTemplate ising_template(int n, double gamma, double h);  // j1, h1
ChainTemplate fixed_template(ChainSpec spec);                 // no free parameters

struct OptimizeOptions {
  int budget = 400;              // objective evaluations
  std::uint64_t seed = 0;        // Latin-hypercube stream
  int coarse_samples = 0;        // 0: chosen from the budget
  std::vector<double> initial;   // optional analytic seed, always evaluated first
};

struct OptimizationResult {
  std::vector<std::string> names;
  std::vector<double> values;
  double t_star = 0.0;
  double fidelity = 0.0;
  std::string objective;
  int evaluations = 0;
  std::vector<double> trace;  // best-so-far after each evaluation
  double best_coarse = 0.0;   // best value of the sweep (seed included)
  double seed_fidelity = 0.0; // value at the analytic seed, if one was given
  bool has_seed = false;
  bool budget_exhausted = false;
};

// Latin-hypercube sweep over the boxes, then Nelder-Mead from the best sample
// (restarted once at its own optimum). Deterministic for fixed inputs.
// The encoded objective is rejected for families with pairing terms.
OptimizationResult optimize(const ChainTemplate& family, const Objective& objective,
                            const SearchWindow& window, const OptimizeOptions& options = {});

struct ScanResult {
  std::vector<double> p1;
  std::vector<double> p2;
  Eigen::MatrixXd fidelity;  // (p1 index, p2 index)
  Eigen::MatrixXd t_star;
};

ScanResult scan2d(const ChainTemplate& family, std::span<const double> p1, std::span<const double> p2,
                  const Objective& objective, double t_lo, double t_hi);

enum class SeedModel { xx_1, xx_2, xx_3, ising };

struct Seed {
  std::vector<double> params;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double velocity = 1.0;
};

// Heuristic starting point and ballistic window [0.8, 1.4] (N+1)/v.
//   xx_1: N^{-1/6};  xx_2: (N^{-1/3}, N^{-1/6});  xx_3: (N^{-1/3}, N^{-1/6}, N^{-1/12});
//   ising: j1 = 0.5 and h1 from the optimal-field rule, v from the Ising dispersion.
Seed seed_from_analytics(int n, SeedModel model, double h = 1.5);
std::pair<double, double> ballistic_window(int n, double velocity);

}  // namespace spinwire::opt
