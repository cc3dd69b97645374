#include "spinwire/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinwire/channel.hpp"
#include "spinwire/chain_io.hpp"
#include "spinwire/dynamics.hpp"
#include "spinwire/ed_oracle.hpp"
#include "spinwire/optimizer.hpp"
#include "spinwire/quadratic_diag.hpp"

namespace spinwire::cli {

namespace {

using nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// JSON numbers carry the same 12 significant digits as the tables.
double round12(double x) { return std::isfinite(x) ? std::stod(fmt(x)) : x; }

struct ChainOptions {
  std::string spec_path;
  std::string preset;
  int n = 0;
  std::optional<double> j1, j2, j3, h1, gamma, h;
  int params = 0;
};

struct GridOptions {
  std::optional<double> t_min, t_max;
  double t_step = 0.05;
};

struct RunConfig {
  ChainOptions chain;
  GridOptions grid;
  std::optional<double> beta, p;
  std::string objective = "direct";
  int budget = 400;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;
  std::string scan_p1, scan_p2;
};

void add_chain_options(CLI::App* cmd, ChainOptions& c) {
  auto* spec = cmd->add_option("--spec", c.spec_path, "Chain spec JSON file");
  auto* preset = cmd->add_option("--preset", c.preset, "xx_minimal | xx_multi | xy_minimal | pst")
                     ->check(CLI::IsMember({"xx_minimal", "xx_multi", "xy_minimal", "pst"}));
  spec->excludes(preset);
  cmd->add_option("--n", c.n, "Chain length");
  cmd->add_option("--j1", c.j1);
  cmd->add_option("--j2", c.j2);
  cmd->add_option("--j3", c.j3);
  cmd->add_option("--h1", c.h1);
  cmd->add_option("--gamma", c.gamma);
  cmd->add_option("--h", c.h);
}

void add_grid_options(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--t-min", g.t_min);
  cmd->add_option("--t-max", g.t_max);
  cmd->add_option("--t-step", g.t_step);
}

void add_output_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", cfg.out_path, "Output file (default: stdout)");
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw InputError(std::string("missing --") + name);
  return *v;
}

std::vector<double> boundary_values(const ChainOptions& c) {
  std::vector<double> b;
  for (const auto* v : {&c.j1, &c.j2, &c.j3}) {
    if (!*v) break;
    b.push_back(**v);
  }
  return b;
}

ChainSpec resolve_chain(const ChainOptions& c) {
  if (!c.spec_path.empty()) return load_chain(c.spec_path);
  if (c.preset.empty()) throw InputError("give --spec or --preset");
  if (c.n < 1) throw InputError("--n must be positive");
  if (c.preset == "xx_minimal") return xx_minimal(c.n, need(c.j1, "j1"));
  if (c.preset == "xx_multi") {
    const auto b = boundary_values(c);
    if (b.empty()) throw InputError("xx_multi needs --j1 [--j2 [--j3]]");
    return xx_multi_param(c.n, b);
  }
  if (c.preset == "xy_minimal")
    return xy_minimal(c.n, need(c.j1, "j1"), need(c.h1, "h1"), need(c.gamma, "gamma"), need(c.h, "h"));
  return pst_chain(c.n);
}

std::vector<double> time_grid(const GridOptions& g) {
  const double lo = g.t_min.value_or(0.0);
  const double hi = g.t_max.value_or(lo);
  if (!(std::isfinite(lo) && std::isfinite(hi)) || hi < lo) throw InputError("bad time grid");
  if (!(g.t_step > 0)) throw InputError("--t-step must be positive");
  const auto count = static_cast<long>(std::floor((hi - lo) / g.t_step + 1e-9)) + 1;
  if (count > 10'000'000) throw InputError("time grid too large");
  std::vector<double> t(count);
  for (long i = 0; i < count; ++i) t[i] = lo + static_cast<double>(i) * g.t_step;
  return t;
}

double parity_factor(const RunConfig& cfg, const ChainSpec& spec) {
  if (cfg.p) {
    if (*cfg.p < 0 || *cfg.p > 1) throw InputError("--p must lie in [0, 1]");
    return *cfg.p;
  }
  if (cfg.beta) {
    if (spec.size() < 3) throw InputError("--beta needs N >= 3");
    return bus_thermal_parity(spec, *cfg.beta);
  }
  return 1.0;
}

opt::Objective objective_of(const RunConfig& cfg, const ChainSpec* spec) {
  if (cfg.objective == "encoded") return opt::Objective::encoded();
  return opt::Objective::direct(spec ? parity_factor(cfg, *spec) : cfg.p.value_or(1.0));
}

// Rows of a table, emitted as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        json obj;
        for (std::size_t i = 0; i < header.size(); ++i)
          obj[header[i]] = std::isfinite(r[i]) ? json(round12(r[i])) : json(nullptr);
        arr.push_back(obj);
      }
      os << arr.dump(2) << "\n";
      return;
    }
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
      os << "\n";
    }
  }
};

int cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
  const ChainSpec spec = resolve_chain(cfg.chain);
  const SpectralData sd = diagonalize(build_hopping(spec));
  Table table{{"k", "omega", "rho"}, {}};
  for (int k = 0; k < sd.size(); ++k)
    table.rows.push_back({static_cast<double>(k + 1), sd.omega(k), sd.phi(k, 0) * sd.phi(k, 0)});
  table.write(os, cfg.format);
  return kOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& os) {
  const ChainSpec spec = resolve_chain(cfg.chain);
  const auto grid = time_grid(cfg.grid);
  const double p = parity_factor(cfg, spec);
  const BoundaryModes bm = boundary_modes(spec);
  const auto series = boundary_series(bm, grid);
  Table table{{"t", "u1", "v1", "u2", "F_direct", "F_encoded"}, {}};
  for (const auto& e : series) {
    const auto a = moduli(e);
    const double f_encoded = spec.size() >= 4 && spec.number_conserving()
                                 ? optimal_average_fidelity(encoded_channel(e, spec.size()).d_matrix).fidelity
                                 : std::nan("");
    table.rows.push_back({e.t, a.u1, a.v1, a.u2, direct_channel_fidelity(e, p).fidelity, f_encoded});
  }
  table.write(os, cfg.format);
  return kOk;
}

struct Family {
  opt::ChainTemplate chain;
  std::vector<opt::Box> boxes;
  std::vector<double> seed;
  double velocity = 1.0;
};

Family family_of(const RunConfig& cfg) {
  const auto& c = cfg.chain;
  if (c.preset.empty()) throw InputError("optimize and scan need --preset");
  if (c.n < 3) throw InputError("--n must be at least 3");
  Family f;
  if (c.preset == "xx_minimal" || c.preset == "xx_multi") {
    int k = c.preset == "xx_minimal" ? 1 : (c.params > 0 ? c.params : 2);
    if (k > 3) throw InputError("--params must be 1, 2 or 3");
    f.chain = opt::xx_multi_template(c.n, k);
    f.boxes.assign(k, {0.02, 1.2});
    const opt::SeedModel model[] = {opt::SeedModel::xx_1, opt::SeedModel::xx_2, opt::SeedModel::xx_3};
    f.seed = opt::seed_from_analytics(c.n, model[k - 1]).params;
  } else if (c.preset == "xy_minimal") {
    const double h = need(c.h, "h");
    f.chain = opt::ising_template(c.n, c.gamma.value_or(1.0), h);
    f.boxes = {{0.02, 1.2}, {0.0, 2.0}};
    const auto s = opt::seed_from_analytics(c.n, opt::SeedModel::ising, h);
    f.seed = s.params;
    f.velocity = s.velocity;
  } else {
    f.chain = opt::fixed_template(pst_chain(c.n));
  }
  return f;
}

std::pair<double, double> window_of(const RunConfig& cfg, const Family& f) {
  auto [lo, hi] = f.chain.names.empty() ? std::pair{2.0, 4.0} : opt::ballistic_window(cfg.chain.n, f.velocity);
  if (cfg.grid.t_min) lo = *cfg.grid.t_min;
  if (cfg.grid.t_max) hi = *cfg.grid.t_max;
  if (!(lo < hi)) throw InputError("empty time window");
  return {lo, hi};
}

int cmd_optimize(const RunConfig& cfg, std::ostream& os) {
  const Family f = family_of(cfg);
  const auto [lo, hi] = window_of(cfg, f);
  if (cfg.budget < 1) throw InputError("--budget must be positive");
  opt::SearchWindow window{lo, hi, f.boxes};
  opt::OptimizeOptions options;
  options.budget = cfg.budget;
  options.seed = cfg.seed;
  options.initial = f.seed;
  const auto r = opt::optimize(f.chain, objective_of(cfg, nullptr), window, options);

  if (cfg.format == "json") {
    json params = json::object();
    for (std::size_t i = 0; i < r.names.size(); ++i) params[r.names[i]] = round12(r.values[i]);
    json trace = json::array();
    for (double v : r.trace) trace.push_back(round12(v));
    json record{{"parameters", params},     {"t_star", round12(r.t_star)},
                {"F", round12(r.fidelity)}, {"objective", r.objective},
                {"evaluations", r.evaluations}, {"budget_exhausted", r.budget_exhausted},
                {"window", {round12(lo), round12(hi)}}, {"trace", trace}};
    os << record.dump(2) << "\n";
  } else {
    os << "key,value\n";
    for (std::size_t i = 0; i < r.names.size(); ++i) os << r.names[i] << "," << fmt(r.values[i]) << "\n";
    os << "t_star," << fmt(r.t_star) << "\nF," << fmt(r.fidelity) << "\nobjective," << r.objective
       << "\nevaluations," << r.evaluations << "\n";
  }
  const bool no_gain = r.has_seed && !(r.fidelity > r.seed_fidelity);
  return r.budget_exhausted && no_gain ? kBudgetWarning : kOk;
}

std::vector<double> parse_range(const std::string& text, const char* flag) {
  // lo:hi:count
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
    throw InputError(std::string(flag) + " expects lo:hi:count");
  double lo = 0, hi = 0;
  int count = 0;
  try {
    lo = std::stod(a);
    hi = std::stod(b);
    count = std::stoi(c);
  } catch (const std::exception&) {
    throw InputError(std::string(flag) + " expects lo:hi:count");
  }
  if (count < 1 || !(std::isfinite(lo) && std::isfinite(hi)) || (count > 1 && !(hi > lo)))
    throw InputError(std::string("degenerate range for ") + flag);
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

int cmd_scan(const RunConfig& cfg, std::ostream& os) {
  Family f = family_of(cfg);
  if (cfg.chain.preset == "xx_multi") {
    f.chain = opt::xx_multi_template(cfg.chain.n, 2);
  }
  if (f.chain.names.size() != 2) throw InputError("scan needs a two-parameter preset (xx_multi or xy_minimal)");
  const auto p1 = parse_range(cfg.scan_p1, "--p1");
  const auto p2 = parse_range(cfg.scan_p2, "--p2");
  const auto [lo, hi] = window_of(cfg, f);
  const auto scan = opt::scan2d(f.chain, p1, p2, objective_of(cfg, nullptr), lo, hi);
  Table table{{"p1", "p2", "t_star", "F"}, {}};
  for (std::size_t i = 0; i < p1.size(); ++i)
    for (std::size_t j = 0; j < p2.size(); ++j)
      table.rows.push_back({p1[i], p2[j], scan.t_star(i, j), scan.fidelity(i, j)});
  table.write(os, cfg.format);
  return kOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& os) {
  const ChainSpec spec = resolve_chain(cfg.chain);
  const int n = spec.size();
  if (n > ed::kMaxSites) throw InputError("oracle is capped at N = 10");
  if (n < 2) throw InputError("oracle needs N >= 2");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> when(0.0, 2.0 * n);
  std::vector<double> times(5);
  for (double& t : times) t = when(rng);

  const SpectralData sd = diagonalize(build_hopping(spec));
  const BoundaryModes bm = boundary_modes(sd);
  const ed::Evolver ev(spec);
  json checks = json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, double deviation, double tol) {
    const bool pass = deviation <= tol;
    all_pass = all_pass && pass;
    checks.push_back({{"check", name}, {"max_deviation", round12(deviation)}, {"tolerance", tol}, {"pass", pass}});
  };

  if (spec.number_conserving()) {
    double vacuum = 0.0;
    for (double hn : spec.h) vacuum -= 0.5 * hn;
    const auto vac = ed::basis_state(n, 0);
    double dev = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t = when(rng);
      const auto amp = ed::single_excitation_amplitude(spec, t) * std::polar(1.0, vacuum * t);
      dev = std::max(dev, std::abs(amp - boundary_entries(bm, t).u_n1));
    }
    record("propagator", dev, 1e-10);
  }

  const auto vacuum_bulk = ed::density(ed::basis_state(n - 1, 0));
  double dev = 0.0;
  for (double t : times) {
    const auto ch = ed::channel_tomography(ev, vacuum_bulk, t);
    dev = std::max(dev, std::abs(optimal_average_fidelity(ch.d_matrix).fidelity -
                                 direct_channel_fidelity(boundary_entries(bm, t), 1.0).fidelity));
  }
  record("direct_tomography", dev, 1e-9);

  if (n >= 4 && spec.number_conserving()) {
    const auto bulk = ed::maximally_mixed(n - 2);
    double d_dev = 0.0;
    for (double t : times) {
      const auto ch = ed::encoded_protocol_tomography(ev, bulk, t);
      const auto model = encoded_channel(boundary_entries(bm, t), n);
      d_dev = std::max(d_dev, (ch.d_matrix - model.d_matrix).cwiseAbs().maxCoeff());
      d_dev = std::max(d_dev, ch.d_vector.cwiseAbs().maxCoeff());
    }
    record("encoded_channel", d_dev, 1e-8);
  }

  {
    const auto psi = ed::random_pure_state(n, rng);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i + 1;
    const auto p0 = ed::parity_expectation(psi, all);
    double p_dev = 0.0;
    for (double t : times) p_dev = std::max(p_dev, std::abs(ed::parity_expectation(ev.evolve(psi, t), all) - p0));
    record("parity", p_dev, 1e-12);
  }

  // Bulk in an equal superposition of parities: the direct protocol stays classical.
  double f_max = 0.0;
  {
    ed::PureState mixed_parity = ed::basis_state(n - 1, 0);
    mixed_parity.amp(std::size_t{1} << (n - 2)) = 1.0;
    mixed_parity.amp /= std::sqrt(2.0);
    const auto bulk = ed::density(mixed_parity);
    for (double t : times)
      f_max = std::max(f_max, optimal_average_fidelity(ed::channel_tomography(ev, bulk, t).d_matrix).fidelity);
  }

  json report{{"n", n},
              {"checks", checks},
              {"mixed_parity_bulk", {{"max_F_direct", round12(f_max)}, {"at_most_classical", f_max <= 2.0 / 3.0 + 1e-9}}},
              {"pass", all_pass}};
  if (cfg.format == "csv") {
    os << "check,max_deviation,tolerance,pass\n";
    for (const auto& c : checks)
      os << c["check"].get<std::string>() << "," << fmt(c["max_deviation"].get<double>()) << ","
         << fmt(c["tolerance"].get<double>()) << "," << (c["pass"].get<bool>() ? 1 : 0) << "\n";
  } else {
    os << report.dump(2) << "\n";
  }
  return all_pass ? kOk : kToleranceFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-chain state transfer toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* spectrum = app.add_subcommand("spectrum", "Mode energies and wave-packet density");
  auto* evolve = app.add_subcommand("evolve", "Boundary amplitudes and fidelities over a time grid");
  auto* optimize = app.add_subcommand("optimize", "Optimise boundary parameters");
  auto* scan = app.add_subcommand("scan", "Two-parameter fidelity scan");
  auto* oracle = app.add_subcommand("oracle", "Reconcile against exact diagonalization (N <= 10)");

  for (auto* cmd : {spectrum, evolve, optimize, scan, oracle}) {
    cmd->set_help_flag("--help", "Print this help message and exit");  // --h is the bulk field
    add_chain_options(cmd, cfg.chain);
    add_output_options(cmd, cfg);
  }
  for (auto* cmd : {evolve, optimize, scan}) add_grid_options(cmd, cfg.grid);
  for (auto* cmd : {evolve, optimize, scan}) {
    auto* beta = cmd->add_option("--beta", cfg.beta, "Bus inverse temperature");
    auto* p = cmd->add_option("--p", cfg.p, "Bus parity factor");
    beta->excludes(p);
  }
  for (auto* cmd : {optimize, scan}) {
    cmd->add_option("--objective", cfg.objective)->check(CLI::IsMember({"direct", "encoded"}));
    cmd->add_option("--budget", cfg.budget);
    cmd->add_option("--params", cfg.chain.params, "Free couplings for xx_multi");
  }
  for (auto* cmd : {optimize, scan, oracle}) cmd->add_option("--seed", cfg.seed);
  scan->add_option("--p1", cfg.scan_p1, "lo:hi:count")->required();
  scan->add_option("--p2", cfg.scan_p2, "lo:hi:count")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    std::ostringstream buffer;
    int code = kOk;
    if (*spectrum) code = cmd_spectrum(cfg, buffer);
    else if (*evolve) code = cmd_evolve(cfg, buffer);
    else if (*optimize) code = cmd_optimize(cfg, buffer);
    else if (*scan) code = cmd_scan(cfg, buffer);
    else code = cmd_oracle(cfg, buffer);
    if (cfg.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(cfg.out_path);
      if (!file) throw InputError("cannot write " + cfg.out_path);
      file << buffer.str();
    }
    return code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace spinwire::cli
