#include "wqed/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "wqed/dynamics.hpp"
#include "wqed/effective_theory.hpp"
#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"
#include "wqed/observables.hpp"
#include "wqed/optimize.hpp"
#include "wqed/pulse.hpp"

#ifndef WQED_VERSION
#define WQED_VERSION "0.0.0"
#endif

namespace wqed {

using nlohmann::json;

std::string library_version() { return WQED_VERSION; }

namespace {

const std::vector<std::pair<ScenarioKind, const char*>> kKindNames = {
    {ScenarioKind::Spectrum, "spectrum"},     {ScenarioKind::G2Map, "g2map"},
    {ScenarioKind::PulseSwitch, "pulse-switch"}, {ScenarioKind::Decay, "decay"},
    {ScenarioKind::DephasingSweep, "dephasing-sweep"}, {ScenarioKind::OptimizeT0, "optimize-t0"},
    {ScenarioKind::Scaling, "scaling"}};

const char* model_name(ModelSelector m) {
  switch (m) {
    case ModelSelector::Spin: return "spin";
    case ModelSelector::TransferMatrix: return "tm";
    case ModelSelector::Both: return "both";
  }
  return "?";
}

const char* gate_name(GateSpecKind g) {
  switch (g) {
    case GateSpecKind::None: return "none";
    case GateSpecKind::Ancilla: return "ancilla";
    case GateSpecKind::Subradiant: return "subradiant";
    case GateSpecKind::SingleSite: return "single_site";
  }
  return "?";
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ValidationError("unknown key '" + k + "' in " + where);
}

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_null()) return fallback;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    if (s == "nan" || s == "auto") return std::numeric_limits<double>::quiet_NaN();
  }
  if (!v.is_number()) throw ValidationError("'" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError("'" + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> read_axis(const json& v, const std::string& name) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw ValidationError("axis '" + name + "' holds a non-number");
      out.push_back(x.get<double>());
    }
  } else if (v.is_object()) {
    check_keys(v, {"start", "stop", "num", "log"}, "axis '" + name + "'");
    if (!v.contains("start") || !v.contains("stop") || !v.contains("num"))
      throw ValidationError("axis '" + name + "' needs start, stop and num");
    const double a = v.at("start").get<double>(), b = v.at("stop").get<double>();
    const int n = v.at("num").get<int>();
    const bool lg = v.value("log", false);
    if (n < 1) throw ValidationError("axis '" + name + "' needs num >= 1");
    if (lg && !(a > 0.0 && b > 0.0)) throw ValidationError("log axis '" + name + "' needs positive ends");
    for (int i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : double(i) / (n - 1);
      out.push_back(lg ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a));
    }
  } else {
    throw ValidationError("axis '" + name + "' must be a list or {start, stop, num}");
  }
  return out;
}

json number_or_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

// FNV-1a over the canonical config text.
std::string hash_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v) { return format_number(v); }

}  // namespace

ScenarioKind parse_scenario_kind(const std::string& s) {
  for (const auto& [k, n] : kKindNames)
    if (s == n) return k;
  throw ValidationError("unknown scenario kind '" + s + "'");
}

std::string to_string(ScenarioKind k) {
  for (const auto& [kk, n] : kKindNames)
    if (kk == k) return n;
  return "?";
}

const std::vector<double>& ScenarioConfig::axis(const std::string& name) const {
  const auto it = axes.find(name);
  if (it == axes.end()) throw ValidationError("scenario needs the sweep axis '" + name + "'");
  return it->second;
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, {"scenario", "params", "drive", "sweep", "gate", "model", "output", "threads", "budget", "numerics"},
             "config");
  ScenarioConfig c;
  if (!j.contains("scenario")) throw ValidationError("config needs 'scenario'");
  c.kind = parse_scenario_kind(j.at("scenario").get<std::string>());

  if (j.contains("params")) {
    const json& p = j.at("params");
    check_keys(p, {"n_atoms", "gamma_1d", "gamma_prime", "coupling_j", "rabi", "delta_c", "kappa", "ka", "range_l",
                   "gamma_deph", "decoupled"},
               "params");
    PhysicalParams& q = c.params;
    q.n_atoms = get_int(p, "n_atoms", q.n_atoms);
    q.gamma_1d = get_number(p, "gamma_1d", q.gamma_1d);
    q.gamma_prime = get_number(p, "gamma_prime", q.gamma_prime);
    q.coupling_j = get_number(p, "coupling_j", q.coupling_j);
    q.rabi = get_number(p, "rabi", q.rabi);
    q.delta_c = get_number(p, "delta_c", q.delta_c);
    q.kappa = get_number(p, "kappa", q.kappa);
    q.ka = get_number(p, "ka", q.ka);
    q.range_l = get_number(p, "range_l", q.range_l);
    q.gamma_deph = get_number(p, "gamma_deph", q.gamma_deph);
    if (p.contains("decoupled")) q.decoupled = p.at("decoupled").get<std::vector<int>>();
  }
  if (j.contains("drive")) {
    const json& d = j.at("drive");
    check_keys(d, {"kind", "amplitude", "detuning", "pulse_width"}, "drive");
    const std::string kind = d.value("kind", std::string("cw"));
    if (kind == "cw") c.drive.kind = DriveKind::Cw;
    else if (kind == "sin2-pulse") c.drive.kind = DriveKind::Sin2Pulse;
    else throw ValidationError("drive kind must be cw or sin2-pulse");
    c.drive.amplitude = get_number(d, "amplitude", c.drive.amplitude);
    c.drive.detuning = get_number(d, "detuning", c.drive.detuning);
    c.drive.pulse_width = get_number(d, "pulse_width", c.drive.pulse_width);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, {"delta", "coupling_j", "gamma", "n_atoms", "t0", "gamma_1d"}, "sweep");
    for (const auto& [k, v] : s.items()) c.axes[k] = read_axis(v, k);
  }
  if (j.contains("gate")) {
    const json& g = j.at("gate");
    check_keys(g, {"kind", "branch", "site"}, "gate");
    const std::string kind = g.value("kind", std::string("none"));
    if (kind == "none") c.gate.kind = GateSpecKind::None;
    else if (kind == "ancilla") c.gate.kind = GateSpecKind::Ancilla;
    else if (kind == "subradiant") c.gate.kind = GateSpecKind::Subradiant;
    else if (kind == "single_site") c.gate.kind = GateSpecKind::SingleSite;
    else throw ValidationError("gate kind must be none, ancilla, subradiant or single_site");
    const std::string br = g.value("branch", std::string("s"));
    if (br == "s") c.gate.branch = Branch::S;
    else if (br == "e") c.gate.branch = Branch::E;
    else throw ValidationError("gate branch must be e or s");
    c.gate.site = get_int(g, "site", 1);
  }
  if (j.contains("model")) {
    const std::string m = j.at("model").get<std::string>();
    if (m == "spin" || m == "spin-model") c.model = ModelSelector::Spin;
    else if (m == "tm" || m == "transfer-matrix") c.model = ModelSelector::TransferMatrix;
    else if (m == "both") c.model = ModelSelector::Both;
    else throw ValidationError("model must be spin, tm or both");
  }
  if (j.contains("output")) c.output = j.at("output").get<std::string>();
  c.threads = get_int(j, "threads", c.threads);
  c.budget = get_number(j, "budget", c.budget);
  if (j.contains("numerics")) {
    const json& n = j.at("numerics");
    check_keys(n, {"dt", "t_end", "tail", "record_stride", "t0_bounds", "contour_grid", "popmap_limit", "solver_tol",
                   "fit_threshold"},
               "numerics");
    NumericsSpec& s = c.numerics;
    s.dt = get_number(n, "dt", s.dt);
    s.t_end = get_number(n, "t_end", s.t_end);
    s.tail = get_number(n, "tail", s.tail);
    s.record_stride = get_int(n, "record_stride", s.record_stride);
    if (n.contains("t0_bounds")) {
      const auto b = n.at("t0_bounds").get<std::vector<double>>();
      if (b.size() != 2) throw ValidationError("t0_bounds must be [t_min, t_max]");
      s.t0_min = b[0];
      s.t0_max = b[1];
    }
    s.contour_grid = get_int(n, "contour_grid", s.contour_grid);
    s.popmap_limit = get_int(n, "popmap_limit", s.popmap_limit);
    s.solver_tol = get_number(n, "solver_tol", s.solver_tol);
    s.fit_threshold = get_number(n, "fit_threshold", s.fit_threshold);
  }
  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open config '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path + "': " + e.what());
  }
}

json to_json(const ScenarioConfig& c) {
  const PhysicalParams& p = c.params;
  json j;
  j["scenario"] = to_string(c.kind);
  j["params"] = {{"n_atoms", p.n_atoms},         {"gamma_1d", p.gamma_1d}, {"gamma_prime", p.gamma_prime},
                 {"coupling_j", p.coupling_j},   {"rabi", p.rabi},         {"delta_c", p.delta_c},
                 {"kappa", p.kappa},             {"ka", number_or_string(p.ka)},
                 {"range_l", number_or_string(p.range_l)}, {"gamma_deph", p.gamma_deph},
                 {"decoupled", p.decoupled}};
  j["drive"] = {{"kind", c.drive.kind == DriveKind::Cw ? "cw" : "sin2-pulse"},
                {"amplitude", c.drive.amplitude},
                {"detuning", c.drive.detuning},
                {"pulse_width", c.drive.pulse_width}};
  j["sweep"] = json::object();
  for (const auto& [k, v] : c.axes) j["sweep"][k] = v;
  j["gate"] = {{"kind", gate_name(c.gate.kind)},
               {"branch", c.gate.branch == Branch::S ? "s" : "e"},
               {"site", c.gate.site}};
  j["model"] = model_name(c.model);
  j["output"] = c.output;
  j["threads"] = c.threads;
  j["budget"] = c.budget;
  const NumericsSpec& n = c.numerics;
  j["numerics"] = {{"dt", n.dt},
                   {"t_end", n.t_end},
                   {"tail", n.tail},
                   {"record_stride", n.record_stride},
                   {"t0_bounds", {n.t0_min, n.t0_max}},
                   {"contour_grid", n.contour_grid},
                   {"popmap_limit", n.popmap_limit},
                   {"solver_tol", n.solver_tol},
                   {"fit_threshold", n.fit_threshold}};
  return j;
}

void validate_config(const ScenarioConfig& c) {
  const ParamReport rep = validate_params(c.params);
  if (!rep.ok()) throw ValidationError("invalid params: " + rep.violations.front());
  for (const auto& [name, v] : c.axes) {
    if (v.empty()) throw ValidationError("sweep axis '" + name + "' is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) throw ValidationError("sweep axis '" + name + "' holds a non-finite value");
      if (i > 0 && !(v[i] > v[i - 1])) throw ValidationError("sweep axis '" + name + "' is not strictly increasing");
    }
  }
  if (c.threads < 1) throw ValidationError("threads must be >= 1");
  if (!(c.budget > 0.0)) throw ValidationError("budget must be positive");
  if (c.output.empty()) throw ValidationError("output prefix is empty");
  const NumericsSpec& n = c.numerics;
  if (n.dt < 0.0 || n.t_end < 0.0 || n.tail < 0.0) throw ValidationError("numerics dt, t_end, tail must be >= 0");
  if (n.record_stride < 1) throw ValidationError("record_stride must be >= 1");
  if (n.contour_grid < 1) throw ValidationError("contour_grid must be >= 1");
  if (!(n.solver_tol > 0.0)) throw ValidationError("solver_tol must be positive");

  auto allow_axes = [&](std::set<std::string> ok) {
    for (const auto& [name, v] : c.axes)
      if (!ok.count(name))
        throw ValidationError("sweep axis '" + name + "' is not used by scenario " + to_string(c.kind));
  };
  auto need_axis = [&](const std::string& name) {
    if (!c.has_axis(name)) throw ValidationError("scenario " + to_string(c.kind) + " needs the sweep axis '" + name + "'");
  };
  auto allow_models = [&](std::set<ModelSelector> ok) {
    if (!ok.count(c.model))
      throw ValidationError(std::string("model '") + model_name(c.model) + "' is not valid for scenario " +
                            to_string(c.kind));
  };
  auto allow_gates = [&](std::set<GateSpecKind> ok) {
    if (!ok.count(c.gate.kind))
      throw ValidationError(std::string("gate '") + gate_name(c.gate.kind) + "' is not valid for scenario " +
                            to_string(c.kind));
  };
  const bool chain_gate = c.gate.kind == GateSpecKind::Subradiant || c.gate.kind == GateSpecKind::SingleSite;
  switch (c.kind) {
    case ScenarioKind::Spectrum:
      allow_axes({"delta"});
      need_axis("delta");
      allow_gates({GateSpecKind::None, GateSpecKind::Ancilla});
      break;
    case ScenarioKind::G2Map:
      allow_axes({"delta", "coupling_j"});
      need_axis("delta");
      allow_models({ModelSelector::Spin, ModelSelector::Both});
      allow_gates({GateSpecKind::None, GateSpecKind::Ancilla});
      break;
    case ScenarioKind::PulseSwitch:
      allow_axes({"t0"});
      allow_models({ModelSelector::Spin});
      if (!chain_gate) throw ValidationError("pulse-switch needs a subradiant or single_site gate");
      break;
    case ScenarioKind::OptimizeT0:
      allow_axes({});
      allow_models({ModelSelector::Spin});
      if (!chain_gate) throw ValidationError("optimize-t0 needs a subradiant or single_site gate");
      if (!(n.t0_min > 0.0) || !(n.t0_max > n.t0_min)) throw ValidationError("t0_bounds need 0 < t_min < t_max");
      break;
    case ScenarioKind::Decay:
      allow_axes({"gamma_1d"});
      allow_models({ModelSelector::Spin});
      if (!chain_gate) throw ValidationError("decay needs a subradiant or single_site gate");
      break;
    case ScenarioKind::DephasingSweep:
      allow_axes({"gamma", "delta"});
      need_axis("gamma");
      need_axis("delta");
      allow_models({ModelSelector::TransferMatrix});
      allow_gates({GateSpecKind::None});
      if (c.params.coupling_j != 0.0) throw ValidationError("dephasing-sweep is defined for coupling_j = 0");
      break;
    case ScenarioKind::Scaling:
      allow_axes({"n_atoms", "gamma"});
      need_axis("n_atoms");
      allow_models({ModelSelector::Spin});
      allow_gates({GateSpecKind::None, GateSpecKind::Subradiant});
      if (c.axis("n_atoms").size() < 3) throw ValidationError("scaling needs at least 3 values of n_atoms");
      break;
  }
  for (const char* name : {"gamma", "t0", "gamma_1d", "n_atoms"})
    if (c.has_axis(name) && c.axis(name).front() < 0.0)
      throw ValidationError(std::string("sweep axis '") + name + "' must be non-negative");
  if (c.has_axis("t0") && !(c.axis("t0").front() > 0.0)) throw ValidationError("pulse widths must be positive");
  if (c.has_axis("n_atoms"))
    for (double v : c.axis("n_atoms"))
      if (v < 1.0 || v != std::floor(v)) throw ValidationError("n_atoms axis must hold positive integers");
}

json OutputManifest::to_json() const {
  json j;
  j["run_id"] = run_id;
  j["version"] = version;
  j["wall_clock_s"] = wall_clock_s;
  j["config"] = config;
  j["files"] = json::array();
  for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"columns", f.columns}, {"rows", f.rows}});
  j["warnings"] = warnings;
  j["summary"] = summary;
  return j;
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("WQED_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ValidationError("WQED_THREADS must be a positive integer");
    return int(v);
  }
  return std::max(1, requested);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn,
                  const std::function<std::string(std::size_t)>& label) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nw = std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(n, 1));
  if (nw <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    const std::string ctx = label(i) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const BudgetError& e) {
      throw BudgetError(ctx + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(ctx + e.what());
    } catch (const NumericError& e) {
      throw NumericError(ctx + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(ctx + e.what());
    }
  }
}

void check_budget(double cost, double budget, const std::string& what) {
  if (cost > budget) {
    std::ostringstream os;
    os << what << ": projected cost " << cost << " (dimension x steps x N) exceeds the budget " << budget
       << "; raise --budget to run it";
    throw BudgetError(os.str());
  }
}

namespace {

struct Ctx {
  const ScenarioConfig& cfg;
  OutputManifest& man;
  int threads;

  void emit(const std::string& name, Table t) {
    const std::string path = cfg.output + "_" + name + ".csv";
    write_table(path, t);
    man.files.push_back({path, t.columns, t.rows.size()});
    man.tables.emplace(name, std::move(t));
  }
  SolverOptions solver() const {
    SolverOptions s;
    s.rel_tol = cfg.numerics.solver_tol;
    return s;
  }
};

void add_param_meta(Table& t, const PhysicalParams& p) {
  t.add_meta("n_atoms", double(p.n_atoms));
  t.add_meta("gamma_1d", p.gamma_1d);
  t.add_meta("gamma_prime", p.gamma_prime);
  t.add_meta("delta_c", p.delta_c);
  t.add_meta("rabi", p.rabi);
  t.add_meta("coupling_j", p.coupling_j);
  t.add_meta("kappa", p.kappa);
  t.add_meta("ka", p.phase());
  t.add_meta("range_l", p.range_l);
  t.add_meta("gamma_deph", p.gamma_deph);
}

double default_amplitude(const DriveSpec& d, double fallback) { return d.amplitude > 0.0 ? d.amplitude : fallback; }

// Linear spin-model coefficients at one detuning.
std::pair<double, double> spin_linear_point(const PhysicalParams& p, double delta, double amp, const SolverOptions& so) {
  auto basis = std::make_shared<const BasisIndex>(p.n_atoms, 1);
  Hamiltonian h(p, DriveSpec{DriveKind::Cw, amp, delta, 1.0}, basis);
  WeakDriveOptions o;
  o.order = 1;
  o.solver = so;
  const SteadyState ss = steady_state_weak_drive(h, o);
  const double e2 = amp * amp;
  return {intensity(ss.psi, {Direction::Backward, 0.0}, p, *basis, false) / e2,
          intensity(ss.psi, {Direction::Forward, amp}, p, *basis, false) / e2};
}

// Chain plus a lossless, undriven gate atom N+1 held in its dressed level.
PhysicalParams with_gate_atom(const PhysicalParams& p) {
  if (p.n_atoms % 2 != 0) throw ValidationError("ancilla gate needs an even number of chain atoms");
  if (std::isfinite(p.range_l)) throw ValidationError("ancilla gate needs range_l = inf");
  PhysicalParams q = p;
  q.n_atoms = p.n_atoms + 1;
  q.decoupled.push_back(q.n_atoms);
  return q;
}

std::pair<double, double> spin_ancilla_point(const PhysicalParams& p, Branch branch, double delta, double amp,
                                             const SolverOptions& so) {
  const PhysicalParams q = with_gate_atom(p);
  auto basis = std::make_shared<const BasisIndex>(q.n_atoms, 2);
  Hamiltonian h(q, DriveSpec{DriveKind::Cw, amp, delta, 1.0}, basis);
  const Eigen::Matrix2cd loc = h.local_single(q.n_atoms);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(loc);
  const int lvl = branch == Branch::S ? 1 : 0;
  const int pick = std::abs(es.eigenvectors()(lvl, 0)) >= std::abs(es.eigenvectors()(lvl, 1)) ? 0 : 1;
  CVector vac = CVector::Zero(basis->n_singles());
  vac(basis->single(q.n_atoms, Level::E) - 1) = es.eigenvectors()(0, pick);
  vac(basis->single(q.n_atoms, Level::S) - 1) = es.eigenvectors()(1, pick);
  vac.normalize();
  WeakDriveOptions o;
  o.order = 2;
  o.solver = so;
  o.vacuum = vac;
  o.vacuum_energy = es.eigenvalues()(pick);
  const SteadyState ss = steady_state_weak_drive(h, o);
  const double e2 = amp * amp;
  return {intensity(ss.psi, {Direction::Backward, 0.0}, q, *basis, false) / e2,
          intensity(ss.psi, {Direction::Forward, amp}, q, *basis, false) / e2};
}

std::pair<CellFactory, int> tm_chain(const PhysicalParams& p, const GateSpec& g) {
  if (g.kind == GateSpecKind::Ancilla) {
    if (p.n_atoms % 2 != 0) throw ValidationError("ancilla chain needs an even number of atoms");
    return {ancilla_chain(p, g.branch, p.gamma_deph), p.n_atoms / 2};
  }
  return {bare_chain(p), p.n_atoms};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void run_spectrum(Ctx& c) {
  const ScenarioConfig& cfg = c.cfg;
  const PhysicalParams& p = cfg.params;
  const auto& grid = cfg.axis("delta");
  const bool spin = cfg.model != ModelSelector::TransferMatrix;
  const bool tm = cfg.model != ModelSelector::Spin;
  const bool anc = cfg.gate.kind == GateSpecKind::Ancilla;
  const double amp = default_amplitude(cfg.drive, 1e-6);

  std::vector<double> rs(grid.size()), ts(grid.size());
  if (spin) {
    const int n_eff = p.n_atoms + (anc ? 1 : 0);
    const double dim = double(basis_dimension(n_eff, anc ? 2 : 1));
    check_budget(dim * n_eff * double(grid.size()), cfg.budget, "spin-model spectrum");
    const SolverOptions so = c.solver();
    parallel_for(
        grid.size(), c.threads,
        [&](std::size_t i) {
          const auto rt = anc ? spin_ancilla_point(p, cfg.gate.branch, grid[i], amp, so)
                              : spin_linear_point(p, grid[i], amp, so);
          rs[i] = rt.first;
          ts[i] = rt.second;
        },
        [&](std::size_t i) { return "spectrum point delta = " + fmt(grid[i]); });
  }
  SpectrumResult tmr;
  if (tm) {
    const auto [cells, reps] = tm_chain(p, cfg.gate);
    tmr = cascade_spectrum(cells, reps, grid);
  }

  Table t;
  t.add_meta("scenario", "spectrum");
  t.add_meta("model", model_name(cfg.model));
  t.add_meta("gate", gate_name(cfg.gate.kind));
  t.add_meta("branch", cfg.gate.branch == Branch::S ? "s" : "e");
  add_param_meta(t, p);
  t.columns = {"delta"};
  if (spin) t.columns.insert(t.columns.end(), {"R_spin", "T_spin"});
  if (tm) t.columns.insert(t.columns.end(), {"R_tm", "T_tm"});
  if (spin && tm) {
    const double dr = max_abs_diff(rs, tmr.reflectance), dt = max_abs_diff(ts, tmr.transmittance);
    t.add_meta("max_abs_diff_R", dr);
    t.add_meta("max_abs_diff_T", dt);
    c.man.summary["max_abs_diff_R"] = dr;
    c.man.summary["max_abs_diff_T"] = dt;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    if (spin) row.insert(row.end(), {rs[i], ts[i]});
    if (tm) row.insert(row.end(), {tmr.reflectance[i], tmr.transmittance[i]});
    t.rows.push_back(std::move(row));
  }
  c.emit("spectrum", std::move(t));
}

void run_g2map(Ctx& c) {
  const ScenarioConfig& cfg = c.cfg;
  const PhysicalParams& p0 = cfg.params;
  const auto& ds = cfg.axis("delta");
  const std::vector<double> js = cfg.has_axis("coupling_j") ? cfg.axis("coupling_j") : std::vector<double>{p0.coupling_j};
  const std::size_t npts = ds.size() * js.size();
  const double dim = double(basis_dimension(p0.n_atoms, 2));
  check_budget(dim * p0.n_atoms * double(npts), cfg.budget, "g2map");
  const double amp = default_amplitude(cfg.drive, 1e-6);
  const SolverOptions so = c.solver();
  const Branch br = cfg.gate.branch;
  const bool tm_ok = p0.n_atoms % 2 == 0;
  const bool want_maps = int(npts) <= cfg.numerics.popmap_limit;

  struct Point {
    double g2, t_lin, r_lin, even, r_tm;
    Eigen::MatrixXd map;
  };
  std::vector<Point> pts(npts);
  auto tm_gate_r = [&](const PhysicalParams& p, double d) {
    if (!tm_ok) return std::numeric_limits<double>::quiet_NaN();
    return std::norm(cascade(ancilla_chain(p, br, p.gamma_deph)(d), p.n_atoms / 2).r);
  };
  parallel_for(
      npts, c.threads,
      [&](std::size_t k) {
        PhysicalParams p = p0;
        p.coupling_j = js[k / ds.size()];
        const double d = ds[k % ds.size()];
        auto basis = std::make_shared<const BasisIndex>(p.n_atoms, 2);
        Hamiltonian h(p, DriveSpec{DriveKind::Cw, amp, d, 1.0}, basis);
        WeakDriveOptions o;
        o.order = 2;
        o.solver = so;
        const SteadyState ss = steady_state_weak_drive(h, o);
        StateVector lin = ss.psi;
        lin.segment(basis->double_offset(), basis->n_doubles()).setZero();
        Point& pt = pts[k];
        const double e2 = amp * amp;
        pt.g2 = g2_zero(ss.psi, p, *basis, amp);
        pt.t_lin = intensity(lin, {Direction::Forward, amp}, p, *basis, false) / e2;
        pt.r_lin = intensity(lin, {Direction::Backward, 0.0}, p, *basis, false) / e2;
        const Eigen::MatrixXd map = population_map(ss.psi, *basis);
        pt.even = map.sum() > 0.0 ? even_parity_fraction(map) : std::numeric_limits<double>::quiet_NaN();
        if (want_maps) pt.map = map;
        pt.r_tm = tm_gate_r(p, d);
      },
      [&](std::size_t k) { return "g2map point delta = " + fmt(ds[k % ds.size()]) + ", J = " + fmt(js[k / ds.size()]); });

  Table t;
  t.add_meta("scenario", "g2map");
  t.add_meta("branch", br == Branch::S ? "s" : "e");
  add_param_meta(t, p0);
  t.columns = {"delta", "coupling_j", "g2", "T_lin", "R_lin", "even_fraction", "R_gate_tm"};
  for (std::size_t k = 0; k < npts; ++k) {
    const Point& pt = pts[k];
    t.rows.push_back({ds[k % ds.size()], js[k / ds.size()], pt.g2, pt.t_lin, pt.r_lin, pt.even, pt.r_tm});
  }
  c.emit("g2map", std::move(t));

  if (want_maps) {
    for (std::size_t k = 0; k < npts; ++k) {
      Table m;
      m.add_meta("scenario", "g2map");
      m.add_meta("delta", ds[k % ds.size()]);
      m.add_meta("coupling_j", js[k / ds.size()]);
      m.columns = {"m", "n", "weight"};
      const Eigen::MatrixXd& w = pts[k].map;
      for (Eigen::Index a = 0; a < w.rows(); ++a)
        for (Eigen::Index b = 0; b < w.cols(); ++b) m.rows.push_back({double(a + 1), double(b + 1), w(a, b)});
      c.emit("popmap_" + std::to_string(k), std::move(m));
    }
  }

  if (tm_ok) {
    const int ng = cfg.numerics.contour_grid;
    auto span = [ng](const std::vector<double>& v) {
      std::vector<double> out;
      const int n = v.size() > 1 ? ng : 1;
      for (int i = 0; i < n; ++i) out.push_back(n == 1 ? v.front() : v.front() + (v.back() - v.front()) * i / (n - 1));
      return out;
    };
    const auto cd = span(ds), cj = span(js);
    Table ct;
    ct.add_meta("scenario", "g2map");
    ct.add_meta("quantity", "transfer-matrix reflectance with gate");
    ct.columns = {"delta", "coupling_j", "R_gate_tm"};
    ct.rows.resize(cd.size() * cj.size());
    parallel_for(
        cj.size(), c.threads,
        [&](std::size_t jj) {
          PhysicalParams p = p0;
          p.coupling_j = cj[jj];
          for (std::size_t i = 0; i < cd.size(); ++i) ct.rows[jj * cd.size() + i] = {cd[i], cj[jj], tm_gate_r(p, cd[i])};
        },
        [&](std::size_t jj) { return "contour row J = " + fmt(cj[jj]); });
    c.emit("contour", std::move(ct));
  }
}

PulseSetup pulse_setup(const ScenarioConfig& cfg) {
  PulseSetup s;
  s.params = cfg.params;
  s.detuning = cfg.drive.detuning;
  s.amplitude = default_amplitude(cfg.drive, 2e-4);
  s.gate = cfg.gate.kind == GateSpecKind::SingleSite ? GateStateKind::SingleSite : GateStateKind::Subradiant;
  s.gate_site = cfg.gate.site;
  s.tail = cfg.numerics.tail;
  s.record_stride = cfg.numerics.record_stride;
  s.dt = cfg.numerics.dt;
  return s;
}

Table pulse_series(const std::vector<std::pair<PulseOutcome, PulseOutcome>>& runs) {
  Table t;
  t.add_meta("scenario", "pulse");
  t.add_meta("intensity_units", "absolute; divide by amplitude^2 for normalized curves");
  t.columns = {"t0", "t", "I_r_gate", "I_t_gate", "I_r_bg", "I_t_bg", "I_r_nogate", "I_t_nogate"};
  for (const auto& [g, ng] : runs) {
    const Trajectory &a = g.run, &b = g.background, &z = ng.run;
    if (z.size() != a.size()) throw NumericError("gate and no-gate pulse runs ended on different grids");
    for (std::size_t i = 0; i < a.size(); ++i)
      t.rows.push_back({g.t0, a.time[i], a.i_r[i], a.i_t[i], b.i_r[i], b.i_t[i], z.i_r[i], z.i_t[i]});
  }
  return t;
}

void note_pulse_warnings(Ctx& c, const PulseOutcome& o, const std::string& what) {
  if (!o.window_closed)
    c.man.warnings.push_back(what + " at t0 = " + fmt(o.t0) +
                             ": transmitted signal never fell below 1e-4 of its peak; integrated the full record");
  if (o.reflectance.negative_warning)
    c.man.warnings.push_back(what + " at t0 = " + fmt(o.t0) + ": negative subtracted reflected intensity " +
                             fmt(o.reflectance.min_integrand));
}

void run_pulse_switch(Ctx& c) {
  const ScenarioConfig& cfg = c.cfg;
  const PulseSetup s = pulse_setup(cfg);
  const std::vector<double> t0s = cfg.has_axis("t0") ? cfg.axis("t0") : std::vector<double>{cfg.drive.pulse_width};
  if (!(t0s.front() > 0.0)) throw ValidationError("pulse width must be positive");
  const double t_long = 2.0 * t0s.back() + s.tail;
  check_budget(pulse_cost(s, true, t_long), cfg.budget, "pulse-switch gate run");
  const Trajectory bg = run_background(s, t_long);

  std::vector<std::pair<PulseOutcome, PulseOutcome>> runs(t0s.size());
  parallel_for(
      2 * t0s.size(), c.threads,
      [&](std::size_t k) {
        const std::size_t i = k / 2;
        if (k % 2 == 0) runs[i].first = run_pulse(s, t0s[i], true, &bg);
        else runs[i].second = run_pulse(s, t0s[i], false);
      },
      [&](std::size_t k) { return std::string(k % 2 ? "no-gate" : "gate") + " pulse run t0 = " + fmt(t0s[k / 2]); });

  Table sum;
  sum.add_meta("scenario", "pulse-switch");
  sum.add_meta("detuning", s.detuning);
  sum.add_meta("amplitude", s.amplitude);
  sum.add_meta("gate", gate_name(cfg.gate.kind));
  add_param_meta(sum, s.params);
  sum.columns = {"t0", "R_pulse", "T_pulse_gate", "R_pulse_nogate", "T_pulse_nogate", "t_stop", "window_closed"};
  for (const auto& [g, ng] : runs) {
    note_pulse_warnings(c, g, "gate run");
    sum.rows.push_back({g.t0, g.reflectance.value, g.transmittance.value, ng.reflectance.value,
                        ng.transmittance.value, g.t_stop, g.window_closed ? 1.0 : 0.0});
  }
  if (runs.size() == 1) {
    c.man.summary["R_pulse"] = runs[0].first.reflectance.value;
    c.man.summary["T_pulse_nogate"] = runs[0].second.transmittance.value;
  }
  c.emit("pulse_summary", std::move(sum));
  c.emit("pulse", pulse_series(runs));
}

// Log-slope of the gate norm over the record after the first 5%.
double norm_decay_rate(const Trajectory& tr) {
  const std::size_t i0 = tr.size() / 20, i1 = tr.size() - 1;
  if (i1 <= i0 || !(tr.norm[i1] > 0.0)) return 0.0;
  return std::log(tr.norm[i0] / tr.norm[i1]) / (tr.time[i1] - tr.time[i0]);
}

void run_optimize_t0(Ctx& c) {
  const ScenarioConfig& cfg = c.cfg;
  const PulseSetup s = pulse_setup(cfg);
  const double lo = cfg.numerics.t0_min, hi = cfg.numerics.t0_max;
  const double t_long = 2.0 * hi + s.tail;
  check_budget(pulse_cost(s, true, t_long), cfg.budget, "optimize-t0 gate run at t_max");
  const Trajectory bg = run_background(s, t_long);

  const double gamma_dec = norm_decay_rate(bg);
  if (!(gamma_dec < 1.0 / hi)) {
    std::ostringstream os;
    os << "t0 upper bound " << hi << " violates Gamma_dec < 1/t0 (gate decay rate " << gamma_dec << ")";
    throw ValidationError(os.str());
  }
  if (s.params.rabi > 0.0 && s.params.delta_c != 0.0) {
    const ResonanceSet rs = resonances(s.params, Branch::S);
    const bool plus = std::abs(s.detuning - rs.plus) <= std::abs(s.detuning - rs.minus);
    const double g1 = plus ? rs.gamma_1d_eff_plus : rs.gamma_1d_eff_minus;
    const double width = 0.5 * s.params.n_atoms * g1 + rs.gamma_prime_eff_single;
    if (!(1.0 / lo < width))
      c.man.warnings.push_back("t0 lower bound " + fmt(lo) + " is not slower than the estimated resonance width " +
                               fmt(width));
  }

  std::map<double, PulseOutcome> seen;
  auto objective = [&](double t0) {
    PulseOutcome o = run_pulse(s, t0, true, &bg);
    const double v = o.reflectance.value;
    seen[t0] = std::move(o);
    return v;
  };
  MaximizeTrace tr;
  try {
    tr = maximize_log_golden(objective, lo, hi, 8, 1e-2);
  } catch (const NumericError& e) {
    throw NumericError(std::string("optimize-t0: ") + e.what());
  }
  for (const auto& w : tr.warnings) c.man.warnings.push_back("optimize-t0: " + w);

  const PulseOutcome& best = seen.at(tr.best_x);
  note_pulse_warnings(c, best, "optimum gate run");
  const PulseOutcome ng = run_pulse(s, tr.best_x, false);

  Table t;
  t.add_meta("scenario", "optimize-t0");
  t.add_meta("detuning", s.detuning);
  t.add_meta("t0_min", lo);
  t.add_meta("t0_max", hi);
  t.add_meta("t0_opt", tr.best_x);
  t.add_meta("R_pulse_opt", tr.best_value);
  t.add_meta("T_pulse_gate_opt", best.transmittance.value);
  t.add_meta("R_pulse_nogate_opt", ng.reflectance.value);
  t.add_meta("T_pulse_nogate_opt", ng.transmittance.value);
  t.add_meta("gate_decay_rate", gamma_dec);
  t.add_meta("boundary_warning", tr.boundary_warning ? "true" : "false");
  add_param_meta(t, s.params);
  t.columns = {"eval", "t0", "R_pulse"};
  for (std::size_t i = 0; i < tr.x.size(); ++i) t.rows.push_back({double(i), tr.x[i], tr.value[i]});
  c.man.summary["t0_opt"] = tr.best_x;
  c.man.summary["R_pulse_opt"] = tr.best_value;
  c.man.summary["T_pulse_nogate_opt"] = ng.transmittance.value;
  c.man.summary["boundary_warning"] = tr.boundary_warning;
  c.emit("optimize", std::move(t));
  c.emit("pulse", pulse_series({{best, ng}}));
}

void run_decay(Ctx& c) {
  const ScenarioConfig& cfg = c.cfg;
  const std::vector<double> g1s =
      cfg.has_axis("gamma_1d") ? cfg.axis("gamma_1d") : std::vector<double>{cfg.params.gamma_1d};
  const GateStateKind kind =
      cfg.gate.kind == GateSpecKind::SingleSite ? GateStateKind::SingleSite : GateStateKind::Subradiant;
  const DriveSpec idle{DriveKind::Cw, 0.0, cfg.drive.detuning, 1.0};
  double dt = cfg.numerics.dt;
  if (dt <= 0.0) {
    dt = kInf;
    for (double g1 : g1s) {
      PhysicalParams p = cfg.params;
      p.gamma_1d = g1;
      dt = std::min(dt, step_bound(p, idle));
    }
    if (!std::isfinite(dt)) throw ValidationError("decay run has no finite time scale; set numerics.dt");
  }
  const double t_end = cfg.numerics.t_end > 0.0 ? cfg.numerics.t_end : 100.0;
  const int n = cfg.params.n_atoms;
  check_budget(double(basis_dimension(n, 1)) * std::ceil(t_end / dt) * n, cfg.budget, "decay run");

  struct Res {
    double rate, rate_long, rate_eigen;
    Trajectory tr;
  };
  std::vector<Res> res(g1s.size());
  parallel_for(
      g1s.size(), c.threads,
      [&](std::size_t i) {
        PhysicalParams p = cfg.params;
        p.gamma_1d = g1s[i];
        auto basis = std::make_shared<const BasisIndex>(n, 1);
        const GateState g = build_gate_state(p, kind, *basis, cfg.gate.site);
        Hamiltonian h(p, idle, basis);
        EvolveOptions o;
        o.record_stride = cfg.numerics.record_stride;
        res[i].tr = evolve(h, g.state, t_end, dt, o);
        res[i].rate = decay_rate_from_trajectory(res[i].tr);
        res[i].rate_long = decay_rate_from_trajectory(res[i].tr, true);
        res[i].rate_eigen = g.nominal_rate;
      },
      [&](std::size_t i) { return "decay run gamma_1d = " + fmt(g1s[i]); });

  Table t;
  t.add_meta("scenario", "decay");
  t.add_meta("gate", gate_name(cfg.gate.kind));
  t.add_meta("t_end", t_end);
  t.add_meta("dt", dt);
  add_param_meta(t, cfg.params);
  t.columns = {"gamma_1d", "rate", "rate_long", "rate_eigen"};
  Table tr;
  tr.add_meta("scenario", "decay");
  tr.columns = {"gamma_1d", "t", "p_e", "p_s"};
  json longs = json::array();
  for (std::size_t i = 0; i < g1s.size(); ++i) {
    t.rows.push_back({g1s[i], res[i].rate, res[i].rate_long, res[i].rate_eigen});
    longs.push_back(res[i].rate_long);
    const Trajectory& x = res[i].tr;
    for (std::size_t k = 0; k < x.size(); ++k) tr.rows.push_back({g1s[i], x.time[k], x.p_e[k], x.p_s[k]});
  }
  c.man.summary["rate_long"] = longs;
  c.emit("decay", std::move(t));
  c.emit("decay_trace", std::move(tr));
}

void run_dephasing(Ctx& c) {
  const ScenarioConfig& cfg = c.cfg;
  const PhysicalParams& p0 = cfg.params;
  const auto& gammas = cfg.axis("gamma");
  const auto& ds = cfg.axis("delta");
  check_budget(double(p0.n_atoms) * double(ds.size()) * double(gammas.size() + 1), cfg.budget, "dephasing-sweep");

  DephasedLorentzian lz;
  lz.n_half = p0.n_atoms;
  lz.gamma_1d = p0.gamma_1d;
  lz.gamma_prime = p0.gamma_prime;
  lz.delta_c = p0.delta_c;
  if (p0.rabi > 0.0) {
    const DressedLevel dl = dressed_s_level(p0.rabi, p0.delta_c);
    lz.lambda = dl.energy;
    lz.p_lambda = dl.p_e;
    lz.kappa_lambda = dephasing_kappa(p0.rabi, p0.delta_c, dl.energy);
  }

  auto tm_curve = [&](double gamma) {
    PhysicalParams p = p0;
    p.gamma_deph = gamma * p0.gamma_1d;
    return cascade_spectrum(bare_chain(p), p.n_atoms, ds).reflectance;
  };
  const std::vector<double> ref = tm_curve(0.0);
  const double rmax0 = *std::max_element(ref.begin(), ref.end());

  std::vector<std::vector<double>> tm(gammas.size()), lor(gammas.size());
  parallel_for(
      gammas.size(), c.threads,
      [&](std::size_t g) {
        tm[g] = tm_curve(gammas[g]);
        DephasedLorentzian l = lz;
        l.gamma = gammas[g] * p0.gamma_1d;
        for (double d : ds) lor[g].push_back(dephased_lorentzian(l, d - lz.lambda));
      },
      [&](std::size_t g) { return "dephasing gamma = " + fmt(gammas[g]); });

  Table t;
  t.add_meta("scenario", "dephasing-sweep");
  t.add_meta("gamma_units", "gamma_1d");
  t.add_meta("lambda", lz.lambda);
  t.add_meta("p_lambda", lz.p_lambda);
  t.add_meta("kappa_lambda", lz.kappa_lambda);
  add_param_meta(t, p0);
  t.columns = {"gamma", "delta", "R_tm", "R_lorentzian"};
  Table m;
  m.add_meta("scenario", "dephasing-sweep");
  m.add_meta("R_max_gamma0", rmax0);
  m.columns = {"gamma", "R_max_tm", "R_max_lorentzian", "reduction_tm", "max_abs_diff"};
  json diffs = json::array();
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    for (std::size_t i = 0; i < ds.size(); ++i) t.rows.push_back({gammas[g], ds[i], tm[g][i], lor[g][i]});
    const double rt = *std::max_element(tm[g].begin(), tm[g].end());
    const double rl = *std::max_element(lor[g].begin(), lor[g].end());
    const double diff = max_abs_diff(tm[g], lor[g]);
    m.rows.push_back({gammas[g], rt, rl, 1.0 - rt / rmax0, diff});
    diffs.push_back(diff);
  }
  c.man.summary["max_abs_diff"] = diffs;
  c.emit("dephasing", std::move(t));
  c.emit("dephasing_rmax", std::move(m));
}

struct ScalingPoint {
  double rate = 0.0, t_end = 0.0, dt = 0.0;
  int halvings = 0;
};

ScalingPoint scaling_point(const PhysicalParams& p, double gamma, const NumericsSpec& num, double budget) {
  const auto modes = single_excitation_eigenmodes(p);
  ScalingPoint out;
  if (gamma == 0.0) {
    out.rate = modes.front().gamma_wg + p.gamma_prime;
    return out;
  }
  const BasisIndex basis(p.n_atoms, 1);
  const GateState g = build_gate_state(p, GateStateKind::Subradiant, basis);
  DensityBlock rho0;
  rho0.rho = g.amplitudes * g.amplitudes.adjoint();
  const double est = modes.front().gamma_wg + p.gamma_prime + gamma;
  double t_end = num.t_end > 0.0 ? num.t_end : 3.0 / est;
  const double n = p.n_atoms;
  auto rate_at = [&](double dt) {
    check_budget(n * n * std::ceil(t_end / dt) * n, budget, "scaling master-equation run");
    return decay_rate_from_trajectory(evolve_density_single_exc(p, rho0, gamma, t_end, dt));
  };
  for (int grow = 0;; ++grow) {
    try {
      double dt = num.dt > 0.0 ? num.dt : t_end / 2000.0;
      double r1 = rate_at(dt), r2 = rate_at(0.5 * dt);
      int h = 1;
      while (std::abs(r1 - r2) > 1e-3 * std::abs(r2) && h < 5) {
        dt *= 0.5;
        r1 = r2;
        r2 = rate_at(0.5 * dt);
        ++h;
      }
      if (std::abs(r1 - r2) > 1e-3 * std::abs(r2))
        throw ConvergenceError("scaling rate still changes by " + fmt(std::abs(r1 - r2) / r2) + " after halving dt");
      out.rate = r2;
      out.dt = 0.5 * dt;
      out.t_end = t_end;
      out.halvings = h;
      return out;
    } catch (const ConvergenceError&) {
      throw;
    } catch (const NumericError&) {
      if (grow >= 4) throw;
      t_end *= 2.0;
    }
  }
}

void run_scaling(Ctx& c) {
  const ScenarioConfig& cfg = c.cfg;
  const auto& ns = cfg.axis("n_atoms");
  const std::vector<double> gammas = cfg.has_axis("gamma") ? cfg.axis("gamma") : std::vector<double>{0.0};
  const std::size_t npts = ns.size() * gammas.size();
  std::vector<ScalingPoint> pts(npts);
  parallel_for(
      npts, c.threads,
      [&](std::size_t k) {
        PhysicalParams p = cfg.params;
        p.n_atoms = int(ns[k % ns.size()]);
        pts[k] = scaling_point(p, gammas[k / ns.size()] * cfg.params.gamma_1d, cfg.numerics, cfg.budget);
      },
      [&](std::size_t k) { return "scaling point N = " + fmt(ns[k % ns.size()]) + ", gamma = " + fmt(gammas[k / ns.size()]); });

  Table t;
  t.add_meta("scenario", "scaling");
  t.add_meta("gamma_units", "gamma_1d");
  add_param_meta(t, cfg.params);
  t.columns = {"gamma", "n_atoms", "rate", "t_end", "dt"};
  Table f;
  f.add_meta("scenario", "scaling");
  f.add_meta("fit_threshold", cfg.numerics.fit_threshold);
  f.columns = {"gamma", "alpha", "prefactor", "residual", "non_polynomial"};
  json fits = json::array();
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    std::vector<std::pair<double, double>> data;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const ScalingPoint& sp = pts[g * ns.size() + i];
      t.rows.push_back({gammas[g], ns[i], sp.rate, sp.t_end, sp.dt});
      data.emplace_back(ns[i], sp.rate);
    }
    const ScalingFit fit = fit_scaling(data, cfg.numerics.fit_threshold);
    f.rows.push_back({gammas[g], fit.alpha, fit.prefactor, fit.residual, fit.non_polynomial ? 1.0 : 0.0});
    fits.push_back({{"gamma", gammas[g]}, {"alpha", fit.alpha}, {"residual", fit.residual},
                    {"non_polynomial", fit.non_polynomial}});
  }
  c.man.summary["fits"] = fits;
  c.emit("scaling", std::move(t));
  c.emit("scaling_fit", std::move(f));
}

}  // namespace

OutputManifest run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  OutputManifest man;
  man.config = to_json(cfg);
  man.run_id = hash_hex(man.config.dump());
  man.version = library_version();
  const std::filesystem::path parent = std::filesystem::path(cfg.output).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);

  Ctx c{cfg, man, resolve_threads(cfg.threads)};
  switch (cfg.kind) {
    case ScenarioKind::Spectrum: run_spectrum(c); break;
    case ScenarioKind::G2Map: run_g2map(c); break;
    case ScenarioKind::PulseSwitch: run_pulse_switch(c); break;
    case ScenarioKind::Decay: run_decay(c); break;
    case ScenarioKind::DephasingSweep: run_dephasing(c); break;
    case ScenarioKind::OptimizeT0: run_optimize_t0(c); break;
    case ScenarioKind::Scaling: run_scaling(c); break;
  }
  man.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string path = cfg.output + "_manifest.json";
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write manifest '" + path + "'");
  os << man.to_json().dump(2) << '\n';
  return man;
}

}  // namespace wqed
