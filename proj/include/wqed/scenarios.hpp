#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wqed/model.hpp"
#include "wqed/subradiant.hpp"
#include "wqed/table_io.hpp"
#include "wqed/transfer_matrix.hpp"

namespace wqed {

enum class ScenarioKind { Spectrum, G2Map, PulseSwitch, Decay, DephasingSweep, OptimizeT0, Scaling };
enum class ModelSelector { Spin, TransferMatrix, Both };
enum class GateSpecKind { None, Ancilla, Subradiant, SingleSite };

ScenarioKind parse_scenario_kind(const std::string& s);
std::string to_string(ScenarioKind k);

struct GateSpec {
  GateSpecKind kind = GateSpecKind::None;
  Branch branch = Branch::S;
  int site = 1;
};

struct NumericsSpec {
  double dt = 0.0;       // 0: step bound of the run
  double t_end = 0.0;    // 0: scenario default
  double tail = 10.0;    // pulse runs: time after the pulse
  int record_stride = 10;
  double t0_min = 1.0;
  double t0_max = 10.0;
  int contour_grid = 201;
  int popmap_limit = 16;  // g2map writes population maps when the grid is at most this big
  double solver_tol = 1e-10;
  double fit_threshold = kScalingResidualThreshold;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Spectrum;
  PhysicalParams params;
  DriveSpec drive;
  // Sweep axes by name: delta, coupling_j, gamma, n_atoms, t0, gamma_1d.
  std::map<std::string, std::vector<double>> axes;
  GateSpec gate;
  ModelSelector model = ModelSelector::Spin;
  std::string output = "wqed_out";
  int threads = 1;
  double budget = 1e12;
  NumericsSpec numerics;

  const std::vector<double>& axis(const std::string& name) const;
  bool has_axis(const std::string& name) const { return axes.count(name) > 0; }
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& c);
// Grid and selector checks; throws ValidationError.
void validate_config(const ScenarioConfig& c);

struct OutputFile {
  std::string path;
  std::vector<std::string> columns;
  std::size_t rows = 0;
};

struct OutputManifest {
  std::string run_id;
  nlohmann::json config;
  std::vector<OutputFile> files;
  double wall_clock_s = 0.0;
  std::string version;
  std::vector<std::string> warnings;
  nlohmann::json summary = nlohmann::json::object();  // headline scalars of the run
  std::map<std::string, Table> tables;  // in-memory copies, keyed by table name

  nlohmann::json to_json() const;
};

// Executes the scenario, writes <output>_<table>.csv files and
// <output>_manifest.json, and returns the manifest.
OutputManifest run_scenario(const ScenarioConfig& cfg);

// Number of workers: WQED_THREADS when set, otherwise `requested`.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) on a fixed pool. Exceptions are rethrown in
// index order with "<label> i" prepended, keeping their error category.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn,
                  const std::function<std::string(std::size_t)>& label);

// Throws BudgetError when cost exceeds budget.
void check_budget(double cost, double budget, const std::string& what);

std::string library_version();

}  // namespace wqed
