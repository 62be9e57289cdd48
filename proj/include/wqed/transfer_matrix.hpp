#pragma once

#include <functional>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/observables.hpp"

namespace wqed {

struct ScatterCoeffs {
  cplx r = 0.0;
  cplx t = 1.0;
};

enum class Branch { E, S };
enum class GateKind { None, E, S };

// Bare three-level atom (two-level when rabi = 0).
ScatterCoeffs bare_three_level_coeffs(const PhysicalParams& p, double delta);

// Probed atom next to an ancilla holding the gate excitation, coupled by the
// band-gap exchange sign * J. Linear response with the ancilla pinned.
ScatterCoeffs ancilla_dressed_coeffs(const PhysicalParams& p, double delta, Branch branch, int sign);
// Explicit probe/gate pairing; mismatched pairs are rejected.
ScatterCoeffs ancilla_dressed_coeffs(const PhysicalParams& p, double delta, Branch probe, GateKind gate,
                                     int sign);

// Same construction with g-s dephasing gamma on the probed atom and the
// ancilla. gate = None gives the dephased bare atom.
ScatterCoeffs dephased_coeffs(const PhysicalParams& p, double delta, double gamma, GateKind gate, int sign);

using Mat2 = Eigen::Matrix2cd;

Mat2 scatter_matrix(const ScatterCoeffs& c);
Mat2 free_matrix(double ka);

// One repetition: each entry is (coeffs, phase) meaning free propagation by
// `phase` followed by the scatterer.
struct UnitCell {
  std::vector<std::pair<ScatterCoeffs, double>> entries;
};

struct CascadeResult {
  cplx r;        // reflection for light incident from the left (z = 0 side)
  cplx t;        // transmission
  cplx r_right;  // reflection for light incident from the right
};

CascadeResult cascade(const std::vector<UnitCell>& cells, int n_repeats);

using CellFactory = std::function<std::vector<UnitCell>(double delta)>;

SpectrumResult cascade_spectrum(const CellFactory& cells, int n_repeats, const std::vector<double>& grid);

// Cells of a chain of N identical bare atoms with spacing phase ka.
CellFactory bare_chain(const PhysicalParams& p);
// Ancilla-dressed chain with alternating sign (+J on odd atoms, -J on even).
CellFactory ancilla_chain(const PhysicalParams& p, Branch branch, double gamma = 0.0);

}  // namespace wqed
