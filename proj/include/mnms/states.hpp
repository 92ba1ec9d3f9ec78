#pragma once

#include <string>

#include "mnms/matrix.hpp"

namespace mnms {

// Every named state family. Parameter meaning and domain per family:
//   Mems       gamma in [0, 1]     (concurrence parameter)
//   Mnms2      gamma in [-1, 1]    (Bell-mixture weight; curves use |gamma|)
//   Mnms3      f in [0, 1/8]       (bit-flip weight, f1 = 1/2 - 3f)
//   DiagMix    p in [0, 1]
//   Planar2    lambda in [0, 1]
//   GhzBitFlip f in [0, 1/8]
// The Bell and GHZ tags take no parameter.
enum class StateTag {
  BellPhiPlus,
  BellPsiPlus,
  Ghz,
  Mems,
  Mnms2,
  Mnms3,
  DiagMix,
  Planar2,
  GhzBitFlip,
};

struct StateFamily {
  StateTag tag = StateTag::BellPhiPlus;
  double parameter = 0.0;
};

StateFamily parse_family(const std::string& name, double parameter = 0.0);
std::string family_name(StateTag tag);
bool family_has_parameter(StateTag tag);

/// N-qubit density matrix in the big-endian computational basis
/// (|00>, |01>, |10>, |11>, ... with the first qubit as the leading bit).
struct DensityMatrix {
  int qubits = 0;
  ComplexMatrix mat;
  std::size_t dim() const { return mat.dim(); }
};

/// Exact matrix of the requested family. Throws std::domain_error when the
/// parameter leaves the family's domain.
DensityMatrix make_state(const StateFamily& family);

/// Wraps an arbitrary matrix, inferring the qubit count from its dimension.
/// Throws std::invalid_argument if the dimension is not a power of two.
DensityMatrix density_from_matrix(ComplexMatrix mat);

/// v * rho + (1 - v) * I / 2^N. Throws std::domain_error for v outside [0,1].
DensityMatrix mix_white_noise(const DensityMatrix& rho, double visibility);

double purity(const DensityMatrix& rho);  // Tr rho^2

/// Normalized linear entropy d/(d-1) * (1 - Tr rho^2); 0 for pure states,
/// 1 for the maximally mixed state.
double linear_entropy(const DensityMatrix& rho);

struct ValidationReport {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;
  bool passed() const { return hermitian && unit_trace && positive; }
};

/// Never throws; failures are carried in the report. Eigenvalues are taken
/// on the Hermitian part when the input is not exactly Hermitian.
ValidationReport validate(const DensityMatrix& rho, double tol = kHermTol);

// JSON document {qubits, entries: [[re, im], ...]} in row-major order.
// Serialization round-trips bit-exactly.
std::string density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text);

}  // namespace mnms
