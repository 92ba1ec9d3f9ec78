#include "mnms/states.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace mnms {

namespace {

void require_domain(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

DensityMatrix from_parts(int qubits, ComplexMatrix m) { return DensityMatrix{qubits, std::move(m)}; }

// (|a> + |b>)/sqrt(2) projector, written with exact halves.
ComplexMatrix pair_projector(std::size_t dim, std::size_t a, std::size_t b) {
  ComplexMatrix m(dim);
  m(a, a) = m(a, b) = m(b, a) = m(b, b) = 0.5;
  return m;
}

DensityMatrix make_mems(double gamma) {
  require_domain(gamma >= 0.0 && gamma <= 1.0, "MEMS: gamma must lie in [0, 1]");
  const double g = gamma < 2.0 / 3.0 ? 1.0 / 3.0 : gamma / 2.0;
  ComplexMatrix m(4);
  m(0, 0) = g;
  m(1, 1) = 1.0 - 2.0 * g;
  m(3, 3) = g;
  m(0, 3) = m(3, 0) = gamma / 2.0;
  return from_parts(2, m);
}

DensityMatrix make_mnms2(double gamma) {
  require_domain(gamma >= -1.0 && gamma <= 1.0, "MNMS2: gamma must lie in [-1, 1]");
  // (1+gamma)/2 |Phi+><Phi+| + (1-gamma)/2 |Psi+><Psi+|, written out.
  const double outer_corner = (1.0 + gamma) / 4.0;
  const double inner_corner = (1.0 - gamma) / 4.0;
  ComplexMatrix m(4);
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = outer_corner;
  m(1, 1) = m(1, 2) = m(2, 1) = m(2, 2) = inner_corner;
  return from_parts(2, m);
}

DensityMatrix make_mnms3(double f) {
  require_domain(f >= 0.0 && f <= 0.125, "MNMS3: f must lie in [0, 1/8]");
  const double f1 = 0.5 - 3.0 * f;
  ComplexMatrix m(8);
  for (std::size_t i = 0; i < 8; ++i) {
    const double w = (i == 0 || i == 7) ? f1 : f;
    m(i, i) = w;
    m(i, 7 - i) = w;
  }
  return from_parts(3, m);
}

// The same state built through the bit-flip channel: the GHZ projector mixed
// with its three single-flip images, weights (2f1, 2f, 2f, 2f).
DensityMatrix make_ghz_bitflip(double f) {
  require_domain(f >= 0.0 && f <= 0.125, "GHZBitFlip: f must lie in [0, 1/8]");
  const double f1 = 0.5 - 3.0 * f;
  ComplexMatrix m = Complex(2.0 * f1) * pair_projector(8, 0, 7)   // |000>,|111>
                  + Complex(2.0 * f) * pair_projector(8, 4, 3)    // |100>,|011>
                  + Complex(2.0 * f) * pair_projector(8, 2, 5)    // |010>,|101>
                  + Complex(2.0 * f) * pair_projector(8, 1, 6);   // |001>,|110>
  return from_parts(3, m);
}

DensityMatrix make_diag_mix(double p) {
  require_domain(p >= 0.0 && p <= 1.0, "DiagMix: p must lie in [0, 1]");
  // p |00><00| + (1-p) |01><01|: correlation matrix diag(0, 0, 2p-1), the
  // state tracing the minimal-CHSH curve sqrt(1 - 3 E_L / 2).
  ComplexMatrix m(4);
  m(0, 0) = p;
  m(1, 1) = 1.0 - p;
  return from_parts(2, m);
}

DensityMatrix make_planar2(double lambda) {
  require_domain(lambda >= 0.0 && lambda <= 1.0, "Planar2: lambda must lie in [0, 1]");
  // (I + lambda sigma_x (x) sigma_x) / 4: zero local vectors, correlation
  // matrix diag(lambda, 0, 0); positive for the whole parameter range and
  // spans E_L in [2/3, 1].
  ComplexMatrix m(4);
  for (std::size_t i = 0; i < 4; ++i) {
    m(i, i) = 0.25;
    m(i, 3 - i) = lambda / 4.0;
  }
  return from_parts(2, m);
}

}  // namespace

StateFamily parse_family(const std::string& name, double parameter) {
  static const std::array<std::pair<const char*, StateTag>, 11> kNames = {{
      {"bell", StateTag::BellPhiPlus},
      {"bell-phi-plus", StateTag::BellPhiPlus},
      {"bell-psi-plus", StateTag::BellPsiPlus},
      {"ghz", StateTag::Ghz},
      {"mems", StateTag::Mems},
      {"mnms2", StateTag::Mnms2},
      {"mnms3", StateTag::Mnms3},
      {"diag-mix", StateTag::DiagMix},
      {"diagmix", StateTag::DiagMix},
      {"planar2", StateTag::Planar2},
      {"ghz-bitflip", StateTag::GhzBitFlip},
  }};
  for (const auto& [text, tag] : kNames)
    if (name == text) return StateFamily{tag, parameter};
  throw std::domain_error("unknown state family: " + name);
}

std::string family_name(StateTag tag) {
  switch (tag) {
    case StateTag::BellPhiPlus: return "bell-phi-plus";
    case StateTag::BellPsiPlus: return "bell-psi-plus";
    case StateTag::Ghz: return "ghz";
    case StateTag::Mems: return "mems";
    case StateTag::Mnms2: return "mnms2";
    case StateTag::Mnms3: return "mnms3";
    case StateTag::DiagMix: return "diag-mix";
    case StateTag::Planar2: return "planar2";
    case StateTag::GhzBitFlip: return "ghz-bitflip";
  }
  return "?";
}

bool family_has_parameter(StateTag tag) {
  return tag != StateTag::BellPhiPlus && tag != StateTag::BellPsiPlus && tag != StateTag::Ghz;
}

DensityMatrix make_state(const StateFamily& family) {
  switch (family.tag) {
    case StateTag::BellPhiPlus: return from_parts(2, pair_projector(4, 0, 3));
    case StateTag::BellPsiPlus: return from_parts(2, pair_projector(4, 1, 2));
    case StateTag::Ghz: return from_parts(3, pair_projector(8, 0, 7));
    case StateTag::Mems: return make_mems(family.parameter);
    case StateTag::Mnms2: return make_mnms2(family.parameter);
    case StateTag::Mnms3: return make_mnms3(family.parameter);
    case StateTag::DiagMix: return make_diag_mix(family.parameter);
    case StateTag::Planar2: return make_planar2(family.parameter);
    case StateTag::GhzBitFlip: return make_ghz_bitflip(family.parameter);
  }
  throw std::domain_error("make_state: unknown family tag");
}

DensityMatrix density_from_matrix(ComplexMatrix mat) {
  const std::size_t d = mat.dim();
  if (d == 0 || (d & (d - 1)) != 0)
    throw std::invalid_argument("density matrix dimension must be a power of two");
  int qubits = 0;
  for (std::size_t x = d; x > 1; x >>= 1) ++qubits;
  return DensityMatrix{qubits, std::move(mat)};
}

DensityMatrix mix_white_noise(const DensityMatrix& rho, double visibility) {
  require_domain(visibility >= 0.0 && visibility <= 1.0,
                 "mix_white_noise: visibility must lie in [0, 1]");
  const std::size_t d = rho.dim();
  ComplexMatrix m = Complex(visibility) * ComplexMatrix(rho.mat);
  const double floor = (1.0 - visibility) / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) += floor;
  return DensityMatrix{rho.qubits, std::move(m)};
}

double purity(const DensityMatrix& rho) {
  // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
  double s = 0.0;
  for (const Complex& z : rho.mat.entries()) s += std::norm(z);
  return s;
}

double linear_entropy(const DensityMatrix& rho) {
  const double d = static_cast<double>(rho.dim());
  return d / (d - 1.0) * (1.0 - purity(rho));
}

ValidationReport validate(const DensityMatrix& rho, double tol) {
  ValidationReport report;
  report.hermiticity_defect = rho.mat.hermiticity_defect();
  report.trace_defect = std::abs(rho.mat.trace() - Complex(1.0));
  // Diagnose eigenvalues on the Hermitian part so a failed hermiticity check
  // still yields a meaningful spectrum.
  ComplexMatrix h(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j)
      h(i, j) = 0.5 * (rho.mat(i, j) + std::conj(rho.mat(j, i)));
  const std::vector<double> vals = herm_eigvals(h, 1e300);
  report.min_eigenvalue = vals.empty() ? 0.0 : vals.back();
  report.hermitian = report.hermiticity_defect <= tol;
  report.unit_trace = report.trace_defect <= tol;
  report.positive = report.min_eigenvalue >= -kPsdTol;
  return report;
}

std::string density_to_json(const DensityMatrix& rho) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Complex& z : rho.mat.entries()) entries.push_back({z.real(), z.imag()});
  return nlohmann::json{{"qubits", rho.qubits}, {"entries", std::move(entries)}}.dump();
}

DensityMatrix density_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int qubits = j.at("qubits").get<int>();
  if (qubits < 1 || qubits > 8) throw std::invalid_argument("density JSON: qubits out of range");
  const std::size_t d = std::size_t{1} << qubits;
  const auto& entries = j.at("entries");
  if (entries.size() != d * d)
    throw std::invalid_argument("density JSON: entry count does not match qubit count");
  ComplexMatrix m(d);
  std::size_t k = 0;
  for (const auto& e : entries) {
    m.entries()[k++] = Complex(e.at(0).get<double>(), e.at(1).get<double>());
  }
  return DensityMatrix{qubits, std::move(m)};
}

}  // namespace mnms
