#include "mnms/nonlocality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "mnms/rng.hpp"

namespace mnms {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += m[i][j] * v[j];
  return out;
}

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 scaled(const Vec3& v, double k) { return {k * v[0], k * v[1], k * v[2]}; }

MeasurementSetting unit_to_setting(const Vec3& n) {
  const double z = std::clamp(n[2], -1.0, 1.0);
  return MeasurementSetting::bloch(std::acos(z), wrap_angle(std::atan2(n[1], n[0])));
}

}  // namespace

SettingMode parse_mode(const std::string& name) {
  if (name == "planar") return SettingMode::Planar;
  if (name == "bloch") return SettingMode::Bloch;
  throw std::domain_error("unknown setting mode: " + name);
}

std::string mode_name(SettingMode mode) {
  return mode == SettingMode::Planar ? "planar" : "bloch";
}

MeasurementSetting MeasurementSetting::planar(double phi) {
  return MeasurementSetting{SettingMode::Planar, kPi / 2.0, phi};
}

MeasurementSetting MeasurementSetting::bloch(double theta, double phi) {
  return MeasurementSetting{SettingMode::Bloch, theta, phi};
}

std::array<double, 3> MeasurementSetting::direction() const {
  if (mode == SettingMode::Planar) return {std::cos(phi), std::sin(phi), 0.0};
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

ComplexMatrix MeasurementSetting::observable() const {
  const Vec3 n = direction();
  ComplexMatrix m(2);
  m(0, 0) = n[2];
  m(1, 1) = -n[2];
  m(0, 1) = Complex(n[0], -n[1]);
  m(1, 0) = Complex(n[0], n[1]);
  return m;
}

std::string settings_to_json(const SettingsTable& settings) {
  nlohmann::json angles = nlohmann::json::array();
  SettingMode mode = SettingMode::Planar;
  for (const auto& party : settings.parties) {
    nlohmann::json pair = nlohmann::json::array();
    for (const MeasurementSetting& s : party) {
      mode = s.mode;
      if (s.mode == SettingMode::Planar)
        pair.push_back(s.phi);
      else
        pair.push_back({s.theta, s.phi});
    }
    angles.push_back(std::move(pair));
  }
  return nlohmann::json{{"parties", settings.n_parties()},
                        {"mode", mode_name(mode)},
                        {"angles", std::move(angles)}}
      .dump();
}

SettingsTable settings_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const SettingMode mode = parse_mode(j.at("mode").get<std::string>());
  const auto& angles = j.at("angles");
  SettingsTable table;
  for (const auto& pair : angles) {
    if (pair.size() != 2) throw std::invalid_argument("settings JSON: need 2 settings per party");
    std::array<MeasurementSetting, 2> party;
    for (int i = 0; i < 2; ++i) {
      if (mode == SettingMode::Planar)
        party[i] = MeasurementSetting::planar(pair.at(i).get<double>());
      else
        party[i] = MeasurementSetting::bloch(pair.at(i).at(0).get<double>(),
                                             pair.at(i).at(1).get<double>());
    }
    table.parties.push_back(party);
  }
  if (table.n_parties() != j.at("parties").get<int>())
    throw std::invalid_argument("settings JSON: declared party count mismatch");
  return table;
}

BlochDecomposition2Q bloch_decompose(const DensityMatrix& rho) {
  if (rho.qubits != 2) throw std::invalid_argument("bloch_decompose: state must have 2 qubits");
  constexpr double kImagTol = 1e-12;

  const auto pauli_trace = [&](const ComplexMatrix& op) {
    Complex tr = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) tr += rho.mat(i, j) * op(j, i);
    if (std::abs(tr.imag()) > kImagTol)
      throw std::invalid_argument("bloch_decompose: non-real Pauli component");
    return tr.real();
  };

  BlochDecomposition2Q d;
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  for (int i = 0; i < 3; ++i) {
    d.r[i] = pauli_trace(kron(ComplexMatrix::pauli(i), eye));
    d.s[i] = pauli_trace(kron(eye, ComplexMatrix::pauli(i)));
    for (int j = 0; j < 3; ++j)
      d.t[i][j] = pauli_trace(kron(ComplexMatrix::pauli(i), ComplexMatrix::pauli(j)));
  }

  ComplexMatrix u(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += d.t[k][i] * d.t[k][j];
      u(i, j) = sum;
    }
  const std::vector<double> vals = herm_eigvals(u);
  for (int i = 0; i < 3; ++i) d.lambda_sq[i] = vals[i];
  return d;
}

DensityMatrix bloch_compose(const BlochDecomposition2Q& d) {
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  ComplexMatrix m = Complex(0.25) * kron(eye, eye);
  for (int i = 0; i < 3; ++i) {
    m += Complex(0.25 * d.r[i]) * kron(ComplexMatrix::pauli(i), eye);
    m += Complex(0.25 * d.s[i]) * kron(eye, ComplexMatrix::pauli(i));
    for (int j = 0; j < 3; ++j)
      m += Complex(0.25 * d.t[i][j]) * kron(ComplexMatrix::pauli(i), ComplexMatrix::pauli(j));
  }
  return DensityMatrix{2, std::move(m)};
}

NonlocalityResult chsh_max_horodecki(const DensityMatrix& rho) {
  if (rho.qubits != 2) throw std::invalid_argument("chsh_max_horodecki: state must have 2 qubits");
  const BlochDecomposition2Q d = bloch_decompose(rho);

  // Eigenvectors of U = T^T T give the right singular vectors of T.
  ComplexMatrix u(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += d.t[k][i] * d.t[k][j];
      u(i, j) = sum;
    }
  const HermEigenSystem eig = herm_eig(u);
  const double w1 = std::max(eig.values[0], 0.0);
  const double w2 = std::max(eig.values[1], 0.0);

  NonlocalityResult out;
  out.method = MaxMethod::HorodeckiExact;
  out.s_value = std::sqrt(w1 + w2);

  Vec3 r1{}, r2{};
  for (int k = 0; k < 3; ++k) {
    r1[k] = eig.vectors(k, 0).real();
    r2[k] = eig.vectors(k, 1).real();
  }
  const double sigma1 = std::sqrt(w1);
  const double sigma2 = std::sqrt(w2);

  Vec3 a1{1.0, 0.0, 0.0}, a2{0.0, 1.0, 0.0};
  Vec3 b1{1.0, 0.0, 0.0}, b2{0.0, 1.0, 0.0};
  if (sigma1 > 1e-9) {
    a1 = scaled(mat_vec(d.t, r1), 1.0 / sigma1);
    if (sigma2 > 1e-9) {
      a2 = scaled(mat_vec(d.t, r2), 1.0 / sigma2);
    } else {
      // Degenerate second direction: any unit vector orthogonal to a1 works.
      a2 = std::abs(a1[0]) < 0.9 ? Vec3{0.0, -a1[2], a1[1]} : Vec3{-a1[2], 0.0, a1[0]};
      a2 = scaled(a2, 1.0 / norm3(a2));
    }
    const double denom = std::sqrt(w1 + w2);
    for (int k = 0; k < 3; ++k) {
      b1[k] = (sigma1 * r1[k] + sigma2 * r2[k]) / denom;
      b2[k] = (sigma1 * r1[k] - sigma2 * r2[k]) / denom;
    }
  }
  out.settings.parties = {{unit_to_setting(a1), unit_to_setting(a2)},
                          {unit_to_setting(b1), unit_to_setting(b2)}};
  return out;
}

ComplexMatrix game_operator(const SettingsTable& settings) {
  const int n = settings.n_parties();
  if (n != 2 && n != 3)
    throw std::invalid_argument("game_operator: supported for 2 or 3 parties only");
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix op(dim);
  for (unsigned question = 0; question < dim; ++question) {
    ComplexMatrix term = settings.parties[0][(question >> (n - 1)) & 1].observable();
    for (int k = 1; k < n; ++k)
      term = kron(term, settings.parties[k][(question >> (n - 1 - k)) & 1].observable());
    const int sign = game_sign(std::popcount(question));
    op += Complex(static_cast<double>(sign)) * term;
  }
  op *= Complex(1.0 / static_cast<double>(std::size_t{1} << (n - 1)));
  return op;
}

double expectation(const DensityMatrix& rho, const SettingsTable& settings) {
  if (rho.qubits != settings.n_parties())
    throw std::invalid_argument("expectation: state and settings party count mismatch");
  const ComplexMatrix op = game_operator(settings);
  Complex tr = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j) tr += rho.mat(i, j) * op(j, i);
  if (std::abs(tr.imag()) > 1e-10)
    throw std::invalid_argument("expectation: imaginary residue exceeds tolerance");
  return tr.real();
}

namespace {

// Full-correlation Pauli tensor of rho: t[a1..aN] = Tr(rho sigma_a1 (x) ...).
// The game operator contains only full correlations, so this is all the
// optimizer objective needs.
struct CorrelationTensor {
  int parties = 0;
  std::vector<double> t;  // 3^parties entries, last axis fastest
};

CorrelationTensor correlation_tensor(const DensityMatrix& rho) {
  const int n = rho.qubits;
  CorrelationTensor ct;
  ct.parties = n;
  const int size = n == 2 ? 9 : 27;
  ct.t.resize(size);
  std::array<int, 3> axes{};
  for (int flat = 0; flat < size; ++flat) {
    int rem = flat;
    for (int k = n - 1; k >= 0; --k) {
      axes[k] = rem % 3;
      rem /= 3;
    }
    ComplexMatrix op = ComplexMatrix::pauli(axes[0]);
    for (int k = 1; k < n; ++k) op = kron(op, ComplexMatrix::pauli(axes[k]));
    Complex tr = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
      for (std::size_t j = 0; j < rho.dim(); ++j) tr += rho.mat(i, j) * op(j, i);
    ct.t[flat] = tr.real();
  }
  return ct;
}

// Game value for unit vectors u[party][setting][axis].
double game_value(const CorrelationTensor& ct, const double u[3][2][3]) {
  const int n = ct.parties;
  double total = 0.0;
  const unsigned questions = 1u << n;
  for (unsigned q = 0; q < questions; ++q) {
    const double* u0 = u[0][(q >> (n - 1)) & 1];
    const double* u1 = u[1][(q >> (n - 2)) & 1];
    double corr = 0.0;
    if (n == 2) {
      for (int a = 0; a < 3; ++a) {
        if (u0[a] == 0.0) continue;
        for (int b = 0; b < 3; ++b) corr += u0[a] * u1[b] * ct.t[a * 3 + b];
      }
    } else {
      const double* u2 = u[2][q & 1];
      for (int a = 0; a < 3; ++a) {
        if (u0[a] == 0.0) continue;
        for (int b = 0; b < 3; ++b) {
          const double w = u0[a] * u1[b];
          if (w == 0.0) continue;
          for (int c = 0; c < 3; ++c) corr += w * u2[c] * ct.t[a * 9 + b * 3 + c];
        }
      }
    }
    total += game_sign(std::popcount(q)) * corr;
  }
  return total / static_cast<double>(1u << (n - 1));
}

// Objective over the flat angle vector. Planar: phi per setting; Bloch:
// (theta, phi) per setting.
double game_value_at(const CorrelationTensor& ct, SettingMode mode, std::span<const double> x) {
  double u[3][2][3] = {};
  const int n = ct.parties;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < 2; ++i) {
      if (mode == SettingMode::Planar) {
        const double phi = x[2 * k + i];
        u[k][i][0] = std::cos(phi);
        u[k][i][1] = std::sin(phi);
        u[k][i][2] = 0.0;
      } else {
        const double theta = x[4 * k + 2 * i];
        const double phi = x[4 * k + 2 * i + 1];
        u[k][i][0] = std::sin(theta) * std::cos(phi);
        u[k][i][1] = std::sin(theta) * std::sin(phi);
        u[k][i][2] = std::cos(theta);
      }
    }
  }
  return game_value(ct, u);
}

SettingsTable settings_from_angles(int parties, SettingMode mode, std::span<const double> x) {
  SettingsTable table;
  for (int k = 0; k < parties; ++k) {
    std::array<MeasurementSetting, 2> party;
    for (int i = 0; i < 2; ++i) {
      if (mode == SettingMode::Planar)
        party[i] = MeasurementSetting::planar(wrap_angle(x[2 * k + i]));
      else
        party[i] = MeasurementSetting::bloch(wrap_angle(x[4 * k + 2 * i]),
                                             wrap_angle(x[4 * k + 2 * i + 1]));
    }
    table.parties.push_back(party);
  }
  return table;
}

std::vector<double> angles_of(const SettingsTable& settings, SettingMode mode) {
  std::vector<double> x;
  for (const auto& party : settings.parties)
    for (const MeasurementSetting& s : party) {
      if (mode == SettingMode::Bloch) x.push_back(s.theta);
      x.push_back(s.phi);
    }
  return x;
}

struct NmOutcome {
  std::vector<double> x;
  double fx = 0.0;
  bool converged = false;
};

// Plain Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink 0.5)
// minimizing f. Converged when the simplex f-spread falls below tol.
NmOutcome nelder_mead(const std::function<double(std::span<const double>)>& f,
                      std::span<const double> x0, double step, int max_iter, double tol) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<double>> pts(dim + 1, std::vector<double>(x0.begin(), x0.end()));
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step;
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  NmOutcome out;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];
    if (fv[worst] - fv[best] < tol) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const auto blend = [&](double coeff) {
      std::vector<double> p(dim);
      for (std::size_t k = 0; k < dim; ++k)
        p[k] = centroid[k] + coeff * (pts[worst][k] - centroid[k]);
      return p;
    };

    std::vector<double> reflected = blend(-1.0);
    const double fr = f(reflected);
    if (fr < fv[order[0]]) {
      std::vector<double> expanded = blend(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = std::move(expanded);
        fv[worst] = fe;
      } else {
        pts[worst] = std::move(reflected);
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = std::move(reflected);
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      std::vector<double> contracted = blend(outside ? -0.5 : 0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = std::move(contracted);
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < dim; ++k)
            pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i)
    if (fv[i] < fv[best]) best = i;
  out.x = pts[best];
  out.fx = fv[best];
  return out;
}

std::vector<double> reduced(std::span<const double> x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = wrap_angle(x[i]);
  return r;
}

// Order-independent merge: larger value wins; exact ties break toward the
// lexicographically smaller reduced angle vector.
bool better(double value, const std::vector<double>& angles, double best_value,
            const std::vector<double>& best_angles) {
  if (value != best_value) return value > best_value;
  return angles < best_angles;
}

}  // namespace

NonlocalityResult maximize(const DensityMatrix& rho, SettingMode mode,
                           const MaximizeOptions& options) {
  const int n = rho.qubits;
  if (n != 2 && n != 3) throw std::invalid_argument("maximize: supported for 2 or 3 qubits only");
  const CorrelationTensor ct = correlation_tensor(rho);
  const std::size_t dim = static_cast<std::size_t>(mode == SettingMode::Planar ? 2 * n : 4 * n);

  const auto objective = [&](std::span<const double> x) { return -game_value_at(ct, mode, x); };

  double best_value = -1e300;
  std::vector<double> best_angles;
  bool best_converged = false;

  const auto consider = [&](const NmOutcome& run) {
    const std::vector<double> angles = reduced(run.x);
    if (better(-run.fx, angles, best_value, best_angles)) {
      best_value = -run.fx;
      best_angles = angles;
      best_converged = run.converged;
    }
  };

  if (options.warm_start) {
    const std::vector<double> x0 = angles_of(*options.warm_start, mode);
    if (x0.size() == dim)
      consider(nelder_mead(objective, x0, 0.1, options.max_iterations, options.tolerance));
  }
  for (int start = 0; start < options.starts; ++start) {
    CounterRng rng(options.seed, static_cast<std::uint64_t>(start));
    std::vector<double> x0(dim);
    for (double& v : x0) v = kTwoPi * rng.uniform();
    consider(nelder_mead(objective, x0, 0.5, options.max_iterations, options.tolerance));
  }
  // Polish the winner with a tight simplex.
  consider(nelder_mead(objective, best_angles, 0.05, options.max_iterations, options.tolerance));

  NonlocalityResult out;
  out.s_value = best_value;
  out.settings = settings_from_angles(n, mode, best_angles);
  out.method = MaxMethod::Optimized;
  out.converged = best_converged;
  return out;
}

SettingsTable mnms3_optimal_settings(double f) {
  if (!(f >= 0.0 && f <= 0.0625))
    throw std::domain_error("mnms3_optimal_settings: f must lie in [0, 1/16]");
  const double theta = std::acos(std::sqrt((1.0 - 8.0 * f) / (2.0 - 24.0 * f)));
  SettingsTable table;
  table.parties = {
      {MeasurementSetting::planar(-theta), MeasurementSetting::planar(theta)},
      {MeasurementSetting::planar(-theta), MeasurementSetting::planar(theta)},
      {MeasurementSetting::planar(theta), MeasurementSetting::planar(kPi - theta)},
  };
  return table;
}

double critical_visibility(const DensityMatrix& rho, SettingMode mode,
                           const MaximizeOptions& options) {
  const int n = rho.qubits;
  if (n != 2 && n != 3)
    throw std::invalid_argument("critical_visibility: supported for 2 or 3 qubits only");

  SettingsTable warm;
  const auto max_value = [&](const DensityMatrix& state) {
    if (state.qubits == 2) return chsh_max_horodecki(state).s_value;
    MaximizeOptions inner = options;
    inner.starts = std::min(options.starts, 8);
    if (warm.n_parties() == n) inner.warm_start = warm;
    const NonlocalityResult r = maximize(state, mode, inner);
    warm = r.settings;
    return r.s_value;
  };

  if (max_value(rho) <= 1.0)
    throw std::domain_error("critical_visibility: state is local (max game value <= 1)");

  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (max_value(mix_white_noise(rho, mid)) >= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mnms
