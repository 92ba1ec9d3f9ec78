#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnms/states.hpp"

namespace mnms {

enum class SettingMode { Planar, Bloch };

SettingMode parse_mode(const std::string& name);
std::string mode_name(SettingMode mode);

/// One measurement direction. Planar settings live in the xy-plane
/// (theta = pi/2), so the observable is cos(phi) sigma_x + sin(phi) sigma_y.
struct MeasurementSetting {
  SettingMode mode = SettingMode::Planar;
  double theta = std::numbers::pi / 2.0;
  double phi = 0.0;

  static MeasurementSetting planar(double phi);
  static MeasurementSetting bloch(double theta, double phi);

  std::array<double, 3> direction() const;  // unit Bloch vector
  ComplexMatrix observable() const;         // direction . sigma
};

/// Two settings per party, indexed by the question bit.
struct SettingsTable {
  std::vector<std::array<MeasurementSetting, 2>> parties;
  int n_parties() const { return static_cast<int>(parties.size()); }
};

std::string settings_to_json(const SettingsTable& settings);
SettingsTable settings_from_json(const std::string& text);

/// Sign (-1)^floor(T/2) attached to a question with T set bits; this fixes
/// both the game operator and the win criterion.
inline int game_sign(int question_ones) { return (question_ones / 2) % 2 == 0 ? 1 : -1; }

struct BlochDecomposition2Q {
  std::array<double, 3> r{};                 // Tr(rho sigma_i (x) I)
  std::array<double, 3> s{};                 // Tr(rho I (x) sigma_j)
  std::array<std::array<double, 3>, 3> t{};  // Tr(rho sigma_m (x) sigma_n)
  std::array<double, 3> lambda_sq{};         // eigenvalues of T^T T, descending
};

enum class MaxMethod { HorodeckiExact, Optimized, ClosedForm };

/// Game values use the normalized convention: classical bound 1, quantum
/// maximum sqrt(2). Multiply by 2^(N-1) for the raw convention.
struct NonlocalityResult {
  double s_value = 0.0;
  SettingsTable settings;
  MaxMethod method = MaxMethod::Optimized;
  bool converged = true;
};

/// Local vectors and correlation matrix of a two-qubit state. Rebuilding the
/// state from the decomposition reproduces the input to 1e-12.
BlochDecomposition2Q bloch_decompose(const DensityMatrix& rho);

/// Inverse of bloch_decompose (ignores lambda_sq).
DensityMatrix bloch_compose(const BlochDecomposition2Q& d);

/// Exact CHSH maximum sqrt(lambda1^2 + lambda2^2) with the analytic argmax
/// settings attached.
NonlocalityResult chsh_max_horodecki(const DensityMatrix& rho);

/// The Bell/Svetlichny operator (1/2^(N-1)) sum_J sign(J) A_{1,i1} (x) ...
/// for N in {2, 3}.
ComplexMatrix game_operator(const SettingsTable& settings);

/// Tr(rho * game_operator(settings)); the imaginary residue must stay
/// below 1e-10.
double expectation(const DensityMatrix& rho, const SettingsTable& settings);

struct MaximizeOptions {
  int starts = 64;           // uniformly random restarts
  int max_iterations = 2000; // Nelder-Mead budget per start
  double tolerance = 1e-10;  // simplex convergence tolerance
  std::uint64_t seed = 0;
  std::optional<SettingsTable> warm_start;  // extra initial point when set
};

/// Multi-start Nelder-Mead over all setting angles (2N parameters in Planar
/// mode, 4N in Bloch). Deterministic for a fixed seed; ties between equal
/// maxima break lexicographically on the angle vector.
NonlocalityResult maximize(const DensityMatrix& rho, SettingMode mode,
                           const MaximizeOptions& options = {});

/// Closed-form optimal planar settings for the three-qubit MNMS family,
/// valid for f in [0, 1/16] where theta = arccos sqrt((1-8f)/(2-24f)).
SettingsTable mnms3_optimal_settings(double f);

/// Smallest visibility v at which v*rho + (1-v) I/d stops violating the
/// classical bound, found by bisection. Throws std::domain_error when rho
/// itself is local.
double critical_visibility(const DensityMatrix& rho, SettingMode mode = SettingMode::Planar,
                           const MaximizeOptions& options = {});

}  // namespace mnms
