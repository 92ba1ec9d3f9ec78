#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mnms/games.hpp"
#include "mnms/rng.hpp"

namespace mnms {

/// Analytic frontier curves in the (E_L, S) plane.
///   Mnms2   sqrt(2 - 3 E_L / 2)                 on [0, 2/3]
///   Mems2   two-branch form with seam at 16/27  on [0, 8/9]
///   Min2    sqrt(1 - 3 E_L / 2)                 on [0, 2/3]
///   Planar2 sqrt(3 - 3 E_L)                     on [2/3, 1]
///   Mnms3   closed form with terrace S = 1      on [0, 6/7]
enum class CurveTag { Mnms2, Mems2, Min2, Planar2, Mnms3 };

CurveTag parse_curve(const std::string& name);
std::string curve_name(CurveTag tag);
std::pair<double, double> curve_domain(CurveTag tag);

/// Curve height at e_l; throws std::domain_error outside the curve domain.
double curve_value(CurveTag tag, double e_l);

struct FrontierPoint {
  double e_l = 0.0;
  double s = 0.0;
  std::string source;      // "sampled", "sampled:nonconverged", "family:...", "curve:..."
  double parameter = 0.0;  // family/curve parameter, or the sample index
  bool converged = true;
};

/// Constructs the family state for the given parameter and evaluates its
/// exact (E_L, S) pair; the point lies on curve_value to 1e-9.
FrontierPoint family_point(CurveTag tag, double parameter);

/// Hilbert-Schmidt random density matrix G G^dagger / Tr(G G^dagger) with G
/// a 2^qubits x rank standard complex Gaussian (rank 0 means full rank).
DensityMatrix sample_state(int qubits, CounterRng& rng, int rank = 0);
DensityMatrix sample_state(int qubits, std::uint64_t seed, std::uint64_t index, int rank = 0);

struct ScanConfig {
  int qubits = 2;
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  SettingMode mode = SettingMode::Planar;  // three-qubit optimizer mode
  int optimizer_starts = 64;
  double bloch_audit_fraction = 0.01;  // re-check this share of top points with Bloch settings
  int rank = 0;                        // Ginibre factor columns, 0 = full
};

/// (E_L, S_max) per sample: exact Horodecki values for two qubits, optimized
/// Svetlichny values for three. Reproducible for a fixed seed regardless of
/// thread count; points arrive in sample order.
std::vector<FrontierPoint> scan(const ScanConfig& config);

/// CSV with header e_l,s,source,parameter and 17 significant digits.
void emit_csv(const std::vector<FrontierPoint>& points, const std::filesystem::path& path);

/// Worker cap honoring the NONLOCAL_THREADS environment variable.
int max_threads();

}  // namespace mnms
