#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mnms/frontier.hpp"
#include "test_helpers.hpp"

using namespace mnms;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE_BEGIN("frontier");

TEST_CASE("curve endpoints and seams") {
  CHECK(std::abs(curve_value(CurveTag::Mnms2, 0.0) - kSqrt2) < 1e-15);
  CHECK(std::abs(curve_value(CurveTag::Mnms2, 2.0 / 3.0) - 1.0) < 1e-15);
  CHECK(std::abs(curve_value(CurveTag::Min2, 0.0) - 1.0) < 1e-15);
  CHECK(curve_value(CurveTag::Min2, 2.0 / 3.0) < 1e-7);
  CHECK(std::abs(curve_value(CurveTag::Planar2, 2.0 / 3.0) - 1.0) < 1e-15);
  CHECK(std::abs(curve_value(CurveTag::Planar2, 1.0)) < 1e-15);

  // MEMS branch seam at 16/27: both formulas give 2 sqrt(2) / 3.
  const double seam = 16.0 / 27.0;
  const double left = (kSqrt2 + std::sqrt(2.0 - 3.0 * seam)) / 2.0;
  const double right =
      std::sqrt(25.0 - 27.0 * seam - std::min(1.0, 1.5 * (8.0 - 9.0 * seam))) / 3.0;
  CHECK(std::abs(left - right) < 1e-12);
  CHECK(std::abs(curve_value(CurveTag::Mems2, seam) - 2.0 * kSqrt2 / 3.0) < 1e-12);

  // MNMS3: sqrt(2) at the pure end, 1 at the terrace and its far edge.
  CHECK(std::abs(curve_value(CurveTag::Mnms3, 0.0) - kSqrt2) < 1e-15);
  const double terrace = 9.0 / 14.0;
  CHECK(std::abs(curve_value(CurveTag::Mnms3, terrace) - 1.0) < 1e-15);
  CHECK(std::abs(curve_value(CurveTag::Mnms3, terrace - 1e-13) - 1.0) < 1e-12);
  CHECK(std::abs(curve_value(CurveTag::Mnms3, 6.0 / 7.0) - 1.0) < 1e-15);

  CHECK_THROWS_AS((void)curve_value(CurveTag::Mnms2, 0.7), std::domain_error);
  CHECK_THROWS_AS((void)curve_value(CurveTag::Mnms3, 0.9), std::domain_error);
}

TEST_CASE("family points land on their curves") {
  const auto on_curve = [](CurveTag tag, double lo, double hi) {
    for (int k = 0; k < 50; ++k) {
      const double p = lo + (hi - lo) * static_cast<double>(k) / 49.0;
      const FrontierPoint point = family_point(tag, p);
      CAPTURE(curve_name(tag));
      CAPTURE(p);
      CHECK(std::abs(point.s - curve_value(tag, point.e_l)) < 1e-9);
    }
  };
  on_curve(CurveTag::Mnms2, 0.0, 1.0);
  on_curve(CurveTag::Mems2, 0.0, 1.0);
  on_curve(CurveTag::Min2, 0.0, 1.0);
  on_curve(CurveTag::Planar2, 0.0, 1.0);
  on_curve(CurveTag::Mnms3, 0.0, 0.125);
}

TEST_CASE("named frontier points") {
  const FrontierPoint bell = family_point(CurveTag::Mnms2, 1.0);
  CHECK(std::abs(bell.e_l) < 1e-15);
  CHECK(std::abs(bell.s - kSqrt2) < 1e-12);

  const FrontierPoint b = family_point(CurveTag::Mnms3, 1.0 / 16.0);
  CHECK(std::abs(b.e_l - 9.0 / 14.0) < 1e-15);
  CHECK(std::abs(b.s - 1.0) < 1e-12);

  const FrontierPoint mems = family_point(CurveTag::Mems2, 2.0 / 3.0);
  CHECK(std::abs(mems.e_l - 16.0 / 27.0) < 1e-15);
  CHECK(std::abs(mems.s - 2.0 * kSqrt2 / 3.0) < 1e-12);
}

TEST_CASE("sampler basics") {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const DensityMatrix rho = sample_state(2, 42, i);
    CHECK(std::abs(rho.mat.trace().real() - 1.0) < 1e-12);
    CHECK(rho.mat.hermiticity_defect() < 1e-14);
    CHECK(validate(rho).passed());
  }
  const DensityMatrix a = sample_state(3, 42, 7);
  const DensityMatrix b = sample_state(3, 42, 7);
  CHECK(a.mat.max_abs_diff(b.mat) == 0.0);
  const DensityMatrix c = sample_state(3, 43, 7);
  CHECK(c.mat.max_abs_diff(a.mat) > 1e-3);

  // Rank-deficient knob produces valid states of lower purity on average.
  const DensityMatrix low = sample_state(2, 9, 0, 1);
  CHECK(validate(low).passed());
  CHECK(std::abs(purity(low) - 1.0) < 1e-12);  // rank-1 factor means pure
}

TEST_CASE("sampler mean purity matches the ensemble value") {
  // Hilbert-Schmidt mean purity for d = 4 is 2d/(d^2+1) = 8/17.
  double total = 0.0;
  const int samples = 10000;
  for (std::uint64_t i = 0; i < samples; ++i) total += purity(sample_state(2, 0x9e, i));
  const double mean = total / samples;
  CHECK(std::abs(mean - 8.0 / 17.0) < 0.02 * 8.0 / 17.0);
}

TEST_CASE("two-qubit scan respects the envelope") {
  ScanConfig config;
  config.qubits = 2;
  config.samples = 800;
  config.seed = 0x51;
  const std::vector<FrontierPoint> points = scan(config);
  REQUIRE(points.size() == 800);
  for (const FrontierPoint& p : points) {
    if (p.e_l <= 2.0 / 3.0) {
      CHECK(p.s <= curve_value(CurveTag::Mnms2, p.e_l) + 1e-9);
      CHECK(p.s >= curve_value(CurveTag::Min2, p.e_l) - 1e-9);
    } else {
      CHECK(p.s <= curve_value(CurveTag::Planar2, p.e_l) + 1e-9);
    }
  }
  // Deterministic under different thread counts: order is by sample index.
  const std::vector<FrontierPoint> again = scan(config);
  for (std::size_t k = 0; k < points.size(); ++k) {
    CHECK(points[k].e_l == again[k].e_l);
    CHECK(points[k].s == again[k].s);
  }
}

TEST_CASE("three-qubit scan respects the envelope") {
  ScanConfig config;
  config.qubits = 3;
  config.samples = 40;
  config.seed = 0x52;
  config.optimizer_starts = 24;
  const std::vector<FrontierPoint> points = scan(config);
  for (const FrontierPoint& p : points) {
    if (!p.converged) continue;
    const double bound = p.e_l < 9.0 / 14.0 ? curve_value(CurveTag::Mnms3, p.e_l) : 1.0;
    CHECK(p.s <= bound + 1e-6);
  }
}

TEST_CASE("csv format contract") {
  const std::filesystem::path path = std::filesystem::temp_directory_path() / "mnms_points.csv";

  emit_csv({}, path);
  CHECK(read_lines(path) == std::vector<std::string>{"e_l,s,source,parameter"});

  const FrontierPoint point = family_point(CurveTag::Mnms2, 0.25);
  emit_csv({point}, path);
  const std::vector<std::string> lines = read_lines(path);
  REQUIRE(lines.size() == 2);

  // Round-trip parse is bit exact.
  double e = 0.0, s = 0.0, param = 0.0;
  char source[64] = {};
  REQUIRE(std::sscanf(lines[1].c_str(), "%lg,%lg,%63[^,],%lg", &e, &s, source, &param) == 4);
  CHECK(e == point.e_l);
  CHECK(s == point.s);
  CHECK(param == point.parameter);
  CHECK(std::string(source) == "family:mnms2");

  std::filesystem::remove(path);
  CHECK_THROWS_AS(emit_csv({point}, "/nonexistent-dir/out.csv"), std::runtime_error);
}

TEST_SUITE_END();
