#include "mnms/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace mnms {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;
constexpr double kMemsSeam = 16.0 / 27.0;
constexpr double kTerraceStart = 9.0 / 14.0;

[[noreturn]] void domain_fail(CurveTag tag, double e_l) {
  throw std::domain_error("curve " + curve_name(tag) + ": E_L = " + std::to_string(e_l) +
                          " outside domain");
}

}  // namespace

CurveTag parse_curve(const std::string& name) {
  if (name == "mnms2") return CurveTag::Mnms2;
  if (name == "mems2" || name == "mems") return CurveTag::Mems2;
  if (name == "min2") return CurveTag::Min2;
  if (name == "planar2") return CurveTag::Planar2;
  if (name == "mnms3") return CurveTag::Mnms3;
  throw std::domain_error("unknown curve family: " + name);
}

std::string curve_name(CurveTag tag) {
  switch (tag) {
    case CurveTag::Mnms2: return "mnms2";
    case CurveTag::Mems2: return "mems2";
    case CurveTag::Min2: return "min2";
    case CurveTag::Planar2: return "planar2";
    case CurveTag::Mnms3: return "mnms3";
  }
  return "?";
}

std::pair<double, double> curve_domain(CurveTag tag) {
  switch (tag) {
    case CurveTag::Mnms2: return {0.0, kTwoThirds};
    case CurveTag::Mems2: return {0.0, 8.0 / 9.0};
    case CurveTag::Min2: return {0.0, kTwoThirds};
    case CurveTag::Planar2: return {kTwoThirds, 1.0};
    case CurveTag::Mnms3: return {0.0, 6.0 / 7.0};
  }
  return {0.0, 0.0};
}

double curve_value(CurveTag tag, double e_l) {
  const auto [lo, hi] = curve_domain(tag);
  if (!(e_l >= lo && e_l <= hi)) domain_fail(tag, e_l);
  switch (tag) {
    case CurveTag::Mnms2:
      return std::sqrt(2.0 - 1.5 * e_l);
    case CurveTag::Mems2:
      if (e_l <= kMemsSeam) return (std::numbers::sqrt2 + std::sqrt(2.0 - 3.0 * e_l)) / 2.0;
      return std::sqrt(25.0 - 27.0 * e_l - std::min(1.0, 1.5 * (8.0 - 9.0 * e_l))) / 3.0;
    case CurveTag::Min2:
      return std::sqrt(1.0 - 1.5 * e_l);
    case CurveTag::Planar2:
      return std::sqrt(3.0 - 3.0 * e_l);
    case CurveTag::Mnms3: {
      if (e_l >= kTerraceStart) return 1.0;
      const double w = 6.0 - std::sqrt(6.0) * std::sqrt(6.0 - 7.0 * e_l);
      return std::pow(1.0 - w / 6.0, 1.5) / std::sqrt(0.5 - w / 8.0);
    }
  }
  domain_fail(tag, e_l);
}

FrontierPoint family_point(CurveTag tag, double parameter) {
  FrontierPoint point;
  point.source = "family:" + curve_name(tag);
  point.parameter = parameter;

  DensityMatrix rho;
  switch (tag) {
    case CurveTag::Mnms2: rho = make_state({StateTag::Mnms2, parameter}); break;
    case CurveTag::Mems2: rho = make_state({StateTag::Mems, parameter}); break;
    case CurveTag::Min2: rho = make_state({StateTag::DiagMix, parameter}); break;
    case CurveTag::Planar2: rho = make_state({StateTag::Planar2, parameter}); break;
    case CurveTag::Mnms3: rho = make_state({StateTag::Mnms3, parameter}); break;
  }
  point.e_l = linear_entropy(rho);
  if (tag == CurveTag::Mnms3) {
    // Inside the terrace (f > 1/16) the optimum sits at the closed-form
    // boundary angle theta = 0.
    point.s = expectation(rho, mnms3_optimal_settings(std::min(parameter, 0.0625)));
  } else {
    point.s = chsh_max_horodecki(rho).s_value;
  }
  return point;
}

DensityMatrix sample_state(int qubits, CounterRng& rng, int rank) {
  if (qubits < 1 || qubits > 4) throw std::domain_error("sample_state: 1 to 4 qubits");
  const std::size_t d = std::size_t{1} << qubits;
  const std::size_t k = rank <= 0 ? d : static_cast<std::size_t>(rank);

  // G G^dagger from a d x k complex Ginibre factor, normalized to unit trace.
  std::vector<Complex> g(d * k);
  for (Complex& z : g) z = Complex(rng.gaussian(), rng.gaussian());
  ComplexMatrix m(d);
  double tr = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < k; ++c) acc += g[i * k + c] * std::conj(g[j * k + c]);
      m(i, j) = acc;
      if (i == j) tr += acc.real();
    }
  m *= Complex(1.0 / tr);
  return DensityMatrix{qubits, std::move(m)};
}

DensityMatrix sample_state(int qubits, std::uint64_t seed, std::uint64_t index, int rank) {
  CounterRng rng(seed, index);
  return sample_state(qubits, rng, rank);
}

int max_threads() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NONLOCAL_THREADS")) {
    const long requested = std::strtol(env, nullptr, 10);
    if (requested >= 1) return static_cast<int>(std::min<long>(requested, hw));
  }
  return static_cast<int>(hw);
}

namespace {

// Runs fn(i) for i in [0, count) across workers; any exception is rethrown.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
  const int workers = static_cast<int>(std::min<std::int64_t>(max_threads(), count));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<FrontierPoint> scan(const ScanConfig& config) {
  if (config.qubits != 2 && config.qubits != 3)
    throw std::domain_error("scan: 2 or 3 qubits only");
  if (config.samples < 1) throw std::domain_error("scan: need at least one sample");

  std::vector<FrontierPoint> points(static_cast<std::size_t>(config.samples));
  parallel_for(config.samples, [&](std::int64_t i) {
    const auto index = static_cast<std::uint64_t>(i);
    const DensityMatrix rho = sample_state(config.qubits, config.seed, index, config.rank);
    FrontierPoint& point = points[static_cast<std::size_t>(i)];
    point.e_l = linear_entropy(rho);
    point.parameter = static_cast<double>(i);
    if (config.qubits == 2) {
      point.s = chsh_max_horodecki(rho).s_value;
      point.converged = true;
    } else {
      MaximizeOptions options;
      options.starts = config.optimizer_starts;
      options.seed = CounterRng::mix64(config.seed ^ (index * 0x9e3779b97f4a7c15ULL));
      const NonlocalityResult r = maximize(rho, config.mode, options);
      point.s = r.s_value;
      point.converged = r.converged;
    }
    point.source = point.converged ? "sampled" : "sampled:nonconverged";
  });

  // Bloch audit of the highest planar scores: envelope violations, if any,
  // would surface at the top of the scatter.
  if (config.qubits == 3 && config.mode == SettingMode::Planar &&
      config.bloch_audit_fraction > 0.0) {
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a].s > points[b].s; });
    const auto audits = static_cast<std::int64_t>(std::max<double>(
        1.0, std::ceil(config.bloch_audit_fraction * static_cast<double>(points.size()))));
    parallel_for(std::min<std::int64_t>(audits, static_cast<std::int64_t>(order.size())),
                 [&](std::int64_t rank_idx) {
                   FrontierPoint& point = points[order[static_cast<std::size_t>(rank_idx)]];
                   const auto index = static_cast<std::uint64_t>(point.parameter);
                   const DensityMatrix rho =
                       sample_state(config.qubits, config.seed, index, config.rank);
                   MaximizeOptions options;
                   options.starts = config.optimizer_starts;
                   options.seed = CounterRng::mix64(config.seed ^ (index * 0xda942042e4dd58b5ULL));
                   const NonlocalityResult r = maximize(rho, SettingMode::Bloch, options);
                   if (r.s_value > point.s) {
                     point.s = r.s_value;
                     point.converged = r.converged;
                     point.source = point.converged ? "sampled" : "sampled:nonconverged";
                   }
                 });
  }
  return points;
}

void emit_csv(const std::vector<FrontierPoint>& points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path.string());
  out << "e_l,s,source,parameter\n";
  char buffer[96];
  for (const FrontierPoint& p : points) {
    std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g,%s,%.17g", p.e_l, p.s, p.source.c_str(),
                  p.parameter);
    out << buffer << '\n';
  }
  if (!out.good()) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

}  // namespace mnms
