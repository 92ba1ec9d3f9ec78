#include <doctest.h>

#include <cmath>

#include "mnms/frontier.hpp"
#include "mnms/nonlocality.hpp"
#include "test_helpers.hpp"

using namespace mnms;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

SettingsTable bell_planar_settings() {
  SettingsTable t;
  t.parties = {{MeasurementSetting::planar(0.0), MeasurementSetting::planar(kPi / 2.0)},
               {MeasurementSetting::planar(7.0 * kPi / 4.0), MeasurementSetting::planar(kPi / 4.0)}};
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("nonlocality");

TEST_CASE("bloch decomposition of reference states") {
  const BlochDecomposition2Q bell = bloch_decompose(make_state({StateTag::BellPhiPlus}));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(bell.r[i]) < 1e-14);
    CHECK(std::abs(bell.s[i]) < 1e-14);
  }
  CHECK(std::abs(bell.t[0][0] - 1.0) < 1e-14);
  CHECK(std::abs(bell.t[1][1] + 1.0) < 1e-14);
  CHECK(std::abs(bell.t[2][2] - 1.0) < 1e-14);
  for (double v : bell.lambda_sq) CHECK(std::abs(v - 1.0) < 1e-12);

  const BlochDecomposition2Q mixed =
      bloch_decompose(mix_white_noise(make_state({StateTag::BellPhiPlus}), 0.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(mixed.t[i][j]) < 1e-14);

  // The physical MNMS matrix carries T = diag(1, -gamma, gamma): completing
  // the diagonal of the bare correlation core adds the zz component.
  const double gamma = 0.6;
  const BlochDecomposition2Q mnms = bloch_decompose(make_state({StateTag::Mnms2, gamma}));
  CHECK(std::abs(mnms.t[0][0] - 1.0) < 1e-14);
  CHECK(std::abs(mnms.t[1][1] + gamma) < 1e-14);
  CHECK(std::abs(mnms.t[2][2] - gamma) < 1e-14);
  CHECK(std::abs(mnms.lambda_sq[0] - 1.0) < 1e-12);
  CHECK(std::abs(mnms.lambda_sq[1] - gamma * gamma) < 1e-12);
  CHECK(std::abs(mnms.lambda_sq[2] - gamma * gamma) < 1e-12);
}

TEST_CASE("property: decomposition reconstructs the state") {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const DensityMatrix rho = sample_state(2, 0xb10c, i);
    const DensityMatrix rebuilt = bloch_compose(bloch_decompose(rho));
    CHECK(rebuilt.mat.max_abs_diff(rho.mat) < 1e-12);
  }
}

TEST_CASE("bloch decomposition rejects other sizes") {
  CHECK_THROWS_AS((void)bloch_decompose(make_state({StateTag::Ghz})), std::invalid_argument);
}

TEST_CASE("horodecki values of reference states") {
  CHECK(std::abs(chsh_max_horodecki(make_state({StateTag::BellPhiPlus})).s_value - kSqrt2) <
        1e-12);
  CHECK(std::abs(chsh_max_horodecki(make_state({StateTag::Mnms2, 0.8})).s_value -
                 std::sqrt(1.64)) < 1e-12);
  CHECK(chsh_max_horodecki(mix_white_noise(make_state({StateTag::BellPhiPlus}), 0.0)).s_value <
        1e-12);
  for (double p : {0.0, 0.2, 0.5, 0.9, 1.0})
    CHECK(std::abs(chsh_max_horodecki(make_state({StateTag::DiagMix, p})).s_value -
                   std::abs(2.0 * p - 1.0)) < 1e-12);
}

TEST_CASE("horodecki argmax settings achieve the bound") {
  for (std::uint64_t i = 0; i < 25; ++i) {
    const DensityMatrix rho = sample_state(2, 0xcafe, i);
    const NonlocalityResult r = chsh_max_horodecki(rho);
    CHECK(std::abs(expectation(rho, r.settings) - r.s_value) < 1e-9);
  }
}

TEST_CASE("game operator matches the CHSH form on the Bell state") {
  const DensityMatrix bell = make_state({StateTag::BellPhiPlus});
  CHECK(std::abs(expectation(bell, bell_planar_settings()) - kSqrt2) < 1e-12);
}

TEST_CASE("three-party operator sign pattern") {
  CounterRng rng(17);
  SettingsTable settings;
  for (int k = 0; k < 3; ++k)
    settings.parties.push_back({MeasurementSetting::planar(2.0 * kPi * rng.uniform()),
                                MeasurementSetting::planar(2.0 * kPi * rng.uniform())});
  // + for questions 111, 112, 121, 211 and - for 122, 212, 221, 222,
  // assembled term by term.
  ComplexMatrix expected(8);
  const int signs[8] = {+1, +1, +1, -1, +1, -1, -1, -1};  // indexed by question bits
  for (unsigned q = 0; q < 8; ++q) {
    const ComplexMatrix term =
        kron(kron(settings.parties[0][(q >> 2) & 1].observable(),
                  settings.parties[1][(q >> 1) & 1].observable()),
             settings.parties[2][q & 1].observable());
    expected += Complex(0.25 * signs[q]) * term;
  }
  CHECK(game_operator(settings).max_abs_diff(expected) < 1e-14);
  CHECK(std::abs(game_operator(settings).trace()) < 1e-14);
}

TEST_CASE("expectation anchors for the mnms3 family") {
  CHECK(std::abs(expectation(make_state({StateTag::Ghz}), mnms3_optimal_settings(0.0)) - kSqrt2) <
        1e-12);
  const double f = 1.0 / 32.0;
  const double expected = std::pow(0.75, 1.5) / std::sqrt(5.0 / 16.0);
  CHECK(std::abs(expectation(make_state({StateTag::Mnms3, f}), mnms3_optimal_settings(f)) -
                 expected) < 1e-12);
  const DensityMatrix noise = mix_white_noise(make_state({StateTag::Ghz}), 0.0);
  CHECK(std::abs(expectation(noise, mnms3_optimal_settings(0.01))) < 1e-13);
}

TEST_CASE("mnms3 optimal settings") {
  const SettingsTable at0 = mnms3_optimal_settings(0.0);
  CHECK(std::abs(at0.parties[0][1].phi - kPi / 4.0) < 1e-14);
  CHECK(std::abs(at0.parties[2][1].phi - 3.0 * kPi / 4.0) < 1e-14);
  const SettingsTable at16 = mnms3_optimal_settings(1.0 / 16.0);
  CHECK(std::abs(at16.parties[0][1].phi) < 1e-14);
  CHECK(std::abs(at16.parties[2][1].phi - kPi) < 1e-14);
  CHECK_THROWS_AS((void)mnms3_optimal_settings(0.07), std::domain_error);
  CHECK_THROWS_AS((void)mnms3_optimal_settings(-0.01), std::domain_error);

  for (double f : {0.0, 1.0 / 64.0, 1.0 / 32.0, 3.0 / 64.0}) {
    const double closed = std::pow(1.0 - 8.0 * f, 1.5) / std::sqrt(0.5 - 6.0 * f);
    CHECK(std::abs(expectation(make_state({StateTag::Mnms3, f}), mnms3_optimal_settings(f)) -
                   closed) < 1e-9);
  }
}

TEST_CASE("maximize reaches the known maxima") {
  MaximizeOptions options;
  options.seed = 3;
  const NonlocalityResult ghz = maximize(make_state({StateTag::Ghz}), SettingMode::Planar, options);
  CHECK(ghz.converged);
  CHECK(std::abs(ghz.s_value - kSqrt2) < 1e-6);
  CHECK(std::abs(expectation(make_state({StateTag::Ghz}), ghz.settings) - ghz.s_value) < 1e-9);

  const NonlocalityResult terrace =
      maximize(make_state({StateTag::Mnms3, 1.0 / 16.0}), SettingMode::Planar, options);
  CHECK(std::abs(terrace.s_value - 1.0) < 1e-6);
}

TEST_CASE("property: optimizer agrees with the exact CHSH maximum") {
  MaximizeOptions options;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const DensityMatrix rho = sample_state(2, 0x0dd, i);
    options.seed = 100 + i;
    const NonlocalityResult r = maximize(rho, SettingMode::Bloch, options);
    CHECK(std::abs(r.s_value - chsh_max_horodecki(rho).s_value) < 1e-6);
  }
}

TEST_CASE("property: planar settings suffice on the mnms3 family") {
  MaximizeOptions options;
  options.seed = 5;
  for (double f : {0.0, 0.02, 0.05, 1.0 / 16.0, 0.1}) {
    const DensityMatrix rho = make_state({StateTag::Mnms3, f});
    const double planar = maximize(rho, SettingMode::Planar, options).s_value;
    const double bloch = maximize(rho, SettingMode::Bloch, options).s_value;
    CHECK(bloch - planar < 1e-6);
  }
}

TEST_CASE("property: game value is invariant under local unitaries") {
  CounterRng rng(0x10ca1);
  for (std::uint64_t i = 0; i < 6; ++i) {
    const DensityMatrix rho = sample_state(2, 0x10ca2, i);
    const ComplexMatrix u = kron(test::random_unitary(2, rng), test::random_unitary(2, rng));
    const DensityMatrix rotated = test::conjugated(rho, u);
    CHECK(std::abs(chsh_max_horodecki(rho).s_value - chsh_max_horodecki(rotated).s_value) < 1e-9);
  }
  // One three-qubit spot check through the optimizer.
  const DensityMatrix rho = make_state({StateTag::Mnms3, 0.02});
  const ComplexMatrix u = kron(kron(test::random_unitary(2, rng), test::random_unitary(2, rng)),
                               test::random_unitary(2, rng));
  MaximizeOptions options;
  options.seed = 21;
  const double base = maximize(rho, SettingMode::Bloch, options).s_value;
  const double rotated = maximize(test::conjugated(rho, u), SettingMode::Bloch, options).s_value;
  CHECK(std::abs(base - rotated) < 1e-6);
}

TEST_CASE("property: expectation is linear in the state") {
  CounterRng rng(0x11);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const DensityMatrix a = sample_state(2, 0x12, 2 * i);
    const DensityMatrix b = sample_state(2, 0x12, 2 * i + 1);
    const double alpha = rng.uniform();
    SettingsTable settings;
    for (int k = 0; k < 2; ++k)
      settings.parties.push_back({MeasurementSetting::bloch(kPi * rng.uniform(), 2.0 * kPi * rng.uniform()),
                                  MeasurementSetting::bloch(kPi * rng.uniform(), 2.0 * kPi * rng.uniform())});
    ComplexMatrix blend = Complex(alpha) * a.mat + Complex(1.0 - alpha) * b.mat;
    const DensityMatrix mix{2, blend};
    const double lhs = expectation(mix, settings);
    const double rhs = alpha * expectation(a, settings) + (1.0 - alpha) * expectation(b, settings);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("property: tsirelson cap on sampled states") {
  for (std::uint64_t i = 0; i < 200; ++i)
    CHECK(chsh_max_horodecki(sample_state(2, 0x751, i)).s_value <= kSqrt2 + 1e-9);
}

TEST_CASE("normalization self-consistency of the two-party expansion") {
  CounterRng rng(0x77);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const DensityMatrix rho = sample_state(2, 0x78, i);
    SettingsTable settings;
    for (int k = 0; k < 2; ++k)
      settings.parties.push_back(
          {MeasurementSetting::bloch(kPi * rng.uniform(), 2.0 * kPi * rng.uniform()),
           MeasurementSetting::bloch(kPi * rng.uniform(), 2.0 * kPi * rng.uniform())});

    const auto corr = [&](int i1, int i2) {
      const ComplexMatrix op = kron(settings.parties[0][i1].observable(),
                                    settings.parties[1][i2].observable());
      Complex tr = 0.0;
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) tr += rho.mat(a, b) * op(b, a);
      return tr.real();
    };
    const double expanded =
        0.5 + (corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1)) / 8.0;
    CHECK(std::abs(expanded - (2.0 + expectation(rho, settings)) / 4.0) < 1e-12);
  }
}

TEST_CASE("critical visibility closed forms") {
  CHECK(std::abs(critical_visibility(make_state({StateTag::BellPhiPlus})) - 1.0 / kSqrt2) < 1e-8);
  for (double gamma : {0.5, 0.8, 1.0}) {
    const double expected = 1.0 / std::sqrt(1.0 + gamma * gamma);
    CHECK(std::abs(critical_visibility(make_state({StateTag::Mnms2, gamma})) - expected) < 1e-8);
  }
  MaximizeOptions options;
  options.seed = 41;
  CHECK(std::abs(critical_visibility(make_state({StateTag::Ghz}), SettingMode::Planar, options) -
                 1.0 / kSqrt2) < 1e-8);
  CHECK_THROWS_AS((void)critical_visibility(make_state({StateTag::DiagMix, 0.5})),
                  std::domain_error);
}

TEST_CASE("settings json round-trip") {
  const SettingsTable planar = mnms3_optimal_settings(0.01);
  const SettingsTable back = settings_from_json(settings_to_json(planar));
  REQUIRE(back.n_parties() == 3);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 2; ++i) {
      CHECK(back.parties[k][i].phi == planar.parties[k][i].phi);
      CHECK(back.parties[k][i].mode == SettingMode::Planar);
    }

  const SettingsTable bloch = chsh_max_horodecki(make_state({StateTag::Mems, 0.2})).settings;
  const SettingsTable bloch_back = settings_from_json(settings_to_json(bloch));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i) {
      CHECK(bloch_back.parties[k][i].theta == bloch.parties[k][i].theta);
      CHECK(bloch_back.parties[k][i].phi == bloch.parties[k][i].phi);
    }
}

TEST_SUITE_END();
