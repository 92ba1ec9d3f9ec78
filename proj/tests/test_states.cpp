#include <doctest.h>

#include <vector>

#include "mnms/states.hpp"
#include "test_helpers.hpp"

using namespace mnms;

TEST_SUITE_BEGIN("states");

TEST_CASE("mnms2 endpoints are the Bell mixture endpoints") {
  const DensityMatrix bell = make_state({StateTag::BellPhiPlus});
  CHECK(make_state({StateTag::Mnms2, 1.0}).mat.max_abs_diff(bell.mat) == 0.0);

  // gamma = 0 is the even mixture of the two Bell states.
  const DensityMatrix psi = make_state({StateTag::BellPsiPlus});
  ComplexMatrix half = Complex(0.5) * bell.mat + Complex(0.5) * psi.mat;
  CHECK(make_state({StateTag::Mnms2, 0.0}).mat.max_abs_diff(half) < 1e-16);
}

TEST_CASE("mnms2 is the weighted Bell mixture for every gamma") {
  const DensityMatrix phi = make_state({StateTag::BellPhiPlus});
  const DensityMatrix psi = make_state({StateTag::BellPsiPlus});
  for (int k = 0; k <= 40; ++k) {
    const double gamma = -1.0 + 2.0 * static_cast<double>(k) / 40.0;
    const ComplexMatrix mix =
        Complex((1.0 + gamma) / 2.0) * phi.mat + Complex((1.0 - gamma) / 2.0) * psi.mat;
    CHECK(make_state({StateTag::Mnms2, gamma}).mat.max_abs_diff(mix) < 1e-15);
  }
}

TEST_CASE("mnms3 reduces to GHZ at f = 0") {
  const DensityMatrix ghz = make_state({StateTag::Ghz});
  CHECK(make_state({StateTag::Mnms3, 0.0}).mat.max_abs_diff(ghz.mat) == 0.0);
}

TEST_CASE("mnms3 trace identity 2 f1 + 6 f = 1 holds exactly") {
  for (double f : {0.0, 1.0 / 32.0, 1.0 / 16.0, 0.1, 0.11, 0.125}) {
    const DensityMatrix rho = make_state({StateTag::Mnms3, f});
    const double f1 = rho.mat(0, 0).real();
    const double fmid = rho.mat(1, 1).real();
    CHECK(2.0 * f1 + 6.0 * fmid == 1.0);
  }
}

TEST_CASE("bit-flip channel reproduces the mnms3 matrix") {
  for (int k = 0; k < 10; ++k) {
    const double f = 0.125 * static_cast<double>(k) / 9.0;
    const DensityMatrix direct = make_state({StateTag::Mnms3, f});
    const DensityMatrix channel = make_state({StateTag::GhzBitFlip, f});
    CHECK(direct.mat.max_abs_diff(channel.mat) <= 1e-15);
  }
}

TEST_CASE("white noise mixture of the Bell state") {
  const DensityMatrix werner = mix_white_noise(make_state({StateTag::BellPhiPlus}), 0.5);
  CHECK(werner.mat(0, 0) == Complex(0.375));
  CHECK(werner.mat(1, 1) == Complex(0.125));
  CHECK(werner.mat(2, 2) == Complex(0.125));
  CHECK(werner.mat(3, 3) == Complex(0.375));
  CHECK(werner.mat(0, 3) == Complex(0.25));
  CHECK(werner.mat(3, 0) == Complex(0.25));

  const DensityMatrix rho = make_state({StateTag::Mems, 0.8});
  CHECK(mix_white_noise(rho, 1.0).mat.max_abs_diff(rho.mat) == 0.0);
  const DensityMatrix mixed = mix_white_noise(rho, 0.0);
  CHECK(mixed.mat.max_abs_diff(Complex(0.25) * ComplexMatrix::identity(4)) == 0.0);
  CHECK_THROWS_AS((void)mix_white_noise(rho, 1.5), std::domain_error);
}

TEST_CASE("linear entropy anchors") {
  CHECK(linear_entropy(make_state({StateTag::BellPhiPlus})) == 0.0);
  CHECK(linear_entropy(make_state({StateTag::Ghz})) == 0.0);
  const DensityMatrix mixed = mix_white_noise(make_state({StateTag::Ghz}), 0.0);
  CHECK(std::abs(linear_entropy(mixed) - 1.0) < 1e-15);

  for (int k = 0; k <= 20; ++k) {
    const double gamma = static_cast<double>(k) / 20.0;
    const double e = linear_entropy(make_state({StateTag::Mnms2, gamma}));
    CHECK(std::abs(e - (1.0 - (1.0 + 2.0 * gamma * gamma) / 3.0)) < 1e-12);
  }
  CHECK(std::abs(linear_entropy(make_state({StateTag::Mnms3, 1.0 / 16.0})) - 9.0 / 14.0) < 1e-15);
}

TEST_CASE("entropy is monotone under added white noise") {
  for (StateTag tag : {StateTag::Mems, StateTag::Mnms2, StateTag::Mnms3}) {
    const DensityMatrix rho = make_state({tag, tag == StateTag::Mnms3 ? 0.05 : 0.7});
    double prev = linear_entropy(mix_white_noise(rho, 1.0));
    for (int k = 19; k >= 0; --k) {
      const double v = static_cast<double>(k) / 20.0;
      const double e = linear_entropy(mix_white_noise(rho, v));
      CHECK(e >= prev - 1e-14);
      prev = e;
    }
  }
}

TEST_CASE("validation of constructed and unphysical matrices") {
  CHECK(validate(make_state({StateTag::Mnms3, 0.1})).passed());
  const ValidationReport mems = validate(make_state({StateTag::Mems, 0.9}));
  CHECK(mems.passed());
  CHECK(mems.trace_defect < 1e-15);

  // Correlation core with lambda1 = 1, lambda2 = 1/2 and empty diagonal:
  // anti-diagonal (1/8, 3/8, 3/8, 1/8), minimum eigenvalue -3/8.
  ComplexMatrix m =
      Complex(0.25) * kron(ComplexMatrix::pauli(0), ComplexMatrix::pauli(0)) +
      Complex(0.125) * kron(ComplexMatrix::pauli(1), ComplexMatrix::pauli(1));
  const ValidationReport bad = validate(DensityMatrix{2, m});
  CHECK_FALSE(bad.passed());
  CHECK(bad.min_eigenvalue < 0.0);
  CHECK(std::abs(bad.min_eigenvalue + 0.375) < 1e-13);
}

TEST_CASE("every family validates across its parameter grid") {
  const auto grid_check = [](StateTag tag, double lo, double hi) {
    for (int k = 0; k < 100; ++k) {
      const double p = lo + (hi - lo) * static_cast<double>(k) / 99.0;
      CAPTURE(family_name(tag));
      CAPTURE(p);
      CHECK(validate(make_state({tag, p})).passed());
    }
  };
  grid_check(StateTag::Mems, 0.0, 1.0);
  grid_check(StateTag::Mnms2, -1.0, 1.0);
  grid_check(StateTag::Mnms3, 0.0, 0.125);
  grid_check(StateTag::DiagMix, 0.0, 1.0);
  grid_check(StateTag::Planar2, 0.0, 1.0);
  grid_check(StateTag::GhzBitFlip, 0.0, 0.125);
}

TEST_CASE("family parameter domains are enforced") {
  CHECK_THROWS_AS((void)make_state({StateTag::Mems, 1.2}), std::domain_error);
  CHECK_THROWS_AS((void)make_state({StateTag::Mnms2, -1.01}), std::domain_error);
  CHECK_THROWS_AS((void)make_state({StateTag::Mnms3, 0.2}), std::domain_error);
  CHECK_THROWS_AS((void)make_state({StateTag::Planar2, -0.1}), std::domain_error);
}

TEST_CASE("json round-trip is bit exact") {
  CounterRng rng(55);
  ComplexMatrix m(4);
  for (Complex& z : m.entries()) z = Complex(rng.gaussian(), rng.gaussian());
  // Symmetrize into a plausible but arbitrary Hermitian payload; round-trip
  // does not require physicality.
  const DensityMatrix rho{2, m};
  const DensityMatrix back = density_from_json(density_to_json(rho));
  CHECK(back.qubits == rho.qubits);
  for (std::size_t k = 0; k < m.entries().size(); ++k) {
    CHECK(back.mat.entries()[k].real() == rho.mat.entries()[k].real());
    CHECK(back.mat.entries()[k].imag() == rho.mat.entries()[k].imag());
  }

  const DensityMatrix mnms3 = make_state({StateTag::Mnms3, 0.07});
  CHECK(density_from_json(density_to_json(mnms3)).mat.max_abs_diff(mnms3.mat) == 0.0);
}

TEST_SUITE_END();
