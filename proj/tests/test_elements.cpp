#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sptq/elements.hpp"

using namespace sptq;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kC = 1.0 / std::numbers::sqrt2;

double max_entry_diff(const Mat4& a, const Mat4& b) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

// assorted single elements for property tests
OpticalElement random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-360.0, 360.0);
  std::uniform_real_distribution<double> phase(-8.0, 8.0);
  const auto mode = rng() % 2 ? SpatialMode::A : SpatialMode::B;
  switch (rng() % 4) {
    case 0: return hwp(mode, angle(rng));
    case 1: return phase_shifter(mode, phase(rng));
    case 2: return polarization_rotator(mode, angle(rng));
    default: return pbs();
  }
}
}  // namespace

TEST_CASE("hwp at 22.5 rotates H to +45 in its own path") {
  const PhotonState out =
      apply(hwp(SpatialMode::A, 22.5), make_basis_state(SpatialMode::A, Polarization::H));
  CHECK(std::abs(out.amp[0] - kC) <= 1e-12);
  CHECK(std::abs(out.amp[1] - kC) <= 1e-12);
  CHECK(std::abs(out.amp[2]) <= 1e-12);
  CHECK(std::abs(out.amp[3]) <= 1e-12);
}

TEST_CASE("hwp at 45 flips polarization") {
  const PhotonState out =
      apply(hwp(SpatialMode::B, 45.0), make_basis_state(SpatialMode::B, Polarization::H));
  CHECK(fidelity(out, make_basis_state(SpatialMode::B, Polarization::V)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hwp at 0 is diag(1,-1) on its path") {
  const OpticalElement e = hwp(SpatialMode::A, 0.0);
  Mat4 expect{};
  expect[0][0] = 1.0;
  expect[1][1] = -1.0;
  expect[2][2] = 1.0;
  expect[3][3] = 1.0;
  CHECK(max_entry_diff(e.m, expect) <= 1e-12);
}

TEST_CASE("phase shifter basics") {
  CHECK(max_entry_diff(phase_shifter(SpatialMode::A, 0.0).m, identity_element().m) <= 1e-15);

  const PhotonState psi = apply(phase_shifter(SpatialMode::A, kPi), bell_state(BellLabel::PsiPlus));
  CHECK(fidelity(psi, bell_state(BellLabel::PsiMinus)) == doctest::Approx(1.0).epsilon(1e-12));

  const PhotonState i_ah = apply(phase_shifter(SpatialMode::A, kPi / 2),
                                 make_basis_state(SpatialMode::A, Polarization::H));
  CHECK(std::abs(i_ah.amp[0] - Complex{0.0, 1.0}) <= 1e-12);
}

TEST_CASE("pbs keeps H in its path and swaps V") {
  const OpticalElement p = pbs();
  CHECK(fidelity(apply(p, make_basis_state(SpatialMode::A, Polarization::H)),
                 make_basis_state(SpatialMode::A, Polarization::H)) == doctest::Approx(1.0));
  CHECK(fidelity(apply(p, make_basis_state(SpatialMode::B, Polarization::V)),
                 make_basis_state(SpatialMode::A, Polarization::V)) == doctest::Approx(1.0));
  CHECK(max_entry_diff(compose({p, p}).m, identity_element().m) <= 1e-15);
}

TEST_CASE("compose applies elements in listed order") {
  CHECK_THROWS_AS(compose(std::initializer_list<OpticalElement>{}), std::invalid_argument);
  CHECK(max_entry_diff(compose({identity_element(), identity_element()}).m,
                       identity_element().m) <= 1e-15);

  // H photon through the preparation HWP then the PBS lands in a Bell state
  const PhotonState out = apply(compose({hwp(SpatialMode::A, 22.5), pbs()}),
                                make_basis_state(SpatialMode::A, Polarization::H));
  CHECK(fidelity(out, bell_state(BellLabel::PsiPlus)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("compose equals sequential application for random elements") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 100; ++it) {
    const OpticalElement x = random_element(rng);
    const OpticalElement y = random_element(rng);
    const PhotonState s = oracles::random_state(rng);
    const PhotonState composed = apply(compose({x, y}), s);
    const PhotonState sequential = apply(y, apply(x, s));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(composed.amp[i] - sequential.amp[i]) <= 1e-12);
  }
}

TEST_CASE("randomized elements stay unitary, application preserves norm") {
  std::mt19937_64 rng(1234);
  for (int it = 0; it < 1000; ++it) {
    OpticalElement e = random_element(rng);
    if (it % 3 == 0) e = compose({e, random_element(rng), random_element(rng)});
    CHECK(unitarity_defect(e) <= 1e-12);
    const PhotonState s = oracles::random_state(rng);
    CHECK(std::abs(apply(e, s).norm_sq() - 1.0) <= 1e-12);
  }
}

TEST_CASE("hwp has a 180 degree period") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-360.0, 360.0);
  for (int it = 0; it < 100; ++it) {
    const double t = angle(rng);
    CHECK(max_entry_diff(hwp(SpatialMode::A, t).m, hwp(SpatialMode::A, t + 180.0).m) <= 1e-9);
  }
}

TEST_CASE("pbs commutes with an equal phase on both paths") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> phase(-8.0, 8.0);
  for (int it = 0; it < 50; ++it) {
    const double phi = phase(rng);
    const OpticalElement both =
        compose({phase_shifter(SpatialMode::A, phi), phase_shifter(SpatialMode::B, phi)});
    CHECK(max_entry_diff(compose({both, pbs()}).m, compose({pbs(), both}).m) <= 1e-12);
  }
}
