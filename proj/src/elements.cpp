#include "sptq/elements.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace sptq {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Mat4 identity_mat() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

// Embeds a 2x2 polarization-block matrix into the path given by `mode`.
Mat4 embed_block(SpatialMode mode, Complex hh, Complex hv, Complex vh, Complex vv) {
  Mat4 m = identity_mat();
  const std::size_t h = basis_index(mode, Polarization::H);
  const std::size_t v = basis_index(mode, Polarization::V);
  m[h][h] = hh;
  m[h][v] = hv;
  m[v][h] = vh;
  m[v][v] = vv;
  return m;
}

Mat4 matmul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const Complex aik = a[i][k];
      if (aik == Complex{}) continue;
      for (int j = 0; j < 4; ++j) r[i][j] += aik * b[k][j];
    }
  return r;
}

}  // namespace

OpticalElement identity_element() { return {identity_mat(), "id"}; }

OpticalElement hwp(SpatialMode mode, double theta_deg) {
  const double t = 2.0 * theta_deg * kDegToRad;
  const double c = std::cos(t), s = std::sin(t);
  return {embed_block(mode, c, s, s, -c),
          "hwp(" + std::string(to_string(mode)) + "," + std::to_string(theta_deg) + ")"};
}

OpticalElement phase_shifter(SpatialMode mode, double phi_rad) {
  const Complex e = std::polar(1.0, phi_rad);
  return {embed_block(mode, e, 0.0, 0.0, e),
          "phase(" + std::string(to_string(mode)) + "," + std::to_string(phi_rad) + ")"};
}

OpticalElement pbs() {
  Mat4 m{};
  m[basis_index(SpatialMode::A, Polarization::H)][basis_index(SpatialMode::A, Polarization::H)] = 1.0;
  m[basis_index(SpatialMode::B, Polarization::H)][basis_index(SpatialMode::B, Polarization::H)] = 1.0;
  m[basis_index(SpatialMode::B, Polarization::V)][basis_index(SpatialMode::A, Polarization::V)] = 1.0;
  m[basis_index(SpatialMode::A, Polarization::V)][basis_index(SpatialMode::B, Polarization::V)] = 1.0;
  return {m, "pbs"};
}

OpticalElement polarization_rotator(SpatialMode mode, double angle_deg) {
  const double t = angle_deg * kDegToRad;
  const double c = std::cos(t), s = std::sin(t);
  return {embed_block(mode, c, -s, s, c),
          "rot(" + std::string(to_string(mode)) + "," + std::to_string(angle_deg) + ")"};
}

OpticalElement compose(std::span<const OpticalElement> elements) {
  if (elements.empty()) throw std::invalid_argument("compose: empty element list");
  Mat4 acc = elements[0].m;
  std::string label = elements[0].label;
  for (std::size_t i = 1; i < elements.size(); ++i) {
    acc = matmul(elements[i].m, acc);  // later elements act after earlier ones
    label += " then " + elements[i].label;
  }
  return {acc, std::move(label)};
}

OpticalElement compose(std::initializer_list<OpticalElement> elements) {
  return compose(std::span<const OpticalElement>(elements.begin(), elements.size()));
}

PhotonState apply(const OpticalElement& e, const PhotonState& s) {
  return PhotonState{matvec(e.m, s.amp)};
}

std::array<Complex, 4> matvec(const Mat4& m, const std::array<Complex, 4>& v) {
  std::array<Complex, 4> r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += m[i][j] * v[j];
  return r;
}

double unitarity_defect(const OpticalElement& e) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex g{};
      for (int k = 0; k < 4; ++k) g += std::conj(e.m[k][i]) * e.m[k][j];
      if (i == j) g -= 1.0;
      worst = std::max(worst, std::abs(g));
    }
  return worst;
}

}  // namespace sptq
