#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <string>

#include "sptq/state.hpp"

namespace sptq {

using Mat4 = std::array<std::array<Complex, 4>, 4>;

/// A linear optical element: a 4x4 complex unitary on the (aH, aV, bH, bV)
/// amplitudes. Immutable value; composition and application are pure.
struct OpticalElement {
  Mat4 m{};
  std::string label;
};

OpticalElement identity_element();

/// Half-wave plate at `theta_deg` in the given path. Acts on that path's
/// (H,V) amplitudes with [[cos2t, sin2t], [sin2t, -cos2t]]; identity on the
/// other path. 22.5 deg maps H to +45, 45 deg swaps H and V.
OpticalElement hwp(SpatialMode mode, double theta_deg);

/// Multiplies both polarization amplitudes of the given path by e^{i phi}.
OpticalElement phase_shifter(SpatialMode mode, double phi_rad);

/// Polarizing beamsplitter mixing the two paths: H keeps its path, V swaps
/// paths (aH->aH, bH->bH, aV->bV, bV->aV). Phase-free real permutation.
OpticalElement pbs();

/// Proper rotation [[cos t, -sin t], [sin t, cos t]] of the (H,V) amplitudes
/// in one path; models channel polarization misalignment (not a wave plate).
OpticalElement polarization_rotator(SpatialMode mode, double angle_deg);

/// Matrix product applying the first listed element first.
/// Throws std::invalid_argument for an empty list.
OpticalElement compose(std::span<const OpticalElement> elements);
OpticalElement compose(std::initializer_list<OpticalElement> elements);

PhotonState apply(const OpticalElement& e, const PhotonState& s);

std::array<Complex, 4> matvec(const Mat4& m, const std::array<Complex, 4>& v);

/// max_ij |(U^dag U - I)_ij|; 0 for exact unitaries.
double unitarity_defect(const OpticalElement& e);

}  // namespace sptq
