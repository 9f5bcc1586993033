#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace sptq {

using Complex = std::complex<double>;

/// Spatial-mode qubit: the photon travels in path a or path b.
enum class SpatialMode { A = 0, B = 1 };

/// Polarization qubit: horizontal or vertical.
enum class Polarization { H = 0, V = 1 };

/// The four single-photon Bell states,
///   Psi± = (|a,H> ± |b,V>)/sqrt2,  Phi± = (|a,V> ± |b,H>)/sqrt2.
enum class BellLabel { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

/// Superposition product basis: S/A are the symmetric/antisymmetric path
/// states (|a> ± |b>)/sqrt2, ±45 the diagonal polarizations (|H> ± |V>)/sqrt2.
enum class BPrimeLabel { SPlus45 = 0, APlus45 = 1, SMinus45 = 2, AMinus45 = 3 };

/// Mixed product alphabet (|a,+45>, |b,-45>, |S,V>, |A,H>). Not an orthogonal
/// set: the two pairs are orthogonal internally but have overlap ±1/2 across.
enum class AlphabetLabel { PathAPlus45 = 0, PathBMinus45 = 1, SV = 2, AH = 3 };

/// Index into the canonical amplitude ordering (aH, aV, bH, bV).
constexpr std::size_t basis_index(SpatialMode m, Polarization p) {
  return 2 * static_cast<std::size_t>(m) + static_cast<std::size_t>(p);
}

/// Single-photon two-qubit pure state.
/// Amplitudes are dimensionless and ordered (aH, aV, bH, bV); every state
/// produced by a constructor or element application is unit-norm.
struct PhotonState {
  std::array<Complex, 4> amp{};

  double norm_sq() const;
  bool is_normalized(double tol = 1e-9) const;
};

PhotonState make_basis_state(SpatialMode mode, Polarization pol);
PhotonState bell_state(BellLabel label);
PhotonState bprime_state(BPrimeLabel label);
PhotonState sender_alphabet_state(AlphabetLabel label);

/// Scales amp to unit norm. Throws std::invalid_argument on a zero vector.
PhotonState normalized_state(const std::array<Complex, 4>& amp);

Complex inner_product(const PhotonState& x, const PhotonState& y);

/// |<x|y>|^2. Symmetric, invariant under a global phase of either argument.
double fidelity(const PhotonState& x, const PhotonState& y);

std::string_view to_string(SpatialMode m);
std::string_view to_string(Polarization p);
std::string_view to_string(BellLabel l);
std::string_view to_string(BPrimeLabel l);   // ket-style, e.g. "S,+45"
std::string_view to_string(AlphabetLabel l); // ket-style, e.g. "a,+45"

/// All sixteen named states (4 Bell, 4 product, 4 B', 4 alphabet) with their
/// display labels; used for nearest-named-state lookups.
struct NamedState {
  std::string_view label;
  PhotonState state;
};
std::span<const NamedState> named_states();

}  // namespace sptq
