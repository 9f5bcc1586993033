#pragma once

#include <array>
#include <optional>
#include <string>

#include "sptq/elements.hpp"

namespace sptq {

/// Knobs of the preparation stage: a HWP before the splitting PBS, a spatial
/// phase on path a, and optional wave plates in each path after the PBS.
/// An absent plate means "do nothing" (no element, not a 0 deg plate: a 0 deg
/// HWP is diag(1,-1) and would impose a relative pi between the paths).
/// plate angle 45 flips H<->V; 22.5/67.5 reach the superposition-basis states.
struct PrepSettings {
  double prep_hwp_deg = 22.5;
  double phi_rad = 0.0;
  std::optional<double> plate_a_deg;
  std::optional<double> plate_b_deg;
};

/// Full preparation unitary: hwp(A, prep_hwp), pbs, phase(A, phi), then the
/// optional plates (plate order a before b; they act on different paths).
OpticalElement preparation_circuit(const PrepSettings& s);

/// The state the circuit produces from the heralded |a,H> input.
PhotonState prepare(const PrepSettings& s);

/// Settings that reach the target with fidelity 1 (up to global phase).
PrepSettings settings_for(BellLabel target);
PrepSettings settings_for(BPrimeLabel target);
PrepSettings settings_for(AlphabetLabel target);
PrepSettings settings_for(SpatialMode mode, Polarization pol);

/// Probabilities over the four output ports of an analyzer; non-negative,
/// sums to 1 for a normalized input.
struct OutcomeDistribution {
  std::array<double, 4> p{};
  double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

/// Bell analyzer: pbs mixing the paths, then a 22.5 deg HWP per path and an
/// H/V split. Ports in canonical order map to (Psi+, Psi-, Phi+, Phi-).
/// Throws std::invalid_argument for a non-normalized input.
OutcomeDistribution bell_analyzer_probs(const PhotonState& s);
const OpticalElement& bell_analyzer_unitary();
std::array<BellLabel, 4> bell_port_labels();

/// Product-basis analyzer: a PBS per path, no interference. Port i carries
/// probability |amp_i|^2 in the canonical (aH, aV, bH, bV) ordering.
OutcomeDistribution b_basis_probs(const PhotonState& s);

/// B' receiver: 22.5 deg HWP on path a and 67.5 deg HWP on path b in front of
/// the Bell analyzer. Each B' state reaches exactly one port with
/// probability 1; the port labels are computed from the implemented unitary.
OutcomeDistribution bprime_receiver_probs(const PhotonState& s);
const OpticalElement& bprime_receiver_unitary();

/// Computed bijection: which B' state deterministically reaches port i.
const std::array<BPrimeLabel, 4>& bprime_port_labels();

enum class AnalyzerKind { Bell, BBasis, BPrime };
std::array<std::string, 4> analyzer_port_names(AnalyzerKind kind);

}  // namespace sptq
