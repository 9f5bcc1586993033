#include "sptq/circuits.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sptq {

namespace {
constexpr double kPi = std::numbers::pi;

OutcomeDistribution squared_moduli(const PhotonState& s) {
  OutcomeDistribution d;
  for (int i = 0; i < 4; ++i) d.p[i] = std::norm(s.amp[i]);
  return d;
}

void require_normalized(const PhotonState& s, const char* where) {
  if (!s.is_normalized())
    throw std::invalid_argument(std::string(where) + ": input state is not normalized");
}
}  // namespace

OpticalElement preparation_circuit(const PrepSettings& s) {
  std::vector<OpticalElement> chain;
  chain.push_back(hwp(SpatialMode::A, s.prep_hwp_deg));
  chain.push_back(pbs());
  chain.push_back(phase_shifter(SpatialMode::A, s.phi_rad));
  if (s.plate_a_deg) chain.push_back(hwp(SpatialMode::A, *s.plate_a_deg));
  if (s.plate_b_deg) chain.push_back(hwp(SpatialMode::B, *s.plate_b_deg));
  return compose(chain);
}

PhotonState prepare(const PrepSettings& s) {
  return apply(preparation_circuit(s), make_basis_state(SpatialMode::A, Polarization::H));
}

PrepSettings settings_for(BellLabel target) {
  switch (target) {
    case BellLabel::PsiPlus:  return {22.5, 0.0, {}, {}};
    case BellLabel::PsiMinus: return {22.5, kPi, {}, {}};
    case BellLabel::PhiPlus:  return {22.5, 0.0, 45.0, 45.0};
    case BellLabel::PhiMinus: return {22.5, kPi, 45.0, 45.0};
  }
  throw std::invalid_argument("settings_for: bad Bell label");
}

PrepSettings settings_for(BPrimeLabel target) {
  // 22.5/67.5 plates turn the per-path H/V amplitudes of a Bell state into
  // the matching +-45 superpositions in both paths.
  switch (target) {
    case BPrimeLabel::SPlus45:  return {22.5, 0.0, 22.5, 67.5};
    case BPrimeLabel::APlus45:  return {22.5, kPi, 22.5, 67.5};
    case BPrimeLabel::SMinus45: return {22.5, kPi, 67.5, 22.5};
    case BPrimeLabel::AMinus45: return {22.5, 0.0, 67.5, 22.5};
  }
  throw std::invalid_argument("settings_for: bad B' label");
}

PrepSettings settings_for(AlphabetLabel target) {
  switch (target) {
    case AlphabetLabel::PathAPlus45:  return {0.0, 0.0, 22.5, {}};
    case AlphabetLabel::PathBMinus45: return {45.0, 0.0, {}, 22.5};
    case AlphabetLabel::SV:           return {22.5, 0.0, 45.0, {}};
    case AlphabetLabel::AH:           return {22.5, kPi, {}, 45.0};
  }
  throw std::invalid_argument("settings_for: bad alphabet label");
}

PrepSettings settings_for(SpatialMode mode, Polarization pol) {
  const bool b = mode == SpatialMode::B;
  const bool v = pol == Polarization::V;
  PrepSettings s{b ? 45.0 : 0.0, 0.0, {}, {}};
  // after the PBS the photon sits in aH (prep 0) or bV (prep 45); one flip
  // plate reaches the other polarization of the same path
  if (!b && v) s.plate_a_deg = 45.0;
  if (b && !v) s.plate_b_deg = 45.0;
  return s;
}

const OpticalElement& bell_analyzer_unitary() {
  static const OpticalElement u =
      compose({pbs(), hwp(SpatialMode::A, 22.5), hwp(SpatialMode::B, 22.5)});
  return u;
}

OutcomeDistribution bell_analyzer_probs(const PhotonState& s) {
  require_normalized(s, "bell_analyzer_probs");
  return squared_moduli(apply(bell_analyzer_unitary(), s));
}

std::array<BellLabel, 4> bell_port_labels() {
  return {BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus, BellLabel::PhiMinus};
}

OutcomeDistribution b_basis_probs(const PhotonState& s) {
  require_normalized(s, "b_basis_probs");
  return squared_moduli(s);
}

const OpticalElement& bprime_receiver_unitary() {
  static const OpticalElement u = compose(
      {hwp(SpatialMode::A, 22.5), hwp(SpatialMode::B, 67.5), bell_analyzer_unitary()});
  return u;
}

OutcomeDistribution bprime_receiver_probs(const PhotonState& s) {
  require_normalized(s, "bprime_receiver_probs");
  return squared_moduli(apply(bprime_receiver_unitary(), s));
}

const std::array<BPrimeLabel, 4>& bprime_port_labels() {
  static const std::array<BPrimeLabel, 4> table = [] {
    std::array<BPrimeLabel, 4> ports{};
    std::array<bool, 4> taken{};
    for (int i = 0; i < 4; ++i) {
      const auto label = static_cast<BPrimeLabel>(i);
      const auto dist = bprime_receiver_probs(bprime_state(label));
      int port = -1;
      for (int j = 0; j < 4; ++j)
        if (dist.p[j] > 1.0 - 1e-9) port = j;
      if (port < 0 || taken[port])
        throw std::logic_error("bprime_port_labels: receiver is not a bijection");
      taken[port] = true;
      ports[port] = label;
    }
    return ports;
  }();
  return table;
}

std::array<std::string, 4> analyzer_port_names(AnalyzerKind kind) {
  std::array<std::string, 4> names;
  switch (kind) {
    case AnalyzerKind::Bell:
      for (int i = 0; i < 4; ++i) names[i] = to_string(static_cast<BellLabel>(i));
      break;
    case AnalyzerKind::BBasis:
      names = {"a,H", "a,V", "b,H", "b,V"};
      break;
    case AnalyzerKind::BPrime:
      for (int i = 0; i < 4; ++i) names[i] = to_string(bprime_port_labels()[i]);
      break;
  }
  return names;
}

}  // namespace sptq
