#include "sptq/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sptq {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

PhotonState real_state(double ah, double av, double bh, double bv) {
  return PhotonState{{Complex{ah}, Complex{av}, Complex{bh}, Complex{bv}}};
}
}  // namespace

double PhotonState::norm_sq() const {
  double n = 0.0;
  for (const auto& a : amp) n += std::norm(a);
  return n;
}

bool PhotonState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

PhotonState make_basis_state(SpatialMode mode, Polarization pol) {
  PhotonState s;
  s.amp[basis_index(mode, pol)] = 1.0;
  return s;
}

PhotonState bell_state(BellLabel label) {
  const double c = kInvSqrt2;
  switch (label) {
    case BellLabel::PsiPlus:  return real_state(c, 0, 0, c);
    case BellLabel::PsiMinus: return real_state(c, 0, 0, -c);
    case BellLabel::PhiPlus:  return real_state(0, c, c, 0);
    case BellLabel::PhiMinus: return real_state(0, c, -c, 0);
  }
  throw std::invalid_argument("bell_state: bad label");
}

PhotonState bprime_state(BPrimeLabel label) {
  // (|a> ± |b>)/sqrt2 (x) (|H> ± |V>)/sqrt2, expanded over (aH, aV, bH, bV).
  switch (label) {
    case BPrimeLabel::SPlus45:  return real_state(0.5, 0.5, 0.5, 0.5);
    case BPrimeLabel::APlus45:  return real_state(0.5, 0.5, -0.5, -0.5);
    case BPrimeLabel::SMinus45: return real_state(0.5, -0.5, 0.5, -0.5);
    case BPrimeLabel::AMinus45: return real_state(0.5, -0.5, -0.5, 0.5);
  }
  throw std::invalid_argument("bprime_state: bad label");
}

PhotonState sender_alphabet_state(AlphabetLabel label) {
  const double c = kInvSqrt2;
  switch (label) {
    case AlphabetLabel::PathAPlus45:  return real_state(c, c, 0, 0);
    case AlphabetLabel::PathBMinus45: return real_state(0, 0, c, -c);
    case AlphabetLabel::SV:           return real_state(0, c, 0, c);
    case AlphabetLabel::AH:           return real_state(c, 0, -c, 0);
  }
  throw std::invalid_argument("sender_alphabet_state: bad label");
}

PhotonState normalized_state(const std::array<Complex, 4>& amp) {
  PhotonState s{amp};
  const double n = std::sqrt(s.norm_sq());
  if (!(n > 0.0)) throw std::invalid_argument("normalized_state: zero vector");
  for (auto& a : s.amp) a /= n;
  return s;
}

Complex inner_product(const PhotonState& x, const PhotonState& y) {
  Complex acc{};
  for (std::size_t i = 0; i < 4; ++i) acc += std::conj(x.amp[i]) * y.amp[i];
  return acc;
}

double fidelity(const PhotonState& x, const PhotonState& y) {
  return std::norm(inner_product(x, y));
}

std::string_view to_string(SpatialMode m) { return m == SpatialMode::A ? "a" : "b"; }
std::string_view to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

std::string_view to_string(BellLabel l) {
  switch (l) {
    case BellLabel::PsiPlus:  return "PsiPlus";
    case BellLabel::PsiMinus: return "PsiMinus";
    case BellLabel::PhiPlus:  return "PhiPlus";
    case BellLabel::PhiMinus: return "PhiMinus";
  }
  return "?";
}

std::string_view to_string(BPrimeLabel l) {
  switch (l) {
    case BPrimeLabel::SPlus45:  return "S,+45";
    case BPrimeLabel::APlus45:  return "A,+45";
    case BPrimeLabel::SMinus45: return "S,-45";
    case BPrimeLabel::AMinus45: return "A,-45";
  }
  return "?";
}

std::string_view to_string(AlphabetLabel l) {
  switch (l) {
    case AlphabetLabel::PathAPlus45:  return "a,+45";
    case AlphabetLabel::PathBMinus45: return "b,-45";
    case AlphabetLabel::SV:           return "S,V";
    case AlphabetLabel::AH:           return "A,H";
  }
  return "?";
}

std::span<const NamedState> named_states() {
  static const std::vector<NamedState> table = [] {
    std::vector<NamedState> t;
    for (int i = 0; i < 4; ++i) {
      auto l = static_cast<BellLabel>(i);
      t.push_back({to_string(l), bell_state(l)});
    }
    for (auto m : {SpatialMode::A, SpatialMode::B})
      for (auto p : {Polarization::H, Polarization::V}) {
        static const std::string_view names[4] = {"a,H", "a,V", "b,H", "b,V"};
        t.push_back({names[basis_index(m, p)], make_basis_state(m, p)});
      }
    for (int i = 0; i < 4; ++i) {
      auto l = static_cast<BPrimeLabel>(i);
      t.push_back({to_string(l), bprime_state(l)});
    }
    for (int i = 0; i < 4; ++i) {
      auto l = static_cast<AlphabetLabel>(i);
      t.push_back({to_string(l), sender_alphabet_state(l)});
    }
    return t;
  }();
  return table;
}

}  // namespace sptq
