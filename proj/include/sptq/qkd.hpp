#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "sptq/detection.hpp"

namespace sptq {

/// The two receiver bases: B is the product basis, BPrime the superposition
/// basis. Senders draw uniformly from the eight states.
enum class Basis { B = 0, BPrime = 1 };

std::string_view to_string(Basis b);

/// State for (basis, symbol). Symbols follow the basis ordering
///   B:  0=|a,V> 1=|a,H> 2=|b,V> 3=|b,H>
///   B': 0=|S,+45> 1=|A,+45> 2=|S,-45> 3=|A,-45>
PhotonState qkd_state(Basis basis, int symbol);

struct QkdParams {
  std::uint64_t n_photons = 100000;
  ChannelNoise noise;
  DetectorModel detector;
  bool eve_active = false;
  std::uint64_t seed = 0;
};

/// (basis, symbol, state) drawn uniformly over the eight alphabet states;
/// the symbol is the 2-bit key contribution. Consumes two uniforms.
std::tuple<Basis, int, PhotonState> sender_emit(DrawStream& draw);

/// Intercept-resend adversary: measures ideally in a uniformly chosen basis
/// and forwards the detected basis state. Consumes two uniforms.
PhotonState eavesdrop_intercept_resend(const PhotonState& s, DrawStream& draw);

struct MeasureResult {
  ClickMask clicks = 0;
  int symbol = -1;  // valid only when exactly one detector clicked
};

/// Routes through the B or B' analyzer and the gated detector model.
MeasureResult receiver_measure(const PhotonState& s, Basis basis, const DetectorModel& d,
                               DrawStream& draw);

struct QkdRoundTrace {
  std::uint64_t round = 0;
  Basis sender_basis{};
  int sender_symbol = 0;
  int eve_basis = -1;   // -1 when Eve is inactive
  int eve_symbol = -1;
  Basis receiver_basis{};
  ClickMask clicks = 0;
  int receiver_symbol = -1;
  bool sifted = false;
  int bit_errors = 0;
};

struct QkdReport {
  std::uint64_t sent = 0;
  std::uint64_t sifted = 0;
  std::uint64_t basis_mismatch = 0;
  std::uint64_t discarded_no_click = 0;
  std::uint64_t discarded_multi_click = 0;
  std::uint64_t key_bits = 0;  // 2 per sifted photon
  std::uint64_t bit_errors = 0;
  double qber = 0.0;
  std::uint64_t sifted_b = 0, sifted_bprime = 0;
  std::uint64_t errors_b = 0, errors_bprime = 0;
  double qber_b = 0.0, qber_bprime = 0.0;
  // rate bookkeeping: two key bits per sifted photon here versus one for a
  // polarization-only scheme
  int bits_per_sifted_photon = 2;
  int baseline_bits_per_photon = 1;
  QkdParams params;

  std::string to_json() const;
};

/// Full exchange: sender -> optional Eve -> channel -> receiver -> sifting.
/// Deterministic for a fixed seed at any thread count. When `trace` is
/// non-null it receives one entry per round in round order.
QkdReport run_qkd(const QkdParams& p, const ExecPolicy& policy = {},
                  std::vector<QkdRoundTrace>* trace = nullptr);

std::string trace_to_csv(const std::vector<QkdRoundTrace>& trace);

}  // namespace sptq
