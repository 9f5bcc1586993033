#include "sptq/qkd.hpp"

#include <atomic>
#include <bit>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace sptq {

namespace {

using ordered_json = nlohmann::ordered_json;

// canonical analyzer port index -> B-basis symbol (|a,V>,|a,H>,|b,V>,|b,H>)
constexpr int kBPortToSymbol[4] = {1, 0, 3, 2};

int port_to_symbol(Basis basis, int port) {
  if (basis == Basis::B) return kBPortToSymbol[port];
  return static_cast<int>(bprime_port_labels()[static_cast<std::size_t>(port)]);
}

int draw_index(double u) { return std::min(3, static_cast<int>(u * 4.0)); }

// Born-rule outcome of an ideal projective measurement in `basis`.
int ideal_measure(const PhotonState& s, Basis basis, double u) {
  double probs[4];
  for (int k = 0; k < 4; ++k) probs[k] = fidelity(qkd_state(basis, k), s);
  double cum = 0.0;
  for (int k = 0; k < 3; ++k) {
    cum += probs[k];
    if (u < cum) return k;
  }
  return 3;
}

}  // namespace

std::string_view to_string(Basis b) { return b == Basis::B ? "B" : "B'"; }

PhotonState qkd_state(Basis basis, int symbol) {
  if (symbol < 0 || symbol > 3) throw std::invalid_argument("qkd_state: bad symbol");
  if (basis == Basis::BPrime) return bprime_state(static_cast<BPrimeLabel>(symbol));
  switch (symbol) {
    case 0: return make_basis_state(SpatialMode::A, Polarization::V);
    case 1: return make_basis_state(SpatialMode::A, Polarization::H);
    case 2: return make_basis_state(SpatialMode::B, Polarization::V);
    default: return make_basis_state(SpatialMode::B, Polarization::H);
  }
}

std::tuple<Basis, int, PhotonState> sender_emit(DrawStream& draw) {
  const Basis basis = draw.uniform() < 0.5 ? Basis::B : Basis::BPrime;
  const int symbol = draw_index(draw.uniform());
  return {basis, symbol, qkd_state(basis, symbol)};
}

PhotonState eavesdrop_intercept_resend(const PhotonState& s, DrawStream& draw) {
  const Basis basis = draw.uniform() < 0.5 ? Basis::B : Basis::BPrime;
  const int outcome = ideal_measure(s, basis, draw.uniform());
  return qkd_state(basis, outcome);
}

MeasureResult receiver_measure(const PhotonState& s, Basis basis, const DetectorModel& d,
                               DrawStream& draw) {
  const OutcomeDistribution dist =
      basis == Basis::B ? b_basis_probs(s) : bprime_receiver_probs(s);
  MeasureResult r;
  r.clicks = sample_trial(dist, d, draw);
  if (std::popcount(r.clicks) == 1)
    r.symbol = port_to_symbol(basis, std::countr_zero(r.clicks));
  return r;
}

QkdReport run_qkd(const QkdParams& p, const ExecPolicy& policy,
                  std::vector<QkdRoundTrace>* trace) {
  if (p.n_photons < 1) throw std::invalid_argument("run_qkd: n_photons must be >= 1");
  if (trace) trace->assign(p.n_photons, QkdRoundTrace{});

  struct Tally {
    std::uint64_t sifted = 0, mismatch = 0, no_click = 0, multi_click = 0;
    std::uint64_t errors = 0;
    std::uint64_t sifted_b = 0, sifted_bp = 0, errors_b = 0, errors_bp = 0;
    void merge(const Tally& o) {
      sifted += o.sifted;
      mismatch += o.mismatch;
      no_click += o.no_click;
      multi_click += o.multi_click;
      errors += o.errors;
      sifted_b += o.sifted_b;
      sifted_bp += o.sifted_bp;
      errors_b += o.errors_b;
      errors_bp += o.errors_bp;
    }
  };

  const auto run_round = [&](std::uint64_t round, Tally& tally) {
    DrawStream draw(p.seed, streams::kQkd, round);
    auto [sender_basis, sender_symbol, state] = sender_emit(draw);

    // Eve's two draws are consumed whether or not she is active, so the
    // downstream stream positions do not depend on the flag.
    const double u_eve_basis = draw.uniform();
    const double u_eve_outcome = draw.uniform();
    int eve_basis = -1, eve_symbol = -1;
    if (p.eve_active) {
      const Basis eb = u_eve_basis < 0.5 ? Basis::B : Basis::BPrime;
      eve_symbol = ideal_measure(state, eb, u_eve_outcome);
      eve_basis = static_cast<int>(eb);
      state = qkd_state(eb, eve_symbol);
    }

    const Basis rx_basis = draw.uniform() < 0.5 ? Basis::B : Basis::BPrime;
    state = apply_channel(state, p.noise, draw);
    const MeasureResult mr = receiver_measure(state, rx_basis, p.detector, draw);

    bool sifted = false;
    int bit_errors = 0;
    if (rx_basis != sender_basis) {
      ++tally.mismatch;
    } else if (std::popcount(mr.clicks) == 0) {
      ++tally.no_click;
    } else if (std::popcount(mr.clicks) > 1) {
      ++tally.multi_click;
    } else {
      sifted = true;
      bit_errors = std::popcount(static_cast<unsigned>(sender_symbol ^ mr.symbol));
      ++tally.sifted;
      tally.errors += static_cast<std::uint64_t>(bit_errors);
      if (sender_basis == Basis::B) {
        ++tally.sifted_b;
        tally.errors_b += static_cast<std::uint64_t>(bit_errors);
      } else {
        ++tally.sifted_bp;
        tally.errors_bp += static_cast<std::uint64_t>(bit_errors);
      }
    }

    if (trace)
      (*trace)[round] = QkdRoundTrace{round,     sender_basis, sender_symbol,
                                      eve_basis, eve_symbol,   rx_basis,
                                      mr.clicks, mr.symbol,    sifted,
                                      bit_errors};
  };

  Tally total;
  const int threads = policy.threads > 1 ? policy.threads : 1;
  if (threads == 1) {
    for (std::uint64_t r = 0; r < p.n_photons; ++r) run_round(r, total);
  } else {
    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t n_chunks = (p.n_photons + kChunk - 1) / kChunk;
    std::atomic<std::uint64_t> next{0};
    std::vector<Tally> partial(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (;;) {
          const std::uint64_t c = next.fetch_add(1);
          if (c >= n_chunks) break;
          const std::uint64_t hi = std::min(p.n_photons, (c + 1) * kChunk);
          for (std::uint64_t r = c * kChunk; r < hi; ++r)
            run_round(r, partial[static_cast<std::size_t>(w)]);
        }
      });
    for (auto& t : pool) t.join();
    for (const auto& t : partial) total.merge(t);
  }

  QkdReport rep;
  rep.sent = p.n_photons;
  rep.sifted = total.sifted;
  rep.basis_mismatch = total.mismatch;
  rep.discarded_no_click = total.no_click;
  rep.discarded_multi_click = total.multi_click;
  rep.key_bits = 2 * total.sifted;
  rep.bit_errors = total.errors;
  rep.qber = rep.key_bits ? static_cast<double>(total.errors) / static_cast<double>(rep.key_bits) : 0.0;
  rep.sifted_b = total.sifted_b;
  rep.sifted_bprime = total.sifted_bp;
  rep.errors_b = total.errors_b;
  rep.errors_bprime = total.errors_bp;
  rep.qber_b = total.sifted_b ? static_cast<double>(total.errors_b) / (2.0 * static_cast<double>(total.sifted_b)) : 0.0;
  rep.qber_bprime =
      total.sifted_bp ? static_cast<double>(total.errors_bp) / (2.0 * static_cast<double>(total.sifted_bp)) : 0.0;
  rep.params = p;
  return rep;
}

std::string QkdReport::to_json() const {
  const ordered_json doc{
      {"report", "qkd"},
      {"photons", params.n_photons},
      {"seed", params.seed},
      {"eve_active", params.eve_active},
      {"noise",
       {{"phase_sigma", params.noise.phase_sigma},
        {"phase_offset", params.noise.phase_offset},
        {"pol_misalign_a_deg", params.noise.pol_misalign_a_deg},
        {"pol_misalign_b_deg", params.noise.pol_misalign_b_deg}}},
      {"detector",
       {{"eta", params.detector.eta},
        {"dark_rate_hz", params.detector.dark_rate_hz},
        {"gate_window_s", params.detector.gate_window_s},
        {"herald_efficiency", params.detector.herald_efficiency}}},
      {"sent", sent},
      {"sifted", sifted},
      {"basis_mismatch", basis_mismatch},
      {"discarded_no_click", discarded_no_click},
      {"discarded_multi_click", discarded_multi_click},
      {"key_bits", key_bits},
      {"bit_errors", bit_errors},
      {"qber", qber},
      {"per_basis",
       {{"B", {{"sifted", sifted_b}, {"bit_errors", errors_b}, {"qber", qber_b}}},
        {"B_prime",
         {{"sifted", sifted_bprime}, {"bit_errors", errors_bprime}, {"qber", qber_bprime}}}}},
      {"bits_per_sifted_photon", bits_per_sifted_photon},
      {"baseline_bits_per_photon", baseline_bits_per_photon}};
  return doc.dump(2) + "\n";
}

std::string trace_to_csv(const std::vector<QkdRoundTrace>& trace) {
  std::string out =
      "round,sender_basis,sender_symbol,eve_basis,eve_symbol,receiver_basis,clicks,"
      "receiver_symbol,sifted,bit_errors\n";
  for (const auto& t : trace) {
    out += std::to_string(t.round);
    out += ",";
    out += to_string(t.sender_basis);
    out += "," + std::to_string(t.sender_symbol);
    out += ",";
    out += t.eve_basis < 0 ? "-" : std::string(to_string(static_cast<Basis>(t.eve_basis)));
    out += ",";
    out += t.eve_symbol < 0 ? "-" : std::to_string(t.eve_symbol);
    out += ",";
    out += to_string(t.receiver_basis);
    out += "," + std::to_string(t.clicks);
    out += "," + std::to_string(t.receiver_symbol);
    out += ",";
    out += t.sifted ? "1" : "0";
    out += "," + std::to_string(t.bit_errors) + "\n";
  }
  return out;
}

}  // namespace sptq
