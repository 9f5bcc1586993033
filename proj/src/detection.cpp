#include "sptq/detection.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace sptq {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json noise_json(const ChannelNoise& n) {
  return ordered_json{{"phase_sigma", n.phase_sigma},
                      {"phase_offset", n.phase_offset},
                      {"pol_misalign_a_deg", n.pol_misalign_a_deg},
                      {"pol_misalign_b_deg", n.pol_misalign_b_deg}};
}

ordered_json detector_json(const DetectorModel& d) {
  return ordered_json{{"eta", d.eta},
                      {"dark_rate_hz", d.dark_rate_hz},
                      {"gate_window_s", d.gate_window_s},
                      {"herald_efficiency", d.herald_efficiency}};
}

std::array<std::uint64_t, 4> port_totals(const ClickHistogram& hist) {
  std::array<std::uint64_t, 4> ports{};
  for (unsigned mask = 0; mask < 16; ++mask)
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) ports[i] += hist[mask];
  return ports;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double DetectorModel::dark_click_prob() const {
  return -std::expm1(-dark_rate_hz * gate_window_s);
}

PhotonState apply_channel(const PhotonState& s, const ChannelNoise& n, DrawStream& draw) {
  const double z = draw.gaussian();
  const double phi = n.phase_offset + n.phase_sigma * z;
  PhotonState out = apply(phase_shifter(SpatialMode::A, phi), s);
  out = apply(polarization_rotator(SpatialMode::A, n.pol_misalign_a_deg), out);
  out = apply(polarization_rotator(SpatialMode::B, n.pol_misalign_b_deg), out);
  return out;
}

ClickMask sample_trial(const OutcomeDistribution& dist, const DetectorModel& d,
                       DrawStream& draw) {
  const double u_herald = draw.uniform();
  const double u_port = draw.uniform();
  const double u_eta = draw.uniform();
  const double u_dark[4] = {draw.uniform(), draw.uniform(), draw.uniform(), draw.uniform()};

  const double c1 = dist.p[0];
  const double c2 = c1 + dist.p[1];
  const double c3 = c2 + dist.p[2];
  const int port = (u_port >= c1) + (u_port >= c2) + (u_port >= c3);
  const bool signal = u_herald < d.herald_efficiency && u_eta < d.eta[port];

  const double pdark = d.dark_click_prob();
  ClickMask mask = 0;
  for (int i = 0; i < 4; ++i)
    if (u_dark[i] < pdark) mask |= 1u << i;
  if (signal) mask |= 1u << port;
  return mask;
}

TrialKernelParams make_kernel_params(const PhotonState& prepared, const ChannelNoise& noise,
                                     const DetectorModel& det, const OpticalElement& analyzer,
                                     std::uint64_t seed, std::uint32_t stream) {
  // The channel phase acts only on the path-a amplitudes, so the analyzer
  // output is e^{i phi} u + v with u, v the propagated path-a / path-b parts.
  const OpticalElement after_phase =
      compose({polarization_rotator(SpatialMode::A, noise.pol_misalign_a_deg),
               polarization_rotator(SpatialMode::B, noise.pol_misalign_b_deg), analyzer});
  std::array<Complex, 4> part_a{prepared.amp[0], prepared.amp[1], 0.0, 0.0};
  std::array<Complex, 4> part_b{0.0, 0.0, prepared.amp[2], prepared.amp[3]};
  const auto u = matvec(after_phase.m, part_a);
  const auto v = matvec(after_phase.m, part_b);

  TrialKernelParams p;
  for (int i = 0; i < 4; ++i) {
    const Complex w = u[i] * std::conj(v[i]);
    p.coef_const[i] = std::norm(u[i]) + std::norm(v[i]);
    p.coef_cos[i] = 2.0 * w.real();
    p.coef_sin[i] = -2.0 * w.imag();
  }
  p.phase_offset = noise.phase_offset;
  p.phase_sigma = noise.phase_sigma;
  p.herald_eff = det.herald_efficiency;
  p.eta = det.eta;
  p.dark_click_prob = det.dark_click_prob();
  p.seed = seed;
  p.stream = stream;
  return p;
}

std::vector<ConfusionInput> bell_confusion_inputs() {
  std::vector<ConfusionInput> inputs;
  for (int i = 0; i < 4; ++i) {
    const auto label = static_cast<BellLabel>(i);
    inputs.push_back({std::string(to_string(label)), settings_for(label)});
  }
  return inputs;
}

CountTable run_confusion(std::span<const ConfusionInput> inputs, std::uint64_t trials,
                         const ChannelNoise& noise, const DetectorModel& det,
                         std::uint64_t seed, const ExecPolicy& policy) {
  CountTable table;
  table.trials = trials;
  table.seed = seed;
  table.noise = noise;
  table.detector = det;
  table.port_names = analyzer_port_names(AnalyzerKind::Bell);
  for (std::size_t row = 0; row < inputs.size(); ++row) {
    const PhotonState prepared = prepare(inputs[row].settings);
    const TrialKernelParams params =
        make_kernel_params(prepared, noise, det, bell_analyzer_unitary(), seed,
                           streams::kConfusionRowBase + static_cast<std::uint32_t>(row));
    const ClickHistogram hist = run_trials_threaded(params, trials, policy);
    table.prepared.push_back(inputs[row].label);
    table.port_clicks.push_back(port_totals(hist));
    table.no_click.push_back(hist[0]);
  }
  return table;
}

std::string CountTable::to_csv() const {
  std::string out = "prepared,portΨ+,portΨ−,portΦ+,portΦ−,none\n";
  for (std::size_t r = 0; r < prepared.size(); ++r) {
    out += prepared[r];
    for (const auto c : port_clicks[r]) out += "," + std::to_string(c);
    out += "," + std::to_string(no_click[r]) + "\n";
  }
  return out;
}

std::string CountTable::to_json() const {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < prepared.size(); ++r)
    rows.push_back(ordered_json{{"prepared", prepared[r]},
                                {"clicks", port_clicks[r]},
                                {"none", no_click[r]}});
  const ordered_json doc{{"table", "confusion"},
                         {"trials", trials},
                         {"seed", seed},
                         {"noise", noise_json(noise)},
                         {"detector", detector_json(detector)},
                         {"ports", port_names},
                         {"rows", rows}};
  return doc.dump(2) + "\n";
}

PhaseSweepTable phase_sweep(const PrepSettings& prep, std::span<const double> offsets,
                            std::uint64_t trials, const DetectorModel& det,
                            std::uint64_t seed, const ExecPolicy& policy) {
  if (offsets.empty()) throw std::invalid_argument("phase_sweep: empty offset grid");
  const PhotonState prepared = prepare(prep);

  PhaseSweepTable table;
  table.trials = trials;
  table.seed = seed;
  table.port_names = analyzer_port_names(AnalyzerKind::Bell);
  for (std::size_t g = 0; g < offsets.size(); ++g) {
    ChannelNoise noise;
    noise.phase_offset = offsets[g];
    const TrialKernelParams params =
        make_kernel_params(prepared, noise, det, bell_analyzer_unitary(), seed,
                           streams::kSweepPointBase + static_cast<std::uint32_t>(g));
    const ClickHistogram hist = run_trials_threaded(params, trials, policy);
    const auto ports = port_totals(hist);

    PhaseSweepRow row;
    row.offset_rad = offsets[g];
    const double c = std::cos(offsets[g]), s = std::sin(offsets[g]);
    for (int i = 0; i < 4; ++i) {
      row.analytic[i] =
          std::max(0.0, params.coef_const[i] + params.coef_cos[i] * c + params.coef_sin[i] * s);
      row.empirical[i] = static_cast<double>(ports[i]) / static_cast<double>(trials);
    }
    row.no_click_frac = static_cast<double>(hist[0]) / static_cast<double>(trials);
    table.rows.push_back(row);
  }
  return table;
}

std::string PhaseSweepTable::to_csv() const {
  std::string out = "phi";
  for (const auto& n : port_names) out += ",analytic_" + n;
  for (const auto& n : port_names) out += ",empirical_" + n;
  out += ",none\n";
  for (const auto& row : rows) {
    out += format_double(row.offset_rad);
    for (const auto a : row.analytic) out += "," + format_double(a);
    for (const auto e : row.empirical) out += "," + format_double(e);
    out += "," + format_double(row.no_click_frac) + "\n";
  }
  return out;
}

std::string PhaseSweepTable::to_json() const {
  ordered_json rows_json = ordered_json::array();
  for (const auto& row : rows)
    rows_json.push_back(ordered_json{{"phi", row.offset_rad},
                                     {"analytic", row.analytic},
                                     {"empirical", row.empirical},
                                     {"none", row.no_click_frac}});
  const ordered_json doc{{"table", "phase_sweep"},
                         {"trials", trials},
                         {"seed", seed},
                         {"ports", port_names},
                         {"rows", rows_json}};
  return doc.dump(2) + "\n";
}

}  // namespace sptq
