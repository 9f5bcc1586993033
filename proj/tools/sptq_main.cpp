// sptq: prepare, analyze and transmit single-photon two-qubit states.
//
// Subcommands: state, confusion, qkd, sweep. Angles for wave plates are in
// degrees (matching lab convention), spatial phases in radians. Every run
// with an explicit --seed is byte-reproducible, and --threads/--simd never
// change output bytes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sptq/detection.hpp"
#include "sptq/qkd.hpp"

namespace {

using sptq::ChannelNoise;
using sptq::DetectorModel;
using sptq::ExecPolicy;
using sptq::SimdMode;
using ordered_json = nlohmann::ordered_json;

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string simd = "auto";
  double phase_sigma = 0.0;
  double phase_offset = 0.0;
  double misalign_a = 0.0;
  double misalign_b = 0.0;
  std::vector<double> eta;
  double dark_rate = 0.0;
  double gate_window = 3e-9;
  double herald_eff = 1.0;
  std::string out;
  std::string format = "csv";
};

void add_exec_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "Run seed (default 0)");
  cmd->add_option("--threads", o.threads, "Worker threads (never changes output bytes)")
      ->check(CLI::Range(1, 256));
  cmd->add_option("--simd", o.simd, "Kernel selection")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

void add_channel_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--phase-sigma", o.phase_sigma, "Std dev of path-a phase jitter [rad]")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--phase-offset", o.phase_offset, "Deterministic path-a phase error [rad]");
  cmd->add_option("--misalign-a", o.misalign_a, "Path-a polarization misalignment [deg]");
  cmd->add_option("--misalign-b", o.misalign_b, "Path-b polarization misalignment [deg]");
  cmd->add_option("--eta", o.eta,
                  "Detector efficiencies: one value for all ports or four comma-separated")
      ->delimiter(',');
  cmd->add_option("--dark-rate", o.dark_rate, "Dark counts per second per detector")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--gate-window", o.gate_window, "Coincidence gate [s] (default 3e-9)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--herald-eff", o.herald_eff, "Probability the heralded photon arrives")
      ->check(CLI::Range(0.0, 1.0));
}

void add_output_options(CLI::App* cmd, CommonOpts& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--out", o.out, "Write the artifact to PATH instead of stdout");
  if (default_format == "json")
    cmd->add_option("--format", o.format)->check(CLI::IsMember({"json"}));
  else
    cmd->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
}

ChannelNoise make_noise(const CommonOpts& o) {
  return {o.phase_sigma, o.phase_offset, o.misalign_a, o.misalign_b};
}

DetectorModel make_detector(const CommonOpts& o) {
  DetectorModel d;
  if (o.eta.size() == 1) {
    d.eta = {o.eta[0], o.eta[0], o.eta[0], o.eta[0]};
  } else if (o.eta.size() == 4) {
    for (int i = 0; i < 4; ++i) d.eta[i] = o.eta[static_cast<std::size_t>(i)];
  } else if (!o.eta.empty()) {
    throw CLI::ValidationError("--eta", "expects 1 or 4 values");
  }
  for (const double e : d.eta)
    if (e < 0.0 || e > 1.0) throw CLI::ValidationError("--eta", "efficiencies must be in [0,1]");
  d.dark_rate_hz = o.dark_rate;
  d.gate_window_s = o.gate_window;
  d.herald_efficiency = o.herald_eff;
  return d;
}

ExecPolicy make_policy(const CommonOpts& o) {
  ExecPolicy p;
  p.threads = o.threads;
  if (o.simd == "scalar") p.simd = SimdMode::Scalar;
  else if (o.simd == "avx2") p.simd = SimdMode::Avx2;
  else p.simd = SimdMode::Auto;
  return p;
}

// The full payload is assembled before anything is written, so a failing run
// never leaves a partial file behind.
void emit(const CommonOpts& o, const std::string& payload) {
  if (o.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open output file: " + o.out);
  f << payload;
  if (!f) throw std::runtime_error("write failed: " + o.out);
}

struct StateArgs {
  double hwp = 22.5;
  double phi = 0.0;
  bool flip_a = false, flip_b = false;
  std::optional<double> theta_a, theta_b;
  std::string format = "text";
};

std::string nearest_named_label(const sptq::PhotonState& s) {
  for (const auto& named : sptq::named_states())
    if (sptq::fidelity(named.state, s) > 1.0 - 1e-9) return std::string(named.label);
  return {};
}

int cmd_state(const StateArgs& a, const CommonOpts& o) {
  sptq::PrepSettings settings;
  settings.prep_hwp_deg = a.hwp;
  settings.phi_rad = a.phi;
  if (a.theta_a) settings.plate_a_deg = a.theta_a;
  else if (a.flip_a) settings.plate_a_deg = 45.0;
  if (a.theta_b) settings.plate_b_deg = a.theta_b;
  else if (a.flip_b) settings.plate_b_deg = 45.0;

  const sptq::PhotonState s = sptq::prepare(settings);
  const std::string label = nearest_named_label(s);
  static const char* kAmpNames[4] = {"aH", "aV", "bH", "bV"};

  std::string payload;
  if (a.format == "json") {
    ordered_json amps = ordered_json::array();
    for (const auto& amp : s.amp)
      amps.push_back(ordered_json{{"re", amp.real()}, {"im", amp.imag()}});
    const ordered_json doc{{"amplitudes", amps},
                           {"label", label.empty() ? ordered_json{} : ordered_json(label)}};
    payload = doc.dump(2) + "\n";
  } else {
    for (int i = 0; i < 4; ++i) {
      payload += kAmpNames[i];
      payload += ": " + sptq::format_double(s.amp[static_cast<std::size_t>(i)].real()) + " + " +
                 sptq::format_double(s.amp[static_cast<std::size_t>(i)].imag()) + "i\n";
    }
    payload += "state: " + (label.empty() ? std::string("(no named match)") : label) + "\n";
  }
  emit(o, payload);
  return 0;
}

int cmd_confusion(std::uint64_t trials, const CommonOpts& o) {
  const auto inputs = sptq::bell_confusion_inputs();
  const sptq::CountTable table =
      sptq::run_confusion(inputs, trials, make_noise(o), make_detector(o), o.seed,
                          make_policy(o));
  emit(o, o.format == "json" ? table.to_json() : table.to_csv());
  return 0;
}

int cmd_qkd(std::uint64_t photons, bool eve, const std::string& trace_path,
            const CommonOpts& o) {
  sptq::QkdParams params;
  params.n_photons = photons;
  params.noise = make_noise(o);
  params.detector = make_detector(o);
  params.eve_active = eve;
  params.seed = o.seed;

  std::vector<sptq::QkdRoundTrace> trace;
  const sptq::QkdReport report =
      sptq::run_qkd(params, make_policy(o), trace_path.empty() ? nullptr : &trace);
  if (!trace_path.empty()) {
    std::ofstream f(trace_path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open trace file: " + trace_path);
    f << sptq::trace_to_csv(trace);
  }
  emit(o, report.to_json());
  return 0;
}

int cmd_sweep(const std::vector<double>& phi_grid, const std::vector<double>& sigma_grid,
              std::uint64_t trials, bool eve, const CommonOpts& o) {
  if (!phi_grid.empty()) {
    const sptq::PhaseSweepTable table =
        sptq::phase_sweep(sptq::settings_for(sptq::BellLabel::PsiPlus), phi_grid, trials,
                          make_detector(o), o.seed, make_policy(o));
    emit(o, o.format == "json" ? table.to_json() : table.to_csv());
    return 0;
  }

  // sigma sweep: one QKD run per grid point; the analytic column is the
  // ideal-detector no-eavesdropper expectation (1 - cos(offset) e^{-s^2/2})/8
  std::string csv = "sigma,sent,sifted,qber,qber_b,qber_bprime,analytic_ideal_qber\n";
  ordered_json rows = ordered_json::array();
  for (std::size_t g = 0; g < sigma_grid.size(); ++g) {
    sptq::QkdParams params;
    params.n_photons = trials;
    params.noise = make_noise(o);
    params.noise.phase_sigma = sigma_grid[g];
    params.detector = make_detector(o);
    params.eve_active = eve;
    params.seed = o.seed + g;
    const sptq::QkdReport r = sptq::run_qkd(params, make_policy(o));
    const double analytic =
        (1.0 - std::cos(params.noise.phase_offset) *
                   std::exp(-0.5 * sigma_grid[g] * sigma_grid[g])) / 8.0;
    csv += sptq::format_double(sigma_grid[g]) + "," + std::to_string(r.sent) + "," +
           std::to_string(r.sifted) + "," + sptq::format_double(r.qber) + "," +
           sptq::format_double(r.qber_b) + "," + sptq::format_double(r.qber_bprime) + "," +
           sptq::format_double(analytic) + "\n";
    rows.push_back(ordered_json{{"sigma", sigma_grid[g]},
                                {"sent", r.sent},
                                {"sifted", r.sifted},
                                {"qber", r.qber},
                                {"qber_b", r.qber_b},
                                {"qber_bprime", r.qber_bprime},
                                {"analytic_ideal_qber", analytic}});
  }
  if (o.format == "json") {
    const ordered_json doc{{"table", "sigma_sweep"}, {"trials", trials}, {"rows", rows}};
    emit(o, doc.dump(2) + "\n");
  } else {
    emit(o, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-photon two-qubit state preparation, Bell analysis and QKD simulator"};
  app.require_subcommand(1);

  StateArgs state_args;
  CommonOpts state_opts;
  auto* state = app.add_subcommand(
      "state", "Print the prepared state for given circuit settings");
  state->add_option("--hwp", state_args.hwp, "Preparation HWP angle [deg]")->required();
  state->add_option("--phi", state_args.phi, "Spatial phase on path a [rad]");
  state->add_flag("--flip-a", state_args.flip_a, "45 deg plate in path a");
  state->add_flag("--flip-b", state_args.flip_b, "45 deg plate in path b");
  state->add_option("--theta-a", state_args.theta_a, "Plate angle in path a [deg]")
      ->excludes("--flip-a");
  state->add_option("--theta-b", state_args.theta_b, "Plate angle in path b [deg]")
      ->excludes("--flip-b");
  state->add_option("--format", state_args.format)->check(CLI::IsMember({"text", "json"}));
  state->add_option("--out", state_opts.out, "Write to PATH instead of stdout");

  std::uint64_t confusion_trials = 10000;
  CommonOpts confusion_opts;
  auto* confusion = app.add_subcommand(
      "confusion", "Bell-state confusion table: N trials per prepared Bell state");
  confusion->add_option("--trials", confusion_trials, "Trials per prepared state")
      ->check(CLI::PositiveNumber);
  add_exec_options(confusion, confusion_opts);
  add_channel_options(confusion, confusion_opts);
  add_output_options(confusion, confusion_opts, "csv");

  std::uint64_t qkd_photons = 100000;
  bool qkd_eve = false;
  std::string qkd_trace;
  CommonOpts qkd_opts;
  auto* qkd = app.add_subcommand("qkd", "Two-basis key exchange simulation");
  qkd->add_option("--photons", qkd_photons, "Number of heralded photons sent")
      ->check(CLI::PositiveNumber);
  qkd->add_flag("--eve", qkd_eve, "Enable the intercept-resend eavesdropper");
  qkd->add_option("--trace", qkd_trace, "Also dump a per-round CSV audit trail to PATH");
  add_exec_options(qkd, qkd_opts);
  add_channel_options(qkd, qkd_opts);
  add_output_options(qkd, qkd_opts, "json");

  std::vector<double> phi_grid, sigma_grid;
  std::uint64_t sweep_trials = 100000;
  bool sweep_eve = false;
  CommonOpts sweep_opts;
  auto* sweep = app.add_subcommand(
      "sweep", "Port frequencies vs path-a phase, or QBER vs phase jitter");
  auto* phi_opt = sweep->add_option("--phi-grid", phi_grid, "Phase offsets [rad]")
                      ->delimiter(',')
                      ->expected(1, -1);
  sweep->add_option("--sigma-grid", sigma_grid, "Phase jitter sigmas [rad]")
      ->delimiter(',')
      ->expected(1, -1)
      ->excludes(phi_opt);
  sweep->add_option("--trials", sweep_trials, "Trials (or photons) per grid point")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--eve", sweep_eve, "Eavesdropper during sigma sweeps");
  add_exec_options(sweep, sweep_opts);
  add_channel_options(sweep, sweep_opts);
  add_output_options(sweep, sweep_opts, "csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (state->parsed()) return cmd_state(state_args, state_opts);
    if (confusion->parsed()) return cmd_confusion(confusion_trials, confusion_opts);
    if (qkd->parsed()) return cmd_qkd(qkd_photons, qkd_eve, qkd_trace, qkd_opts);
    if (sweep->parsed()) {
      if (phi_grid.empty() && sigma_grid.empty())
        throw CLI::ValidationError("sweep", "one of --phi-grid / --sigma-grid is required");
      return cmd_sweep(phi_grid, sigma_grid, sweep_trials, sweep_eve, sweep_opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
