#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sptq/circuits.hpp"
#include "sptq/rng.hpp"
#include "sptq/trial_kernel.hpp"

namespace sptq {

/// Stochastic channel between preparation and analyzer: Gaussian per-trial
/// phase jitter plus a deterministic phase error on path a, and a fixed
/// polarization rotation per path.
struct ChannelNoise {
  double phase_sigma = 0.0;        // rad
  double phase_offset = 0.0;       // rad
  double pol_misalign_a_deg = 0.0;
  double pol_misalign_b_deg = 0.0;
};

/// Gated single-photon detectors, one per analyzer port, plus the heralding
/// trigger. Dark clicks are independent per detector and gate.
struct DetectorModel {
  std::array<double, 4> eta{1.0, 1.0, 1.0, 1.0};
  double dark_rate_hz = 0.0;
  double gate_window_s = 3e-9;
  double herald_efficiency = 1.0;

  double dark_click_prob() const;  // 1 - exp(-rate * window)
};

/// Phase jitter/offset then the per-path rotations. Consumes one Gaussian
/// (two uniforms) from the stream whether or not sigma is zero.
PhotonState apply_channel(const PhotonState& s, const ChannelNoise& n, DrawStream& draw);

/// Click pattern of one gated trial, bit i = detector on port i fired.
/// Consumes 7 uniforms (herald, port, eta, 4 darks) in fixed order.
using ClickMask = unsigned;
ClickMask sample_trial(const OutcomeDistribution& dist, const DetectorModel& d,
                       DrawStream& draw);

/// Accumulated clicks per prepared state and analyzer port. Every clicking
/// detector of a gate is counted, so rows can exceed `trials` when dark
/// counts coincide with the signal; `no_click` counts empty gates.
struct CountTable {
  std::vector<std::string> prepared;
  std::vector<std::array<std::uint64_t, 4>> port_clicks;
  std::vector<std::uint64_t> no_click;
  std::array<std::string, 4> port_names;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  ChannelNoise noise;
  DetectorModel detector;

  std::string to_csv() const;   // fixed header, see implementation
  std::string to_json() const;  // includes the run metadata
};

struct ConfusionInput {
  std::string label;
  PrepSettings settings;
};

/// The four Bell rows of a confusion run, in canonical order.
std::vector<ConfusionInput> bell_confusion_inputs();

/// N heralded trials per prepared state through channel noise, the Bell
/// analyzer and the detector model. Deterministic for a fixed seed.
CountTable run_confusion(std::span<const ConfusionInput> inputs, std::uint64_t trials,
                         const ChannelNoise& noise, const DetectorModel& det,
                         std::uint64_t seed, const ExecPolicy& policy = {});

struct PhaseSweepRow {
  double offset_rad = 0.0;
  std::array<double, 4> analytic{};   // port probabilities before detection
  std::array<double, 4> empirical{};  // clicks / trials
  double no_click_frac = 0.0;
};

struct PhaseSweepTable {
  std::vector<PhaseSweepRow> rows;
  std::array<std::string, 4> port_names;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Bell-analyzer port statistics of the prepared state under a swept
/// deterministic path-a phase (no jitter).
PhaseSweepTable phase_sweep(const PrepSettings& prep, std::span<const double> offsets,
                            std::uint64_t trials, const DetectorModel& det,
                            std::uint64_t seed, const ExecPolicy& policy = {});

/// Kernel inputs for `prepared` traversing `noise` into `analyzer` under
/// `det`; exposed for the kernel-vs-operations equivalence tests.
TrialKernelParams make_kernel_params(const PhotonState& prepared, const ChannelNoise& noise,
                                     const DetectorModel& det, const OpticalElement& analyzer,
                                     std::uint64_t seed, std::uint32_t stream);

/// Shortest round-trip decimal form; the one double formatter used in
/// artifacts so identical runs emit identical bytes.
std::string format_double(double v);

}  // namespace sptq
