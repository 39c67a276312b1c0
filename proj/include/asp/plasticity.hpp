#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asp/weights.hpp"

namespace asp {

enum class PlasticityRule {
  AspExponential,  // recovery updates plus exponential adaptive leak
  AspLinear,       // recovery updates plus linear adaptive leak
  StdpPowerLaw,    // weight-dependent power-law rule, no leak phase
  IsolatedDecay,   // pre-driven potentiation with uniform leak, no post term
  None,
};

enum class DecayMode { Exponential, Linear };

struct PlasticityConfig {
  PlasticityRule rule = PlasticityRule::AspExponential;

  // trace time constants, ms
  double tau_rec = 4.0;
  double tau_acc = 40.0;
  double tau_post_trace = 80.0;

  // recovery rule
  double offset = 0.2;
  double k_const = 0.01;
  double k1_const = 0.01;

  // leak phase
  double k2_const = 1e2;
  double alpha = 1e-4;      // exponential decay rate (nominal run value)
  double alpha_lin = 0.01;  // linear decay rate
  double theta_norm = 1.0;  // mV per doubling of the leak time constant

  double w_max = 1.0;

  // isolated-decay rule
  double tau_leak_iso = 200.0;
  double alpha_iso = 0.01;
  double tau_trace_iso = 20.0;

  // power-law baseline
  double stdp_eta = 0.01;
  double stdp_mu = 1.0;
};

// The three synaptic traces. pre_rec records only the most recent input
// spike (set to 1, never added), pre_acc and post accumulate.
struct TraceState {
  std::vector<double> pre_rec;  // per input
  std::vector<double> pre_acc;  // per input
  std::vector<double> post;     // per excitatory neuron

  void init(int n_input, int n_exc) {
    pre_rec.assign(std::size_t(n_input), 0.0);
    pre_acc.assign(std::size_t(n_input), 0.0);
    post.assign(std::size_t(n_exc), 0.0);
  }
};

// Per-step multiplicative decay factors, precomputed once per run.
struct TraceDecay {
  double f_rec, f_acc, f_post;
};
TraceDecay make_trace_decay(double dt, const PlasticityConfig& cfg);

void decay_traces(TraceState& t, double dt, const PlasticityConfig& cfg);
void decay_traces(TraceState& t, const TraceDecay& f);

void bump_traces(TraceState& t, std::span<const std::uint32_t> input_spikes,
                 std::span<const std::uint32_t> exc_spikes);

// Weight change for one synapse when its post-neuron fires:
//   dw = k1/(post+1) * [(pre_rec - offset) - k * 2^(-pre_acc)]
// Uses trace values as of after this step's decay and bump.
double asp_recovery_delta(double pre_rec, double pre_acc, double post,
                          const PlasticityConfig& cfg);

// Deltas for every input of row j (without applying them).
void asp_recovery_deltas(const TraceState& t, int j, const PlasticityConfig& cfg,
                         std::vector<double>& out);

// Applies the recovery rule to row j and clamps it to [0, w_max]. Call only
// on steps where excitatory neuron j spiked.
void asp_recovery_update(WeightMatrix& w, int j, const TraceState& t,
                         const PlasticityConfig& cfg);

// Leak time constant: k2 * (post+1) * 2^(theta/theta_norm), strictly
// increasing in both arguments. The exponent is capped at 64 to keep the
// result finite for runaway thresholds.
double compute_tau_leak(double post_j, double theta_j, const PlasticityConfig& cfg);

// The leak phase: every row decays toward 0 with its own tau_leak, every
// timestep, whether or not anything spiked.
void asp_decay_step(WeightMatrix& w, const TraceState& t,
                    std::span<const double> thetas, double dt,
                    const PlasticityConfig& cfg, DecayMode mode);

// Power-law rule for one synapse: eta * (pre_rec - offset) * (w_max - w)^mu.
double stdp_powerlaw_delta(double pre_rec, double w, const PlasticityConfig& cfg);

// Applies the power-law rule to row j and clamps. Call on post spikes only.
void stdp_powerlaw_update(WeightMatrix& w, int j, const TraceState& t,
                          const PlasticityConfig& cfg);

// Pre-only rule: a dedicated pre-trace (+1 on spike, exponential decay) both
// drives and gates potentiation; all weights leak uniformly. No dependence
// on postsynaptic activity, so all rows receive identical updates.
struct IsolatedDecayState {
  std::vector<double> pre_trace;
  void init(int n_input) { pre_trace.assign(std::size_t(n_input), 0.0); }
};

void isolated_decay_update(WeightMatrix& w, IsolatedDecayState& s,
                           std::span<const std::uint32_t> input_spikes, double dt,
                           const PlasticityConfig& cfg);

void clamp_weights(WeightMatrix& w, double w_max);

}  // namespace asp
