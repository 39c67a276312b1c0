#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "asp/encoding.hpp"
#include "asp/weights.hpp"

namespace asp {

// Fixed-step clock. Time is derived from the step index, so "now" is always
// an exact integer multiple of dt and never accumulates rounding error.
struct SimClock {
  double dt = 0.5;  // ms
  std::int64_t step = 0;
  double now() const { return double(step) * dt; }
};

struct LifParams {
  double tau_mem;           // membrane time constant, ms
  double v_rest;            // mV
  double v_reset;           // mV
  double v_thresh;          // mV
  double refractory;        // ms
  double tau_post_current;  // synaptic-current time constant, ms
};

struct NeuronState {
  double v_mem = 0.0;
  double i_syn = 0.0;                // one current accumulator per neuron
  double refractory_until = -1.0;    // absolute ms
  double theta = 0.0;                // homeostatic threshold offset, >= 0
  std::uint64_t spike_count = 0;
};

struct EngineParams {
  LifParams exc{100.0, -65.0, -65.0, -52.0, 5.0, 5.0};
  LifParams inh{10.0, -60.0, -45.0, -40.0, 2.0, 2.0};
  double theta_plus = 0.05;  // mV added to theta per spike
  double tau_theta = 1e7;    // ms
};

// Two-layer network: inputs fully connected to excitatory neurons, one
// inhibitory neuron per excitatory neuron. Each inhibitory neuron, when it
// fires, suppresses every excitatory neuron except its own partner;
// inhibition lands one timestep after the inhibitory spike.
struct NetworkState {
  int n_input = 0;
  int n_exc = 0;
  std::vector<NeuronState> exc, inh;
  WeightMatrix weights;  // n_exc x n_input, entries in [0, w_max]
  double w_inh = 120.0;
  double w_exc_to_inh = 500.0;
  std::vector<std::uint32_t> last_inh_spikes;
};

NetworkState make_network(int n_input, int n_exc, const EngineParams& ep,
                          double w_inh, double w_exc_to_inh);

// Resets membrane/current/refractory state and pending inhibition; weights,
// theta and spike counters are preserved. Used to present images on a
// trained network independently of one another.
void reset_dynamic_state(NetworkState& net, const EngineParams& ep);

struct StepResult {
  std::vector<std::uint32_t> exc_spikes;
  std::vector<std::uint32_t> inh_spikes;
  std::vector<std::uint32_t> input_spikes;  // indices of inputs that fired

  void clear() {
    exc_spikes.clear();
    inh_spikes.clear();
    input_spikes.clear();
  }
};

// One exponential-Euler step of every synaptic-current accumulator:
// currents decay by exp(-dt/tau_post_current), each spiking input i adds
// w[j][i] to neuron j, and every inhibitory spike from the previous step
// subtracts w_inh from all excitatory neurons except its partner.
void integrate_synaptic_current(NetworkState& net, const InputSpikes& input,
                                const std::vector<std::uint32_t>& inh_spikes,
                                double dt, const EngineParams& ep);

// Membrane update for one neuron over (now-dt, now]. During the refractory
// window the potential is held at v_reset. Returns true if the neuron fired
// this step (threshold is v_thresh + theta).
bool update_membrane(NeuronState& n, const LifParams& p, double dt, double now);

// theta decays by exp(-dt/tau_theta) every step and grows by theta_plus on
// a spike.
void apply_homeostasis(NeuronState& n, bool spiked, double dt, double theta_plus,
                       double tau_theta);

// One full network step: excitatory currents and membranes, one-to-one
// forwarding of excitatory spikes to the inhibitory layer, inhibitory
// membranes, homeostasis, and recording of inhibitory spikes for the next
// step's lateral inhibition. Deterministic given state and inputs.
void advance_timestep(NetworkState& net, const InputSpikes& input, SimClock& clock,
                      const EngineParams& ep, StepResult& out, bool adapt_theta = true);

struct PresentOptions {
  double duration_ms = 350.0;
  double rest_ms = 150.0;
  int min_spikes = 5;
  double rate_boost_hz = 32.0;
  int max_retries = 8;
  bool adapt_theta = true;
  bool record_spike_log = false;
};

struct PresentationResult {
  std::vector<std::uint32_t> spike_counts;  // per excitatory neuron, stimulus window
  std::vector<std::pair<double, std::uint32_t>> spike_log;  // (t_ms, neuron)
  int retries = 0;
  bool degenerate = false;     // retry cap hit without reaching min_spikes
  std::int64_t steps = 0;      // total steps simulated, all attempts
};

// Called after every simulated step; plasticity hangs off this.
using StepHook =
    std::function<void(NetworkState&, const StepResult&, double /*t_end_ms*/)>;

// Poisson-samples the image for duration_ms, then runs rest_ms with silent
// inputs (currents and membranes relax; the hook still runs every step). If
// fewer than min_spikes excitatory spikes occurred in the stimulus window,
// all input rates are boosted by rate_boost_hz and the presentation repeats,
// up to max_retries; exceeding the cap flags the result degenerate.
PresentationResult run_presentation(NetworkState& net, RateImage rates,
                                    const PresentOptions& opt, SimClock& clock,
                                    const EngineParams& ep, RngStream& rng,
                                    const StepHook& hook = {});

}  // namespace asp
