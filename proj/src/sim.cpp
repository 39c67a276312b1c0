#include "asp/sim.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "asp/errors.hpp"

namespace asp {

NetworkState make_network(int n_input, int n_exc, const EngineParams& ep,
                          double w_inh, double w_exc_to_inh) {
  if (n_input < 1 || n_exc < 1)
    throw ConfigError("network needs at least one input and one excitatory neuron");
  NetworkState net;
  net.n_input = n_input;
  net.n_exc = n_exc;
  net.exc.assign(std::size_t(n_exc), NeuronState{});
  net.inh.assign(std::size_t(n_exc), NeuronState{});  // one partner each
  net.weights = WeightMatrix(n_exc, n_input, 0.0);
  net.w_inh = w_inh;
  net.w_exc_to_inh = w_exc_to_inh;
  reset_dynamic_state(net, ep);
  return net;
}

void reset_dynamic_state(NetworkState& net, const EngineParams& ep) {
  for (auto& n : net.exc) {
    n.v_mem = ep.exc.v_rest;
    n.i_syn = 0.0;
    n.refractory_until = -1.0;
    n.spike_count = 0;
  }
  for (auto& n : net.inh) {
    n.v_mem = ep.inh.v_rest;
    n.i_syn = 0.0;
    n.refractory_until = -1.0;
    n.spike_count = 0;
  }
  net.last_inh_spikes.clear();
}

void integrate_synaptic_current(NetworkState& net, const InputSpikes& input,
                                const std::vector<std::uint32_t>& inh_spikes,
                                double dt, const EngineParams& ep) {
  if (int(input.mask.size()) != net.n_input)
    throw ConfigError("input spike vector has " + std::to_string(input.mask.size()) +
                      " entries, network expects " + std::to_string(net.n_input));

  const double f = std::exp(-dt / ep.exc.tau_post_current);
  for (auto& n : net.exc) n.i_syn *= f;

  for (std::uint32_t i : input.list)
    for (int j = 0; j < net.n_exc; ++j) net.exc[j].i_syn += net.weights.value(j, int(i));

  // lateral inhibition from the previous step; each inhibitory neuron spares
  // its own partner
  if (!inh_spikes.empty()) {
    const double total = net.w_inh * double(inh_spikes.size());
    for (auto& n : net.exc) n.i_syn -= total;
    for (std::uint32_t k : inh_spikes) net.exc[k].i_syn += net.w_inh;
  }
}

bool update_membrane(NeuronState& n, const LifParams& p, double dt, double now) {
  if (now < n.refractory_until) {
    n.v_mem = p.v_reset;
    return false;
  }
  const double target = p.v_rest + n.i_syn;
  n.v_mem = target + (n.v_mem - target) * std::exp(-dt / p.tau_mem);
  if (!std::isfinite(n.v_mem))
    throw NumericalFault("membrane potential is not finite");
  if (n.v_mem >= p.v_thresh + n.theta) {
    n.v_mem = p.v_reset;
    n.refractory_until = now + p.refractory;
    ++n.spike_count;
    return true;
  }
  return false;
}

void apply_homeostasis(NeuronState& n, bool spiked, double dt, double theta_plus,
                       double tau_theta) {
  n.theta *= std::exp(-dt / tau_theta);
  if (spiked) n.theta += theta_plus;
}

namespace {

// Exponential-Euler factors for one step; recomputed only when dt changes.
struct StepFactors {
  double dt = -1.0;
  double syn_exc, mem_exc, syn_inh, mem_inh, theta;
};

void fill_factors(StepFactors& f, double dt, const EngineParams& ep) {
  if (f.dt == dt) return;
  f.dt = dt;
  f.syn_exc = std::exp(-dt / ep.exc.tau_post_current);
  f.mem_exc = std::exp(-dt / ep.exc.tau_mem);
  f.syn_inh = std::exp(-dt / ep.inh.tau_post_current);
  f.mem_inh = std::exp(-dt / ep.inh.tau_mem);
  f.theta = std::exp(-dt / ep.tau_theta);
}

inline bool membrane_step(NeuronState& n, const LifParams& p, double f_mem,
                          double now) {
  if (now < n.refractory_until) {
    n.v_mem = p.v_reset;
    return false;
  }
  const double target = p.v_rest + n.i_syn;
  n.v_mem = target + (n.v_mem - target) * f_mem;
  if (!std::isfinite(n.v_mem))
    throw NumericalFault("membrane potential is not finite");
  if (n.v_mem >= p.v_thresh + n.theta) {
    n.v_mem = p.v_reset;
    n.refractory_until = now + p.refractory;
    ++n.spike_count;
    return true;
  }
  return false;
}

void advance_with_factors(NetworkState& net, const InputSpikes& input,
                          SimClock& clock, const EngineParams& ep,
                          const StepFactors& f, StepResult& out, bool adapt_theta) {
  out.clear();
  out.input_spikes = input.list;

  if (int(input.mask.size()) != net.n_input)
    throw ConfigError("input spike vector has " + std::to_string(input.mask.size()) +
                      " entries, network expects " + std::to_string(net.n_input));

  // excitatory currents: decay, feedforward drive, then last step's
  // lateral inhibition (own partner spared)
  for (auto& n : net.exc) n.i_syn *= f.syn_exc;
  for (std::uint32_t i : input.list)
    for (int j = 0; j < net.n_exc; ++j) net.exc[j].i_syn += net.weights.value(j, int(i));
  if (!net.last_inh_spikes.empty()) {
    const double total = net.w_inh * double(net.last_inh_spikes.size());
    for (auto& n : net.exc) n.i_syn -= total;
    for (std::uint32_t k : net.last_inh_spikes) net.exc[k].i_syn += net.w_inh;
  }

  const double t_end = double(clock.step + 1) * clock.dt;

  for (int j = 0; j < net.n_exc; ++j)
    if (membrane_step(net.exc[j], ep.exc, f.mem_exc, t_end))
      out.exc_spikes.push_back(std::uint32_t(j));

  // one-to-one forwarding into the inhibitory layer, same step
  for (auto& n : net.inh) n.i_syn *= f.syn_inh;
  for (std::uint32_t j : out.exc_spikes) net.inh[j].i_syn += net.w_exc_to_inh;
  for (int k = 0; k < net.n_exc; ++k)
    if (membrane_step(net.inh[k], ep.inh, f.mem_inh, t_end))
      out.inh_spikes.push_back(std::uint32_t(k));

  if (adapt_theta) {
    for (auto& n : net.exc) n.theta *= f.theta;
    for (std::uint32_t j : out.exc_spikes) net.exc[j].theta += ep.theta_plus;
  }

  net.last_inh_spikes = out.inh_spikes;
  ++clock.step;
}

}  // namespace

void advance_timestep(NetworkState& net, const InputSpikes& input, SimClock& clock,
                      const EngineParams& ep, StepResult& out, bool adapt_theta) {
  StepFactors f;
  fill_factors(f, clock.dt, ep);
  advance_with_factors(net, input, clock, ep, f, out, adapt_theta);
}

PresentationResult run_presentation(NetworkState& net, RateImage rates,
                                    const PresentOptions& opt, SimClock& clock,
                                    const EngineParams& ep, RngStream& rng,
                                    const StepHook& hook) {
  if (opt.duration_ms <= 0.0) throw ConfigError("presentation duration must be > 0");
  PresentationResult res;
  res.spike_counts.assign(std::size_t(net.n_exc), 0);

  const std::int64_t stim_steps = std::llround(opt.duration_ms / clock.dt);
  const std::int64_t rest_steps = std::llround(opt.rest_ms / clock.dt);

  StepFactors f;
  fill_factors(f, clock.dt, ep);

  InputSpikes in;
  StepResult step;
  int attempt = 0;

  for (;;) {
    if (rates_saturate_step(rates, clock.dt))
      std::fprintf(stderr,
                   "warning: input rate saturates one simulation step "
                   "(rate*dt >= 1); spikes will clip\n");

    std::int64_t stim_spikes = 0;
    for (std::int64_t k = 0; k < stim_steps; ++k) {
      sample_spikes(rates, clock.dt, rng, in);
      advance_with_factors(net, in, clock, ep, f, step, opt.adapt_theta);
      stim_spikes += std::int64_t(step.exc_spikes.size());
      for (std::uint32_t j : step.exc_spikes) ++res.spike_counts[j];
      if (opt.record_spike_log)
        for (std::uint32_t j : step.exc_spikes)
          res.spike_log.emplace_back(clock.now(), j);
      if (hook) hook(net, step, clock.now());
      ++res.steps;
    }

    in.reset(net.n_input);
    for (std::int64_t k = 0; k < rest_steps; ++k) {
      advance_with_factors(net, in, clock, ep, f, step, opt.adapt_theta);
      if (opt.record_spike_log)
        for (std::uint32_t j : step.exc_spikes)
          res.spike_log.emplace_back(clock.now(), j);
      if (hook) hook(net, step, clock.now());
      ++res.steps;
    }

    if (stim_spikes >= opt.min_spikes) break;
    if (attempt >= opt.max_retries) {
      res.degenerate = true;
      std::fprintf(stderr,
                   "warning: presentation stayed below %d spikes after %d retries\n",
                   opt.min_spikes, attempt);
      break;
    }
    ++attempt;
    rates.boost_hz += opt.rate_boost_hz;
    std::fill(res.spike_counts.begin(), res.spike_counts.end(), 0u);
  }

  res.retries = attempt;
  return res;
}

}  // namespace asp
