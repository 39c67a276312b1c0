#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asp/plasticity.hpp"
#include "asp/sim.hpp"

namespace asp {

// Straight-line scalar reference for a 1-input x 1-excitatory network under
// the exponential-leak rule. Written directly from the governing equations
// with plain doubles, independently of the engine's data structures, so the
// two implementations can be compared step by step.
struct ScalarRefParams {
  double dt = 0.5;
  // neuron
  double tau_syn = 5.0;
  double tau_mem = 100.0;
  double v_rest = -65.0, v_reset = -65.0, v_thresh = -64.0;
  double refractory = 5.0;
  double theta_plus = 0.02, tau_theta = 5000.0;
  // plasticity
  double tau_rec = 4.0, tau_acc = 40.0, tau_post_trace = 80.0;
  double offset = 0.2, k_const = 0.01, k1_const = 0.01, k2_const = 1e2;
  double alpha = 0.01, theta_norm = 1.0, w_max = 1.0;
  double w0 = 0.9;
};

struct ScalarRefStep {
  double v, i, theta;
  double pre_rec, pre_acc, post;
  double w;
  bool spiked;
};

std::vector<ScalarRefStep> scalar_reference_run(const ScalarRefParams& p,
                                                const std::vector<std::uint8_t>& pre);

// Runs the engine on the same scripted pre-spike train and reports the
// largest absolute divergence from the scalar reference, per quantity.
struct ScalarCompareResult {
  double max_dv = 0.0, max_di = 0.0, max_dtheta = 0.0;
  double max_dtrace = 0.0, max_dw = 0.0;
  int steps = 0;
  int post_spikes = 0;
  double seconds = 0.0;

  double worst() const;
};

ScalarCompareResult compare_engine_to_scalar_reference(const ScalarRefParams& p,
                                                       int steps,
                                                       std::uint64_t script_seed);

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

// The release-gate suite: engine-vs-scalar equivalence, trace closed forms,
// rule spot values, leak-constant spot values and monotonicity, encoder
// determinism. Parameters are injectable so tests can verify the checks
// actually catch perturbations.
std::vector<CheckResult> run_selfchecks(const PlasticityConfig& cfg = {});

}  // namespace asp
