#include "asp/plasticity.hpp"

#include <algorithm>
#include <cmath>

namespace asp {

TraceDecay make_trace_decay(double dt, const PlasticityConfig& cfg) {
  return {std::exp(-dt / cfg.tau_rec), std::exp(-dt / cfg.tau_acc),
          std::exp(-dt / cfg.tau_post_trace)};
}

void decay_traces(TraceState& t, const TraceDecay& f) {
  for (double& x : t.pre_rec) x *= f.f_rec;
  for (double& x : t.pre_acc) x *= f.f_acc;
  for (double& x : t.post) x *= f.f_post;
}

void decay_traces(TraceState& t, double dt, const PlasticityConfig& cfg) {
  decay_traces(t, make_trace_decay(dt, cfg));
}

void bump_traces(TraceState& t, std::span<const std::uint32_t> input_spikes,
                 std::span<const std::uint32_t> exc_spikes) {
  for (std::uint32_t i : input_spikes) {
    t.pre_rec[i] = 1.0;  // only the most recent spike counts
    t.pre_acc[i] += 1.0;
  }
  for (std::uint32_t j : exc_spikes) t.post[j] += 1.0;
}

double asp_recovery_delta(double pre_rec, double pre_acc, double post,
                          const PlasticityConfig& cfg) {
  const double eta = cfg.k1_const / (post + 1.0);
  return eta * ((pre_rec - cfg.offset) - cfg.k_const * std::exp2(-pre_acc));
}

void asp_recovery_deltas(const TraceState& t, int j, const PlasticityConfig& cfg,
                         std::vector<double>& out) {
  const int n = int(t.pre_rec.size());
  out.resize(std::size_t(n));
  const double eta = cfg.k1_const / (t.post[j] + 1.0);
  for (int i = 0; i < n; ++i)
    out[i] = eta * ((t.pre_rec[i] - cfg.offset) - cfg.k_const * std::exp2(-t.pre_acc[i]));
}

void asp_recovery_update(WeightMatrix& w, int j, const TraceState& t,
                         const PlasticityConfig& cfg) {
  auto row = w.materialize_row(j);
  const double eta = cfg.k1_const / (t.post[j] + 1.0);
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double dw =
        eta * ((t.pre_rec[i] - cfg.offset) - cfg.k_const * std::exp2(-t.pre_acc[i]));
    row[i] = std::clamp(row[i] + dw, 0.0, cfg.w_max);
  }
}

double compute_tau_leak(double post_j, double theta_j, const PlasticityConfig& cfg) {
  const double e = std::min(theta_j / cfg.theta_norm, 64.0);
  return cfg.k2_const * (post_j + 1.0) * std::exp2(e);
}

void asp_decay_step(WeightMatrix& w, const TraceState& t,
                    std::span<const double> thetas, double dt,
                    const PlasticityConfig& cfg, DecayMode mode) {
  const int rows = w.rows();
  if (mode == DecayMode::Exponential) {
    for (int j = 0; j < rows; ++j) {
      const double tl = compute_tau_leak(t.post[j], thetas[j], cfg);
      w.decay_row_exponential(j, std::exp(-cfg.alpha * dt / tl));
    }
  } else {
    for (int j = 0; j < rows; ++j) {
      const double tl = compute_tau_leak(t.post[j], thetas[j], cfg);
      w.decay_row_linear(j, cfg.alpha_lin * dt / tl);
    }
  }
}

double stdp_powerlaw_delta(double pre_rec, double w, const PlasticityConfig& cfg) {
  const double room = std::max(0.0, cfg.w_max - w);
  const double shaped = cfg.stdp_mu == 1.0 ? room : std::pow(room, cfg.stdp_mu);
  return cfg.stdp_eta * (pre_rec - cfg.offset) * shaped;
}

void stdp_powerlaw_update(WeightMatrix& w, int j, const TraceState& t,
                          const PlasticityConfig& cfg) {
  auto row = w.materialize_row(j);
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = std::clamp(row[i] + stdp_powerlaw_delta(t.pre_rec[i], row[i], cfg), 0.0,
                        cfg.w_max);
  }
}

void isolated_decay_update(WeightMatrix& w, IsolatedDecayState& s,
                           std::span<const std::uint32_t> input_spikes, double dt,
                           const PlasticityConfig& cfg) {
  const double f_tr = std::exp(-dt / cfg.tau_trace_iso);
  for (double& p : s.pre_trace) p *= f_tr;
  for (std::uint32_t i : input_spikes) s.pre_trace[i] += 1.0;

  // uniform leak; the drive lands only on columns whose input fired, scaled
  // by the trace value at the spike instant
  const double f_w = std::exp(-cfg.alpha_iso * dt / cfg.tau_leak_iso);
  const int rows = w.rows();
  for (int j = 0; j < rows; ++j) {
    auto row = w.materialize_row(j);
    for (double& v : row) v *= f_w;
    for (std::uint32_t i : input_spikes)
      row[i] = std::min(row[i] + s.pre_trace[i] / cfg.tau_leak_iso, cfg.w_max);
  }
}

void clamp_weights(WeightMatrix& w, double w_max) {
  w.materialize_all();
  for (int j = 0; j < w.rows(); ++j) {
    auto row = w.materialize_row(j);
    for (double& v : row) v = std::clamp(v, 0.0, w_max);
  }
}

}  // namespace asp
