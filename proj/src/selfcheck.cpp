#include "asp/selfcheck.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "asp/encoding.hpp"

namespace asp {

std::vector<ScalarRefStep> scalar_reference_run(const ScalarRefParams& p,
                                                const std::vector<std::uint8_t>& pre) {
  std::vector<ScalarRefStep> out;
  out.reserve(pre.size());

  double v = p.v_rest, i = 0.0, theta = 0.0;
  double pre_rec = 0.0, pre_acc = 0.0, post = 0.0;
  double w = p.w0;
  double refractory_until = -1.0;

  for (std::size_t k = 0; k < pre.size(); ++k) {
    const double t_end = double(k + 1) * p.dt;
    const bool fired = pre[k] != 0;

    // synaptic current: exact exponential decay plus the weight jump
    i = i * std::exp(-p.dt / p.tau_syn) + (fired ? w : 0.0);

    // membrane: held at reset while refractory, else relaxes toward
    // v_rest + current; spike threshold carries the homeostatic offset
    bool spiked = false;
    if (t_end < refractory_until) {
      v = p.v_reset;
    } else {
      const double target = p.v_rest + i;
      v = target + (v - target) * std::exp(-p.dt / p.tau_mem);
      if (v >= p.v_thresh + theta) {
        spiked = true;
        v = p.v_reset;
        refractory_until = t_end + p.refractory;
      }
    }

    theta = theta * std::exp(-p.dt / p.tau_theta) + (spiked ? p.theta_plus : 0.0);

    // traces: decay every step, then bump on this step's events
    pre_rec *= std::exp(-p.dt / p.tau_rec);
    pre_acc *= std::exp(-p.dt / p.tau_acc);
    post *= std::exp(-p.dt / p.tau_post_trace);
    if (fired) {
      pre_rec = 1.0;
      pre_acc += 1.0;
    }
    if (spiked) post += 1.0;

    // recovery on a post spike, using post-bump trace values
    if (spiked) {
      const double eta = p.k1_const / (post + 1.0);
      const double dw =
          eta * ((pre_rec - p.offset) - p.k_const * std::exp2(-pre_acc));
      w = std::min(std::max(w + dw, 0.0), p.w_max);
    }

    // leak phase, every step, using the post-update theta
    const double tau_leak =
        p.k2_const * (post + 1.0) * std::exp2(std::min(theta / p.theta_norm, 64.0));
    w = w * std::exp(-p.alpha * p.dt / tau_leak);

    out.push_back({v, i, theta, pre_rec, pre_acc, post, w, spiked});
  }
  return out;
}

double ScalarCompareResult::worst() const {
  double m = max_dv;
  m = std::max(m, max_di);
  m = std::max(m, max_dtheta);
  m = std::max(m, max_dtrace);
  m = std::max(m, max_dw);
  return m;
}

ScalarCompareResult compare_engine_to_scalar_reference(const ScalarRefParams& p,
                                                       int steps,
                                                       std::uint64_t script_seed) {
  // scripted pre-spike train: random background plus a regular burst
  std::vector<std::uint8_t> pre(std::size_t(steps), 0);
  RngStream script(script_seed);
  for (int k = 0; k < steps; ++k)
    pre[k] = (script.next_double() < 0.25 || k % 97 == 0) ? 1 : 0;

  const auto t0 = std::chrono::steady_clock::now();
  const auto ref = scalar_reference_run(p, pre);

  EngineParams ep;
  ep.exc = {p.tau_mem, p.v_rest, p.v_reset, p.v_thresh, p.refractory, p.tau_syn};
  ep.theta_plus = p.theta_plus;
  ep.tau_theta = p.tau_theta;

  PlasticityConfig pc;
  pc.rule = PlasticityRule::AspExponential;
  pc.tau_rec = p.tau_rec;
  pc.tau_acc = p.tau_acc;
  pc.tau_post_trace = p.tau_post_trace;
  pc.offset = p.offset;
  pc.k_const = p.k_const;
  pc.k1_const = p.k1_const;
  pc.k2_const = p.k2_const;
  pc.alpha = p.alpha;
  pc.theta_norm = p.theta_norm;
  pc.w_max = p.w_max;

  NetworkState net = make_network(1, 1, ep, 0.0, 0.0);
  net.weights.materialize_row(0)[0] = p.w0;
  TraceState traces;
  traces.init(1, 1);
  const TraceDecay decay = make_trace_decay(p.dt, pc);

  SimClock clock{p.dt, 0};
  InputSpikes in;
  StepResult step;
  std::vector<double> thetas(1, 0.0);

  ScalarCompareResult res;
  res.steps = steps;
  for (int k = 0; k < steps; ++k) {
    in.reset(1);
    if (pre[k]) {
      in.mask[0] = 1;
      in.list.push_back(0);
    }
    advance_timestep(net, in, clock, ep, step);
    decay_traces(traces, decay);
    bump_traces(traces, step.input_spikes, step.exc_spikes);
    for (std::uint32_t j : step.exc_spikes) {
      asp_recovery_update(net.weights, int(j), traces, pc);
      ++res.post_spikes;
    }
    thetas[0] = net.exc[0].theta;
    asp_decay_step(net.weights, traces, thetas, p.dt, pc, DecayMode::Exponential);

    const auto& r = ref[k];
    res.max_dv = std::max(res.max_dv, std::fabs(net.exc[0].v_mem - r.v));
    res.max_di = std::max(res.max_di, std::fabs(net.exc[0].i_syn - r.i));
    res.max_dtheta = std::max(res.max_dtheta, std::fabs(net.exc[0].theta - r.theta));
    res.max_dtrace =
        std::max({res.max_dtrace, std::fabs(traces.pre_rec[0] - r.pre_rec),
                  std::fabs(traces.pre_acc[0] - r.pre_acc),
                  std::fabs(traces.post[0] - r.post)});
    res.max_dw = std::max(res.max_dw, std::fabs(net.weights.value(0, 0) - r.w));
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

namespace {

void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
         const std::string& detail) {
  out.push_back({name, pass, detail});
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::vector<CheckResult> run_selfchecks(const PlasticityConfig& cfg) {
  std::vector<CheckResult> out;

  {
    ScalarRefParams p;
    const auto r = compare_engine_to_scalar_reference(p, 10000, 42);
    const bool pass = r.worst() <= 1e-9 && r.post_spikes > 50 && r.seconds < 1.0;
    add(out, "scalar-reference-equivalence", pass,
        "max|dv|=" + fmt(r.max_dv) + " max|di|=" + fmt(r.max_di) +
            " max|dtrace|=" + fmt(r.max_dtrace) + " max|dw|=" + fmt(r.max_dw) +
            " spikes=" + std::to_string(r.post_spikes) + " t=" + fmt(r.seconds) + "s");
  }

  {
    // one 40 ms decay step must equal eight 5 ms steps and e^-1 exactly
    TraceState a, b;
    a.init(1, 1);
    b.init(1, 1);
    a.pre_acc[0] = b.pre_acc[0] = 1.0;
    decay_traces(a, 40.0, cfg);
    for (int k = 0; k < 8; ++k) decay_traces(b, 5.0, cfg);
    const double expect = std::exp(-1.0);
    const bool pass = std::fabs(a.pre_acc[0] - expect) <= 1e-12 * expect &&
                      std::fabs(b.pre_acc[0] - a.pre_acc[0]) <= 1e-12;
    add(out, "trace-closed-form", pass,
        "one-step=" + fmt(a.pre_acc[0]) + " split=" + fmt(b.pre_acc[0]) +
            " expect=" + fmt(expect));
  }

  add(out, "trace-default-ratios",
      cfg.tau_acc == 10.0 * cfg.tau_rec && cfg.tau_post_trace == 2.0 * cfg.tau_acc,
      "tau_rec=" + fmt(cfg.tau_rec) + " tau_acc=" + fmt(cfg.tau_acc) +
          " tau_post_trace=" + fmt(cfg.tau_post_trace));

  {
    const double d1 = asp_recovery_delta(1.0, 0.0, 0.0, cfg);
    const double d2 = asp_recovery_delta(0.0, 0.0, 0.0, cfg);
    const bool pass = std::fabs(d1 - 0.0079) <= 1e-12 && std::fabs(d2 + 0.0021) <= 1e-12;
    add(out, "recovery-spot-values", pass, "dw(1,0,0)=" + fmt(d1) + " dw(0,0,0)=" + fmt(d2));
  }

  {
    const double t00 = compute_tau_leak(0.0, 0.0, cfg);
    const double t10 = compute_tau_leak(1.0, 0.0, cfg);
    const double t01 = compute_tau_leak(0.0, 1.0, cfg);
    bool mono = true;
    for (double post = 0.0; post < 8.0; post += 0.5)
      for (double th = 0.0; th < 8.0; th += 0.5) {
        if (compute_tau_leak(post + 0.5, th, cfg) <= compute_tau_leak(post, th, cfg))
          mono = false;
        if (compute_tau_leak(post, th + 0.5, cfg) <= compute_tau_leak(post, th, cfg))
          mono = false;
      }
    const bool pass = std::fabs(t00 - 100.0) <= 1e-9 && std::fabs(t10 - 200.0) <= 1e-9 &&
                      std::fabs(t01 - 200.0) <= 1e-9 && mono &&
                      std::isfinite(compute_tau_leak(0.0, 1e9, cfg));
    add(out, "leak-constant-spot-values", pass,
        "tl(0,0)=" + fmt(t00) + " tl(1,0)=" + fmt(t10) + " tl(0,1)=" + fmt(t01));
  }

  {
    PlasticityConfig c = cfg;
    c.alpha = 0.01;
    c.alpha_lin = 0.01;
    TraceState t;
    t.init(1, 1);
    std::vector<double> theta(1, 0.0);

    WeightMatrix we(1, 1, 0.5);
    asp_decay_step(we, t, theta, 100.0, c, DecayMode::Exponential);
    const double expect_e = 0.5 * std::exp(-0.01);

    WeightMatrix wl(1, 1, 0.5);
    asp_decay_step(wl, t, theta, 100.0, c, DecayMode::Linear);
    const bool pass = std::fabs(we.value(0, 0) - expect_e) <= 1e-12 &&
                      std::fabs(wl.value(0, 0) - 0.49) <= 1e-12;
    add(out, "weight-decay-closed-form", pass,
        "exp=" + fmt(we.value(0, 0)) + " expect=" + fmt(expect_e) +
            " lin=" + fmt(wl.value(0, 0)));
  }

  {
    RateImage img;
    img.rates_hz = {intensity_to_rate(128, 0.25), 63.75, 0.0};
    RngStream r1(7), r2(7);
    InputSpikes s1, s2;
    bool same = true, zero_silent = true;
    for (int k = 0; k < 2000; ++k) {
      sample_spikes(img, 0.5, r1, s1);
      sample_spikes(img, 0.5, r2, s2);
      if (s1.list != s2.list) same = false;
      if (s1.mask[2]) zero_silent = false;
    }
    const bool pass = img.rates_hz[0] == 32.0 && same && zero_silent;
    add(out, "encoder-determinism", pass,
        "rate(128)=" + fmt(img.rates_hz[0]) + " streams_match=" +
            (same ? "yes" : "no"));
  }

  return out;
}

}  // namespace asp
