#include "asp/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "asp/errors.hpp"
#include "asp/parallel.hpp"

namespace asp {

namespace {

NetworkState fresh_network(const RunConfig& rc) {
  NetworkState net =
      make_network(rc.n_input, rc.n_exc, rc.engine, rc.w_inh, rc.w_exc_to_inh);
  RngStream rng = RngStream::derive(rc.seed, rng_tag::init, 0);
  const double hi = rc.init_scale * rc.plasticity.w_max;
  for (int j = 0; j < net.n_exc; ++j) {
    auto row = net.weights.materialize_row(j);
    for (double& w : row) w = rng.next_double() * hi;
  }
  return net;
}

double mean_theta(const NetworkState& net) {
  double acc = 0.0;
  for (const auto& n : net.exc) acc += n.theta;
  return net.n_exc ? acc / net.n_exc : 0.0;
}

}  // namespace

TrainResult train(const RunConfig& rc, const ImageSet& data, const Schedule& sched,
                  const SnapshotSink& sink) {
  if (data.pixels_per_image() != rc.n_input)
    throw ConfigError("dataset has " + std::to_string(data.pixels_per_image()) +
                      " pixels per image, network expects " +
                      std::to_string(rc.n_input));

  TrainResult res;
  res.net = fresh_network(rc);
  res.traces.init(rc.n_input, rc.n_exc);

  NetworkState& net = res.net;
  TraceState& traces = res.traces;
  const PlasticityConfig& pc = rc.plasticity;
  const TraceDecay decay = make_trace_decay(rc.dt, pc);

  IsolatedDecayState iso;
  iso.init(rc.n_input);
  std::vector<double> thetas(std::size_t(rc.n_exc), 0.0);

  StepHook hook;
  switch (pc.rule) {
    case PlasticityRule::AspExponential:
    case PlasticityRule::AspLinear: {
      const DecayMode mode = pc.rule == PlasticityRule::AspExponential
                                 ? DecayMode::Exponential
                                 : DecayMode::Linear;
      hook = [&, mode](NetworkState& s, const StepResult& step, double) {
        decay_traces(traces, decay);
        bump_traces(traces, step.input_spikes, step.exc_spikes);
        for (std::uint32_t j : step.exc_spikes)
          asp_recovery_update(s.weights, int(j), traces, pc);
        for (int j = 0; j < s.n_exc; ++j) thetas[j] = s.exc[j].theta;
        asp_decay_step(s.weights, traces, thetas, rc.dt, pc, mode);
      };
      break;
    }
    case PlasticityRule::StdpPowerLaw:
      hook = [&](NetworkState& s, const StepResult& step, double) {
        decay_traces(traces, decay);
        bump_traces(traces, step.input_spikes, step.exc_spikes);
        for (std::uint32_t j : step.exc_spikes)
          stdp_powerlaw_update(s.weights, int(j), traces, pc);
      };
      break;
    case PlasticityRule::IsolatedDecay:
      hook = [&](NetworkState& s, const StepResult& step, double) {
        isolated_decay_update(s.weights, iso, step.input_spikes, rc.dt, pc);
      };
      break;
    case PlasticityRule::None:
      break;
  }

  SimClock clock{rc.dt, 0};
  res.log.reserve(sched.entries.size());

  int p = 0;
  for (const auto& [img_idx, cls] : sched.entries) {
    const auto t0 = std::chrono::steady_clock::now();
    RateImage rates = image_to_rates(data.image(img_idx), rc.encode_scale);
    RngStream rng = RngStream::derive(rc.seed, rng_tag::train, std::uint64_t(p));
    PresentationResult pres;
    try {
      pres = run_presentation(net, std::move(rates), rc.present, clock, rc.engine,
                              rng, hook);
    } catch (const NumericalFault&) {
      // snapshots already flushed at cadence stay on disk for post-mortem
      std::fprintf(stderr, "numerical fault at presentation %d, aborting run\n", p);
      throw;
    }
    if (pres.degenerate) ++res.degenerate_presentations;

    LogRow row;
    row.presentation_index = p;
    row.class_id = cls;
    row.exc_spike_total = int(
        std::accumulate(pres.spike_counts.begin(), pres.spike_counts.end(), 0u));
    row.retries = pres.retries;
    row.mean_theta = mean_theta(net);
    row.mean_weight = net.weights.mean();
    row.wallclock_ms =
        rc.log_wallclock
            ? std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count()
            : 0.0;
    res.log.push_back(row);

    ++p;
    if (sink && rc.snapshot_cadence > 0 && p % rc.snapshot_cadence == 0) {
      net.weights.materialize_all();
      sink(snapshot_of(net, std::uint64_t(p), rc.seed));
    }
  }

  net.weights.materialize_all();
  return res;
}

int LabelMap::assigned() const {
  int c = 0;
  for (int l : label)
    if (l >= 0) ++c;
  return c;
}

int LabelMap::most_populous() const {
  std::array<int, 10> counts{};
  for (int l : label)
    if (l >= 0 && l < 10) ++counts[l];
  int best = 0;
  for (int c = 1; c < 10; ++c)
    if (counts[c] > counts[best]) best = c;
  return best;
}

LabelMap labels_from_mean_counts(
    const std::vector<std::array<double, 10>>& mean_counts) {
  LabelMap lm;
  lm.label.assign(mean_counts.size(), -1);
  for (std::size_t j = 0; j < mean_counts.size(); ++j) {
    int best = -1;
    double best_mean = 0.0;
    for (int c = 0; c < 10; ++c) {
      if (mean_counts[j][c] > best_mean) {  // strict: ties keep the lower class
        best_mean = mean_counts[j][c];
        best = c;
      }
    }
    lm.label[j] = best_mean > 0.0 ? best : -1;
  }
  return lm;
}

namespace {

// Present one image on an already-reset workspace network with plasticity
// and homeostasis off; returns per-neuron spike counts.
PresentationResult present_frozen(const RunConfig& rc, NetworkState& work,
                                  std::span<const std::uint8_t> image,
                                  RngStream& rng) {
  reset_dynamic_state(work, rc.engine);
  SimClock clock{rc.dt, 0};
  PresentOptions opt = rc.present;
  opt.adapt_theta = false;
  opt.record_spike_log = false;
  RateImage rates = image_to_rates(image, rc.encode_scale);
  return run_presentation(work, std::move(rates), opt, clock, rc.engine, rng);
}

}  // namespace

LabelMap label_neurons(const RunConfig& rc, const NetworkState& trained,
                       const ImageSet& labeled) {
  if (labeled.n() == 0) throw DataError("labeling set is empty");

  const int n = labeled.n();
  std::vector<std::vector<std::uint32_t>> counts;
  counts.resize(std::size_t(n));
  parallel_for(n, 8, [&](int begin, int end) {
    NetworkState work = trained;  // weights/theta shared by value, reset per image
    for (int i = begin; i < end; ++i) {
      RngStream rng = RngStream::derive(rc.seed, rng_tag::label, std::uint64_t(i));
      counts[i] = present_frozen(rc, work, labeled.image(i), rng).spike_counts;
    }
  });

  std::array<int, 10> per_class{};
  std::vector<std::array<double, 10>> sums(std::size_t(trained.n_exc));
  for (int i = 0; i < n; ++i) {
    const int cls = labeled.labels[i];
    ++per_class[cls];
    for (int j = 0; j < trained.n_exc; ++j) sums[j][cls] += counts[i][j];
  }
  for (auto& row : sums)
    for (int c = 0; c < 10; ++c)
      if (per_class[c] > 0) row[c] /= per_class[c];
  return labels_from_mean_counts(sums);
}

int predict_from_counts(std::span<const std::uint32_t> spike_counts,
                        const LabelMap& labels, bool* degenerate) {
  std::array<double, 10> sum{};
  std::array<int, 10> members{};
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < spike_counts.size(); ++j) {
    const int l = labels.label[j];
    if (l < 0) continue;
    sum[l] += spike_counts[j];
    ++members[l];
    total += spike_counts[j];
  }
  if (degenerate) *degenerate = false;
  if (total == 0) {
    if (degenerate) *degenerate = true;
    return labels.most_populous();
  }
  int best = -1;
  double best_mean = -1.0;
  for (int c = 0; c < 10; ++c) {
    if (members[c] == 0) continue;
    const double m = sum[c] / members[c];
    if (m > best_mean) {  // strict: ties keep the lower class
      best_mean = m;
      best = c;
    }
  }
  return best;
}

int classify(const RunConfig& rc, const NetworkState& trained,
             std::span<const std::uint8_t> image, const LabelMap& labels,
             RngStream& rng, bool* degenerate) {
  if (labels.assigned() == 0) throw DataError("no neuron carries a label");
  NetworkState work = trained;
  const auto pres = present_frozen(rc, work, image, rng);
  return predict_from_counts(pres.spike_counts, labels, degenerate);
}

EvalReport report_from(std::span<const int> predicted, std::span<const int> truth,
                       std::span<const std::uint8_t> degenerate_flags) {
  EvalReport r;
  r.presentations = int(predicted.size());
  std::array<int, 10> per_class_total{};
  int correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int t = truth[i], p = predicted[i];
    ++per_class_total[t];
    if (p >= 0) ++r.confusion[t][p];
    if (p == t) ++correct;
    if (!degenerate_flags.empty() && degenerate_flags[i]) ++r.degenerate;
  }
  r.accuracy = predicted.empty() ? 0.0 : double(correct) / double(predicted.size());
  for (int c = 0; c < 10; ++c)
    r.per_class[c] =
        per_class_total[c] ? double(r.confusion[c][c]) / per_class_total[c] : 0.0;
  return r;
}

EvalReport evaluate(const RunConfig& rc, const NetworkState& trained,
                    const ImageSet& test, const LabelMap& labels) {
  if (labels.assigned() == 0) throw DataError("no neuron carries a label");
  const int n = test.n();
  std::vector<int> predicted(std::size_t(n), -1);
  std::vector<std::uint8_t> degenerate(std::size_t(n), 0);

  parallel_for(n, 8, [&](int begin, int end) {
    NetworkState work = trained;
    for (int i = begin; i < end; ++i) {
      RngStream rng = RngStream::derive(rc.seed, rng_tag::eval, std::uint64_t(i));
      const auto pres = present_frozen(rc, work, test.image(i), rng);
      bool deg = false;
      predicted[i] = predict_from_counts(pres.spike_counts, labels, &deg);
      degenerate[i] = deg ? 1 : 0;
    }
  });

  std::vector<int> truth(test.labels.begin(), test.labels.end());
  return report_from(predicted, truth, degenerate);
}

std::string format_eval_report(const EvalReport& r, bool per_class_rows) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "accuracy=%.6f\n", r.accuracy);
  out += buf;
  std::snprintf(buf, sizeof buf, "presentations=%d\n", r.presentations);
  out += buf;
  std::snprintf(buf, sizeof buf, "degenerate=%d\n", r.degenerate);
  out += buf;
  if (per_class_rows) {
    for (int c = 0; c < 10; ++c) {
      std::snprintf(buf, sizeof buf, "accuracy.%d=%.6f\n", c, r.per_class[c]);
      out += buf;
    }
  }
  out += "confusion=\n";
  for (int t = 0; t < 10; ++t) {
    for (int p = 0; p < 10; ++p) {
      std::snprintf(buf, sizeof buf, "%s%d", p ? " " : "", r.confusion[t][p]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::vector<std::vector<double>> class_templates(const ImageSet& set) {
  std::vector<std::vector<double>> tpl(10);
  std::array<int, 10> counts{};
  for (auto& t : tpl) t.assign(std::size_t(set.pixels_per_image()), 0.0);
  for (int i = 0; i < set.n(); ++i) {
    const int c = set.labels[i];
    auto img = set.image(i);
    for (int k = 0; k < set.pixels_per_image(); ++k) tpl[c][k] += img[k] / 255.0;
    ++counts[c];
  }
  std::vector<std::vector<double>> out;
  for (int c = 0; c < 10; ++c) {
    if (!counts[c]) continue;
    for (double& v : tpl[c]) v /= counts[c];
    out.push_back(std::move(tpl[c]));
  }
  return out;
}

namespace {

// mean-centered unit vector; empty if the row has no variation
std::vector<double> normalized(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  std::vector<double> out(v.size());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] - mean;
    norm2 += out[i] * out[i];
  }
  if (norm2 <= 1e-18) return {};  // flat rows carry no direction
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : out) x *= inv;
  return out;
}

}  // namespace

double overlap_metric(const std::vector<std::vector<double>>& fields,
                      const std::vector<std::vector<double>>& templates,
                      int* excluded_out) {
  std::vector<std::vector<double>> tn;
  for (const auto& t : templates) {
    auto n = normalized(t);
    if (!n.empty()) tn.push_back(std::move(n));
  }
  int excluded = 0;
  double acc = 0.0;
  int used = 0;
  for (const auto& f : fields) {
    auto fn = normalized(f);
    if (fn.empty()) {
      ++excluded;
      continue;
    }
    double best = 0.0;
    for (const auto& t : tn) {
      double dot = 0.0;
      for (std::size_t i = 0; i < fn.size(); ++i) dot += fn[i] * t[i];
      best = std::max(best, dot);
    }
    acc += std::clamp(best, 0.0, 1.0);
    ++used;
  }
  if (excluded_out) *excluded_out = excluded;
  return used ? acc / used : 0.0;
}

std::vector<std::uint8_t> background_mask(const ImageSet& set, double frac) {
  const int px = set.pixels_per_image();
  std::vector<int> zero_count(std::size_t(px), 0);
  for (int i = 0; i < set.n(); ++i) {
    auto img = set.image(i);
    for (int k = 0; k < px; ++k)
      if (img[k] == 0) ++zero_count[k];
  }
  std::vector<std::uint8_t> mask(std::size_t(px), 0);
  for (int k = 0; k < px; ++k)
    if (set.n() > 0 && double(zero_count[k]) >= frac * set.n()) mask[k] = 1;
  return mask;
}

double background_variance(const WeightMatrix& w, std::span<const std::uint8_t> mask) {
  std::vector<int> idx;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) idx.push_back(int(k));
  if (idx.empty()) throw DataError("background mask is empty");

  double acc = 0.0;
  for (int j = 0; j < w.rows(); ++j) {
    double mean = 0.0;
    for (int k : idx) mean += w.value(j, k);
    mean /= double(idx.size());
    double var = 0.0;
    for (int k : idx) {
      const double d = w.value(j, k) - mean;
      var += d * d;
    }
    acc += var / double(idx.size());
  }
  return w.rows() ? acc / w.rows() : 0.0;
}

std::vector<double> receptive_field(const WeightMatrix& w, int j) {
  return w.dense_row(j);
}

std::vector<std::vector<double>> receptive_fields(const WeightMatrix& w) {
  std::vector<std::vector<double>> out;
  out.reserve(std::size_t(w.rows()));
  for (int j = 0; j < w.rows(); ++j) out.push_back(w.dense_row(j));
  return out;
}

}  // namespace asp
