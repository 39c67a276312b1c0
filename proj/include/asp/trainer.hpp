#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "asp/dataio.hpp"
#include "asp/plasticity.hpp"
#include "asp/sim.hpp"
#include "asp/snapshot.hpp"

namespace asp {

struct RunConfig {
  int n_exc = 100;
  int n_input = 784;
  double dt = 0.5;  // ms
  EngineParams engine;
  PlasticityConfig plasticity;
  PresentOptions present;
  double w_inh = 120.0;
  double w_exc_to_inh = 500.0;
  double init_scale = 0.3;     // weights start uniform in [0, init_scale*w_max]
  double encode_scale = 0.25;  // Hz per intensity unit
  std::uint64_t seed = 1;
  int snapshot_cadence = 1000;  // presentations between snapshots
  bool log_wallclock = false;   // real timings make logs non-reproducible
};

// One row per training presentation.
struct LogRow {
  int presentation_index;
  int class_id;
  int exc_spike_total;
  int retries;
  double mean_theta;
  double mean_weight;
  double wallclock_ms;
};

struct TrainResult {
  NetworkState net;
  TraceState traces;
  std::vector<LogRow> log;
  int degenerate_presentations = 0;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

// Runs the schedule once: encode, present with the rule's per-step hook
// (trace decay+bump, recovery updates on each excitatory spike, leak or
// isolated-decay phase every step), snapshot at the configured cadence.
// State carries across presentations; nothing is reset between images.
TrainResult train(const RunConfig& rc, const ImageSet& data, const Schedule& sched,
                  const SnapshotSink& sink = {});

// -1 = unassigned (the neuron never spiked during labeling).
struct LabelMap {
  std::vector<int> label;
  int assigned() const;
  int most_populous() const;  // ties toward the lower class id
};

// Pure aggregation: mean_counts[j][c] = mean spikes of neuron j over class-c
// labeling images. Argmax per neuron, ties toward the lower class id,
// all-zero rows unassigned.
LabelMap labels_from_mean_counts(const std::vector<std::array<double, 10>>& mean_counts);

// Presents every labeling image on a cloned network with plasticity and
// homeostasis off, then assigns each neuron the class with the highest mean
// spike count. The trained network is not mutated.
LabelMap label_neurons(const RunConfig& rc, const NetworkState& trained,
                       const ImageSet& labeled);

// Pure aggregation used by classify: per-class mean spike count over the
// neurons carrying that label; argmax with ties toward the lower class id.
// Zero spikes overall -> most populous label, flagged degenerate.
int predict_from_counts(std::span<const std::uint32_t> spike_counts,
                        const LabelMap& labels, bool* degenerate = nullptr);

int classify(const RunConfig& rc, const NetworkState& trained,
             std::span<const std::uint8_t> image, const LabelMap& labels,
             RngStream& rng, bool* degenerate = nullptr);

struct EvalReport {
  double accuracy = 0.0;
  std::array<double, 10> per_class{};                 // accuracy per true class
  std::array<std::array<int, 10>, 10> confusion{};    // [true][predicted]
  int presentations = 0;
  int degenerate = 0;  // classified by fallback; counted, never hidden
};

EvalReport report_from(std::span<const int> predicted, std::span<const int> truth,
                       std::span<const std::uint8_t> degenerate_flags);

// Classifies every test image (parallel over images, deterministic
// regardless of thread count) and aggregates.
EvalReport evaluate(const RunConfig& rc, const NetworkState& trained,
                    const ImageSet& test, const LabelMap& labels);

std::string format_eval_report(const EvalReport& r, bool per_class_rows);

// --- forgetting / denoising diagnostics -----------------------------------

// Mean image per class, normalized; rows usable as templates below.
std::vector<std::vector<double>> class_templates(const ImageSet& set);

// Mean over neurons of the best normalized correlation between the neuron's
// receptive field and any template; 1 = clean single-class fields. Zero-norm
// rows are excluded and counted via excluded_out.
double overlap_metric(const std::vector<std::vector<double>>& fields,
                      const std::vector<std::vector<double>>& templates,
                      int* excluded_out = nullptr);

// Pixels that are zero in at least `frac` of the images.
std::vector<std::uint8_t> background_mask(const ImageSet& set, double frac = 0.95);

// Mean (over neurons) variance of the weights restricted to masked pixels.
double background_variance(const WeightMatrix& w, std::span<const std::uint8_t> mask);

struct ForgettingDiagnostics {
  std::vector<double> overlap_by_snapshot;
  std::vector<std::array<double, 10>> retention;  // per snapshot: accuracy per class
  double background_variance_score = 0.0;
};

std::vector<double> receptive_field(const WeightMatrix& w, int j);
std::vector<std::vector<double>> receptive_fields(const WeightMatrix& w);

}  // namespace asp
