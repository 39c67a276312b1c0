#include "asp/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "asp/errors.hpp"
#include "asp/pgm.hpp"
#include "asp/selfcheck.hpp"

namespace asp {

namespace fs = std::filesystem;

namespace {

ImageSet load_pair_checked(const KeyValueConfig& kv, const std::string& images_key,
                           const std::string& labels_key) {
  const std::string images = kv.get_str(images_key);
  const std::string labels = kv.get_str(labels_key);
  if (images.empty())
    throw DataError(images_key + " is not set; provide an IDX image file");
  if (labels.empty())
    throw DataError(labels_key + " is not set; provide an IDX label file");
  if (!fs::exists(images)) throw DataError(images + ": no such file");
  if (!fs::exists(labels)) throw DataError(labels + ": no such file");
  return load_idx(images, labels);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc | std::ios::binary);
  if (!f) throw DataError(path + ": cannot open for writing");
  f << text;
}

void write_run_log(const std::string& path, const std::vector<LogRow>& rows) {
  std::ofstream f(path, std::ios::trunc | std::ios::binary);
  if (!f) throw DataError(path + ": cannot open for writing");
  f << "presentation_index,class,exc_spike_total,retries,mean_theta,mean_weight,"
       "wallclock_ms\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.9g,%.9g,%.3f\n",
                  r.presentation_index, r.class_id, r.exc_spike_total, r.retries,
                  r.mean_theta, r.mean_weight, r.wallclock_ms);
    f << buf;
  }
}

std::vector<int> eval_class_filter(const KeyValueConfig& kv) {
  if (kv.get_str("eval.classes") == "all") return {};
  return kv.get_int_list("eval.classes");
}

}  // namespace

int cmd_train(const KeyValueConfig& kv) {
  try {
    const ImageSet full = load_pair_checked(kv, "data.train_images", "data.train_labels");
    const RunConfig rc = run_config_from(kv);
    const ScheduleSpec spec = schedule_spec_from(kv);

    // the tail of the training files is reserved for labeling at eval time
    const int reserve = std::min(kv.get_int("label.count"), full.n());
    const ImageSet pool = full.head(full.n() - reserve);
    const Schedule sched = make_schedule(pool, spec, rc.seed);

    const fs::path out_dir = kv.get_str("run.out_dir");
    fs::create_directories(out_dir / "snapshots");
    write_text((out_dir / "resolved.cfg").string(), kv.resolved_text());

    SnapshotSink sink = [&](const Snapshot& s) {
      char name[64];
      std::snprintf(name, sizeof name, "snap-%08llu.bin",
                    (unsigned long long)s.presentation_index);
      save_snapshot(s, (out_dir / "snapshots" / name).string());
    };

    TrainResult res = train(rc, pool, sched, sink);
    save_snapshot(snapshot_of(res.net, std::uint64_t(sched.entries.size()), rc.seed),
                  (out_dir / "snapshot-final.bin").string());
    write_run_log((out_dir / "run_log.csv").string(), res.log);

    std::printf("train: %zu presentations, %d degenerate, mean weight %.6f, wrote %s\n",
                sched.entries.size(), res.degenerate_presentations,
                res.net.weights.mean(), out_dir.string().c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "train: %s\n", e.what());
    return 2;
  }
}

int cmd_eval(const KeyValueConfig& kv, const std::string& snapshot_path,
             bool per_class) {
  Snapshot snap;
  RunConfig rc;
  try {
    snap = load_snapshot(snapshot_path);
    rc = run_config_from(kv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "eval: %s\n", e.what());
    return 2;
  }
  if (int(snap.n_exc) != rc.n_exc || int(snap.n_input) != rc.n_input) {
    std::fprintf(stderr,
                 "eval: snapshot is %ux%u but config expects %dx%d neurons\n",
                 snap.n_exc, snap.n_input, rc.n_exc, rc.n_input);
    return 3;
  }
  try {
    const ImageSet train = load_pair_checked(kv, "data.train_images", "data.train_labels");
    ImageSet test = load_pair_checked(kv, "data.test_images", "data.test_labels");

    ImageSet labeled = train.tail(std::min(kv.get_int("label.count"), train.n()));
    const std::vector<int> keep = eval_class_filter(kv);
    if (!keep.empty()) {
      labeled = labeled.filter_classes(keep);
      test = test.filter_classes(keep);
    }
    const int want = kv.get_int("eval.count");
    if (want > 0) test = test.head(want);

    NetworkState net = make_network(rc.n_input, rc.n_exc, rc.engine, rc.w_inh,
                                    rc.w_exc_to_inh);
    restore_snapshot(net, snap);

    const LabelMap labels = label_neurons(rc, net, labeled);
    const EvalReport report = evaluate(rc, net, test, labels);

    const fs::path out_dir = kv.get_str("run.out_dir");
    fs::create_directories(out_dir);
    write_text((out_dir / "eval_report.txt").string(),
               format_eval_report(report, true));

    std::printf("accuracy=%.6f\n", report.accuracy);
    if (per_class)
      for (int c = 0; c < 10; ++c)
        std::printf("accuracy.%d=%.6f\n", c, report.per_class[c]);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "eval: %s\n", e.what());
    return 2;
  }
}

int cmd_export_weights(const std::string& snapshot_path, const std::string& out_path,
                       int grid_cols, bool global_norm) {
  try {
    const Snapshot snap = load_snapshot(snapshot_path);
    write_weight_grid(out_path, snap, grid_cols, global_norm);
    std::printf("export-weights: %u fields -> %s\n", snap.n_exc, out_path.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "export-weights: %s\n", e.what());
    return 2;
  }
}

int cmd_make_noisy(const KeyValueConfig& kv, const std::string& images_in,
                   const std::string& labels_in, const std::string& images_out,
                   const std::string& labels_out) {
  try {
    if (!fs::exists(images_in)) throw DataError(images_in + ": no such file");
    if (!fs::exists(labels_in)) throw DataError(labels_in + ": no such file");
    const ImageSet src = load_idx(images_in, labels_in);
    const NoiseSpec spec = noise_spec_from(kv);
    const std::uint64_t seed = kv.get_u64("noise.seed");
    const ImageSet noisy =
        apply_noise(src, spec, seed, kv.get_double("noise.floor_var"));
    save_idx(noisy, images_out, labels_out);
    write_noise_sidecar(images_out + ".meta", spec, seed);
    std::printf("make-noisy: %d images -> %s\n", noisy.n(), images_out.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make-noisy: %s\n", e.what());
    return 2;
  }
}

int cmd_selfcheck() {
  const auto checks = run_selfchecks();
  bool all = true;
  for (const auto& c : checks) {
    std::printf("selfcheck: %-32s %s  %s\n", c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.detail.c_str());
    all = all && c.pass;
  }
  return all ? 0 : 1;
}

int cmd_dump_config(const KeyValueConfig& kv) {
  std::fputs(kv.resolved_text().c_str(), stdout);
  return 0;
}

}  // namespace asp
