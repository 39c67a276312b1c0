// Command-line front end for the spiking-network trainer.
//
// Commands: train, eval, export-weights, make-noisy, selfcheck, dump-config.
// All runtime behavior comes from a key=value config file plus --set
// overrides; every run writes the fully resolved configuration next to its
// outputs so it can be reproduced byte for byte.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asp/commands.hpp"
#include "asp/errors.hpp"

namespace {

int apply_config(asp::KeyValueConfig& kv, const std::string& config_path,
                 const std::vector<std::string>& sets) {
  try {
    if (!config_path.empty()) kv.load_file(config_path);
    for (const auto& kvpair : sets) {
      const auto eq = kvpair.find('=');
      if (eq == std::string::npos) throw asp::ConfigError("--set expects key=value");
      kv.set(kvpair.substr(0, eq), kvpair.substr(eq + 1));
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clock-driven spiking-network trainer with adaptive weight decay"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key=value configuration file")
      ->expected(1);
  app.add_option("--set", sets, "override a config key, e.g. --set run.seed=3");

  auto* train = app.add_subcommand("train", "train a network on a schedule");

  auto* eval = app.add_subcommand("eval", "label and score a trained snapshot");
  std::string snapshot;
  bool per_class = false;
  eval->add_option("--snapshot", snapshot, "snapshot file")->required();
  eval->add_flag("--per-class", per_class, "also print per-class accuracy rows");

  auto* exportw = app.add_subcommand("export-weights",
                                     "render receptive fields as a PGM grid");
  std::string exp_snapshot, exp_out;
  int grid_cols = 10;
  bool global_norm = false;
  exportw->add_option("--snapshot", exp_snapshot, "snapshot file")->required();
  exportw->add_option("--out", exp_out, "output .pgm path")->required();
  exportw->add_option("--cols", grid_cols, "tiles per row");
  exportw->add_flag("--global-norm", global_norm,
                    "normalize over the whole grid instead of per neuron");

  auto* noisy = app.add_subcommand("make-noisy", "synthesize a noisy copy of a set");
  std::string n_images_in, n_labels_in, n_images_out, n_labels_out;
  noisy->add_option("--images", n_images_in, "source IDX images")->required();
  noisy->add_option("--labels", n_labels_in, "source IDX labels")->required();
  noisy->add_option("--out-images", n_images_out, "output IDX images")->required();
  noisy->add_option("--out-labels", n_labels_out, "output IDX labels")->required();
  std::string noise_kind, noise_snr, noise_contrast, noise_seed;
  noisy->add_option("--kind", noise_kind, "awgn | awgn_reduced_contrast");
  noisy->add_option("--snr-db", noise_snr, "signal-to-noise ratio, dB");
  noisy->add_option("--contrast", noise_contrast, "contrast factor in (0,1]");
  noisy->add_option("--seed", noise_seed, "noise seed");

  auto* selfcheck = app.add_subcommand("selfcheck", "run the release-gate checks");
  auto* dump = app.add_subcommand("dump-config", "print the resolved configuration");

  CLI11_PARSE(app, argc, argv);

  asp::KeyValueConfig kv;
  if (const int rc = apply_config(kv, config_path, sets)) return rc;

  try {
    if (noisy->parsed()) {
      if (!noise_kind.empty()) kv.set("noise.kind", noise_kind);
      if (!noise_snr.empty()) kv.set("noise.snr_db", noise_snr);
      if (!noise_contrast.empty()) kv.set("noise.contrast", noise_contrast);
      if (!noise_seed.empty()) kv.set("noise.seed", noise_seed);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config: %s\n", e.what());
    return 2;
  }

  if (train->parsed()) return asp::cmd_train(kv);
  if (eval->parsed()) return asp::cmd_eval(kv, snapshot, per_class);
  if (exportw->parsed())
    return asp::cmd_export_weights(exp_snapshot, exp_out, grid_cols, global_norm);
  if (noisy->parsed())
    return asp::cmd_make_noisy(kv, n_images_in, n_labels_in, n_images_out,
                               n_labels_out);
  if (selfcheck->parsed()) return asp::cmd_selfcheck();
  if (dump->parsed()) return asp::cmd_dump_config(kv);
  return 2;
}
