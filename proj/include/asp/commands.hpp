#pragma once

#include <string>
#include <vector>

#include "asp/config.hpp"

namespace asp {

// Subcommand implementations shared by the CLI binary and the integration
// tests. Each returns a process exit code: 0 ok, 1 selfcheck failure,
// 2 configuration/data error, 3 snapshot/config dimension mismatch.

int cmd_train(const KeyValueConfig& kv);
int cmd_eval(const KeyValueConfig& kv, const std::string& snapshot_path,
             bool per_class);
int cmd_export_weights(const std::string& snapshot_path, const std::string& out_path,
                       int grid_cols, bool global_norm);
int cmd_make_noisy(const KeyValueConfig& kv, const std::string& images_in,
                   const std::string& labels_in, const std::string& images_out,
                   const std::string& labels_out);
int cmd_selfcheck();
int cmd_dump_config(const KeyValueConfig& kv);

}  // namespace asp
