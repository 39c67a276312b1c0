#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "asp/dataio.hpp"
#include "asp/trainer.hpp"

namespace asp {

// Plain-text key=value configuration with a closed key schema. '#' starts a
// comment; unknown keys are rejected with their line number. The resolved
// form (every key with its effective value) is what runs write next to
// their outputs, and re-running from it reproduces the run byte for byte.
class KeyValueConfig {
 public:
  struct KeySpec {
    const char* key;
    const char* def;
    const char* doc;
  };
  static std::span<const KeySpec> schema();

  KeyValueConfig();

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);  // override
  bool explicitly_set(const std::string& key) const;

  std::string get_str(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;  // comma separated

  // Every key in schema order with its effective value.
  std::string resolved_text() const;

 private:
  void set_checked(const std::string& key, const std::string& value,
                   const std::string& context);
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

struct ScheduleSpec {
  Schedule::Mode mode = Schedule::Mode::Intermixed;
  std::vector<int> classes;  // presentation-block order for sequential mode
  int per_class = 500;
  bool linear_preset = false;  // per-class counts fall linearly along `classes`
  int linear_base = 900;
  int linear_step = -50;
};

// Builds the typed run configuration; validates ranges and throws
// ConfigError on violations.
RunConfig run_config_from(const KeyValueConfig& kv);
ScheduleSpec schedule_spec_from(const KeyValueConfig& kv);
NoiseSpec noise_spec_from(const KeyValueConfig& kv);

Schedule make_schedule(const ImageSet& data, const ScheduleSpec& spec,
                       std::uint64_t seed);

}  // namespace asp
