#include "asp/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "asp/errors.hpp"

namespace asp {

namespace {

const KeyValueConfig::KeySpec kSchema[] = {
    {"net.n_exc", "100", "excitatory (and inhibitory) neuron count"},
    {"net.n_input", "784", "input neurons; must match the dataset"},
    {"net.w_inh", "120", "lateral inhibition current kick"},
    {"net.w_exc_to_inh", "500", "one-to-one forward current kick"},
    {"net.init_scale", "0.3", "weights start uniform in [0, init_scale*w_max]"},

    {"sim.dt", "0.5", "timestep, ms"},
    {"sim.theta_plus", "0.05", "homeostatic threshold bump per spike, mV"},
    {"sim.tau_theta", "1e7", "homeostatic threshold decay, ms"},

    {"lif.exc.tau_mem", "100", "excitatory membrane time constant, ms"},
    {"lif.exc.v_rest", "-65", "mV"},
    {"lif.exc.v_reset", "-65", "mV"},
    {"lif.exc.v_thresh", "-52", "mV"},
    {"lif.exc.refractory", "5", "ms"},
    {"lif.exc.tau_post_current", "5", "synaptic current time constant, ms"},
    {"lif.inh.tau_mem", "10", "inhibitory membrane time constant, ms"},
    {"lif.inh.v_rest", "-60", "mV"},
    {"lif.inh.v_reset", "-45", "mV"},
    {"lif.inh.v_thresh", "-40", "mV"},
    {"lif.inh.refractory", "2", "ms"},
    {"lif.inh.tau_post_current", "2", "synaptic current time constant, ms"},

    {"present.duration", "350", "stimulus window, ms"},
    {"present.rest", "150", "silent window after each stimulus, ms"},
    {"present.min_spikes", "5", "retry threshold on excitatory spikes"},
    {"present.rate_boost", "32", "Hz added to every input per retry"},
    {"present.max_retries", "8", "retry cap before flagging degenerate"},

    {"encode.scale", "0.25", "Hz per intensity unit"},

    {"plasticity.rule", "asp_exponential",
     "asp_exponential | asp_linear | stdp_powerlaw | isolated_decay | none"},
    {"plasticity.alpha_preset", "nominal",
     "nominal (alpha=0.0001) | reference (alpha=0.01); explicit alpha wins"},
    {"plasticity.tau_rec", "4", "recent pre-trace time constant, ms"},
    {"plasticity.tau_acc", "40", "accumulative pre-trace time constant, ms"},
    {"plasticity.tau_post_trace", "80", "post-trace time constant, ms"},
    {"plasticity.offset", "0.2", "depression offset in the recovery rule"},
    {"plasticity.k_const", "0.01", "significance term gain"},
    {"plasticity.k1_const", "0.01", "recovery learning-rate numerator"},
    {"plasticity.k2_const", "100", "leak time-constant base, ms"},
    {"plasticity.alpha", "", "exponential leak rate; empty = use preset"},
    {"plasticity.alpha_lin", "0.01", "linear leak rate"},
    {"plasticity.w_max", "1", "weight ceiling"},
    {"plasticity.theta_norm", "1", "mV per doubling of the leak time constant"},
    {"plasticity.tau_leak_iso", "200", "isolated-decay leak time constant, ms"},
    {"plasticity.alpha_iso", "0.01", "isolated-decay rate"},
    {"plasticity.tau_trace_iso", "20", "isolated-decay pre-trace, ms"},

    {"stdp.eta", "0.01", "power-law learning rate"},
    {"stdp.mu", "1.0", "power-law weight-dependence exponent"},

    {"schedule.mode", "intermixed", "sequential | intermixed"},
    {"schedule.classes", "0,1,2,3,4,5,6,7,8,9",
     "classes to present; order = block order in sequential mode"},
    {"schedule.per_class", "500", "presentations per class"},
    {"schedule.preset", "none", "none | decreasing (linearly falling counts)"},
    {"schedule.decreasing_base", "900", "count for the first class"},
    {"schedule.decreasing_step", "-50", "count change per class"},

    {"run.seed", "1", "master seed; all substreams derive from it"},
    {"run.out_dir", "out", "artifact directory"},
    {"run.snapshot_cadence", "1000", "presentations between snapshots"},

    {"label.count", "1000", "labeling images held out from the end of train"},
    {"eval.count", "1000", "test images to evaluate; 0 = all"},
    {"eval.classes", "all", "all | comma list restricting label+test sets"},

    {"noise.kind", "awgn", "awgn | awgn_reduced_contrast"},
    {"noise.snr_db", "9.5", "signal-to-noise ratio, dB"},
    {"noise.contrast", "0.5", "contrast factor in (0,1], applied before noise"},
    {"noise.floor_var", "1e-4", "noise variance fallback for all-zero images"},
    {"noise.seed", "7", "noise synthesis seed"},

    {"data.train_images", "", "IDX image file"},
    {"data.train_labels", "", "IDX label file"},
    {"data.test_images", "", "IDX image file"},
    {"data.test_labels", "", "IDX label file"},

    {"log.wallclock", "off", "on writes real per-presentation timings; off keeps "
                             "run logs byte-reproducible"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::span<const KeyValueConfig::KeySpec> KeyValueConfig::schema() {
  return {kSchema, std::size(kSchema)};
}

KeyValueConfig::KeyValueConfig() {
  for (const auto& spec : kSchema) values_[spec.key] = spec.def;
}

void KeyValueConfig::set_checked(const std::string& key, const std::string& value,
                                 const std::string& context) {
  if (values_.find(key) == values_.end())
    throw ConfigError(context + ": unknown key '" + key + "'");
  values_[key] = value;
  explicit_.insert(key);
}

void KeyValueConfig::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path + ": cannot open");
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value, got '" + line + "'");
    set_checked(trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                path + ":" + std::to_string(lineno));
  }
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  set_checked(key, value, "override");
}

bool KeyValueConfig::explicitly_set(const std::string& key) const {
  return explicit_.count(key) > 0;
}

std::string KeyValueConfig::get_str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string s = get_str(key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError(key + ": '" + s + "' is not a number");
  return v;
}

int KeyValueConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = int(v);
  if (double(i) != v) throw ConfigError(key + ": expected an integer");
  return i;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key) const {
  const std::string s = get_str(key);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError(key + ": '" + s + "' is not an unsigned integer");
  return v;
}

bool KeyValueConfig::get_bool(const std::string& key) const {
  const std::string s = get_str(key);
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  throw ConfigError(key + ": '" + s + "' is not on/off");
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key) const {
  const std::string s = get_str(key);
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    const long v = std::strtol(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0')
      throw ConfigError(key + ": '" + item + "' is not an integer");
    out.push_back(int(v));
  }
  return out;
}

std::string KeyValueConfig::resolved_text() const {
  std::string out;
  for (const auto& spec : kSchema) {
    out += spec.key;
    out += '=';
    // alpha is materialized so a resolved file stands alone
    if (std::string(spec.key) == "plasticity.alpha" && get_str(spec.key).empty()) {
      out += get_str("plasticity.alpha_preset") == "reference" ? "0.01" : "0.0001";
    } else {
      out += values_.at(spec.key);
    }
    out += '\n';
  }
  return out;
}

namespace {

PlasticityRule parse_rule(const std::string& s) {
  if (s == "asp_exponential") return PlasticityRule::AspExponential;
  if (s == "asp_linear") return PlasticityRule::AspLinear;
  if (s == "stdp_powerlaw") return PlasticityRule::StdpPowerLaw;
  if (s == "isolated_decay") return PlasticityRule::IsolatedDecay;
  if (s == "none") return PlasticityRule::None;
  throw ConfigError("plasticity.rule: unknown rule '" + s + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

RunConfig run_config_from(const KeyValueConfig& kv) {
  RunConfig rc;
  rc.n_exc = kv.get_int("net.n_exc");
  rc.n_input = kv.get_int("net.n_input");
  rc.dt = kv.get_double("sim.dt");
  rc.w_inh = kv.get_double("net.w_inh");
  rc.w_exc_to_inh = kv.get_double("net.w_exc_to_inh");
  rc.init_scale = kv.get_double("net.init_scale");
  rc.encode_scale = kv.get_double("encode.scale");
  rc.seed = kv.get_u64("run.seed");
  rc.snapshot_cadence = kv.get_int("run.snapshot_cadence");
  rc.log_wallclock = kv.get_bool("log.wallclock");

  auto& ep = rc.engine;
  ep.exc = {kv.get_double("lif.exc.tau_mem"),     kv.get_double("lif.exc.v_rest"),
            kv.get_double("lif.exc.v_reset"),     kv.get_double("lif.exc.v_thresh"),
            kv.get_double("lif.exc.refractory"),  kv.get_double("lif.exc.tau_post_current")};
  ep.inh = {kv.get_double("lif.inh.tau_mem"),     kv.get_double("lif.inh.v_rest"),
            kv.get_double("lif.inh.v_reset"),     kv.get_double("lif.inh.v_thresh"),
            kv.get_double("lif.inh.refractory"),  kv.get_double("lif.inh.tau_post_current")};
  ep.theta_plus = kv.get_double("sim.theta_plus");
  ep.tau_theta = kv.get_double("sim.tau_theta");

  auto& pr = rc.present;
  pr.duration_ms = kv.get_double("present.duration");
  pr.rest_ms = kv.get_double("present.rest");
  pr.min_spikes = kv.get_int("present.min_spikes");
  pr.rate_boost_hz = kv.get_double("present.rate_boost");
  pr.max_retries = kv.get_int("present.max_retries");

  auto& pc = rc.plasticity;
  pc.rule = parse_rule(kv.get_str("plasticity.rule"));
  pc.tau_rec = kv.get_double("plasticity.tau_rec");
  pc.tau_acc = kv.get_double("plasticity.tau_acc");
  pc.tau_post_trace = kv.get_double("plasticity.tau_post_trace");
  pc.offset = kv.get_double("plasticity.offset");
  pc.k_const = kv.get_double("plasticity.k_const");
  pc.k1_const = kv.get_double("plasticity.k1_const");
  pc.k2_const = kv.get_double("plasticity.k2_const");
  pc.alpha_lin = kv.get_double("plasticity.alpha_lin");
  pc.w_max = kv.get_double("plasticity.w_max");
  pc.theta_norm = kv.get_double("plasticity.theta_norm");
  pc.tau_leak_iso = kv.get_double("plasticity.tau_leak_iso");
  pc.alpha_iso = kv.get_double("plasticity.alpha_iso");
  pc.tau_trace_iso = kv.get_double("plasticity.tau_trace_iso");
  pc.stdp_eta = kv.get_double("stdp.eta");
  pc.stdp_mu = kv.get_double("stdp.mu");

  const std::string preset = kv.get_str("plasticity.alpha_preset");
  if (preset != "nominal" && preset != "reference")
    throw ConfigError("plasticity.alpha_preset: '" + preset + "' is not a preset");
  if (!kv.get_str("plasticity.alpha").empty())
    pc.alpha = kv.get_double("plasticity.alpha");
  else
    pc.alpha = preset == "reference" ? 0.01 : 0.0001;

  require(rc.n_exc >= 1, "net.n_exc must be >= 1");
  require(rc.n_input >= 1, "net.n_input must be >= 1");
  require(rc.dt > 0, "sim.dt must be > 0");
  require(rc.snapshot_cadence >= 1, "run.snapshot_cadence must be >= 1");
  require(rc.init_scale >= 0 && rc.init_scale <= 1, "net.init_scale must be in [0,1]");
  require(ep.exc.tau_mem > 0 && ep.inh.tau_mem > 0, "tau_mem must be > 0");
  require(ep.exc.tau_post_current > 0 && ep.inh.tau_post_current > 0,
          "tau_post_current must be > 0");
  require(ep.exc.v_reset <= ep.exc.v_thresh && ep.inh.v_reset <= ep.inh.v_thresh,
          "v_reset must not exceed v_thresh");
  require(ep.exc.refractory >= 0 && ep.inh.refractory >= 0,
          "refractory must be >= 0");
  require(ep.theta_plus > 0, "sim.theta_plus must be > 0");
  require(ep.tau_theta > 0, "sim.tau_theta must be > 0");
  require(pr.duration_ms > 0, "present.duration must be > 0");
  require(pr.rest_ms >= 0, "present.rest must be >= 0");
  require(pc.tau_rec > 0 && pc.tau_acc > 0 && pc.tau_post_trace > 0 &&
              pc.tau_leak_iso > 0 && pc.tau_trace_iso > 0,
          "plasticity time constants must be > 0");
  require(pc.offset >= 0 && pc.offset < 1, "plasticity.offset must be in [0,1)");
  require(pc.w_max > 0, "plasticity.w_max must be > 0");
  require(pc.theta_norm > 0, "plasticity.theta_norm must be > 0");
  require(pc.k2_const > 0, "plasticity.k2_const must be > 0");
  return rc;
}

ScheduleSpec schedule_spec_from(const KeyValueConfig& kv) {
  ScheduleSpec spec;
  const std::string mode = kv.get_str("schedule.mode");
  if (mode == "sequential")
    spec.mode = Schedule::Mode::Sequential;
  else if (mode == "intermixed")
    spec.mode = Schedule::Mode::Intermixed;
  else
    throw ConfigError("schedule.mode: '" + mode + "' is not sequential|intermixed");
  spec.classes = kv.get_int_list("schedule.classes");
  require(!spec.classes.empty(), "schedule.classes must name at least one class");
  for (int c : spec.classes)
    require(c >= 0 && c <= 9, "schedule.classes entries must be 0-9");
  spec.per_class = kv.get_int("schedule.per_class");
  const std::string preset = kv.get_str("schedule.preset");
  if (preset == "decreasing")
    spec.linear_preset = true;
  else if (preset != "none")
    throw ConfigError("schedule.preset: '" + preset + "' is not none|decreasing");
  spec.linear_base = kv.get_int("schedule.decreasing_base");
  spec.linear_step = kv.get_int("schedule.decreasing_step");
  return spec;
}

NoiseSpec noise_spec_from(const KeyValueConfig& kv) {
  NoiseSpec spec;
  const std::string kind = kv.get_str("noise.kind");
  if (kind == "awgn")
    spec.kind = NoiseKind::Awgn;
  else if (kind == "awgn_reduced_contrast")
    spec.kind = NoiseKind::AwgnReducedContrast;
  else
    throw ConfigError("noise.kind: '" + kind + "' is not awgn|awgn_reduced_contrast");
  spec.snr_db = kv.get_double("noise.snr_db");
  spec.contrast_factor = kv.get_double("noise.contrast");
  require(std::isfinite(spec.snr_db), "noise.snr_db must be finite");
  require(spec.contrast_factor > 0 && spec.contrast_factor <= 1,
          "noise.contrast must be in (0,1]");
  return spec;
}

Schedule make_schedule(const ImageSet& data, const ScheduleSpec& spec,
                       std::uint64_t seed) {
  std::map<int, int> counts =
      spec.linear_preset
          ? linear_counts(spec.classes, spec.linear_base, spec.linear_step)
          : [&] {
              std::map<int, int> c;
              for (int cls : spec.classes) c[cls] = spec.per_class;
              return c;
            }();
  return build_schedule(data, spec.mode, counts, seed, spec.classes);
}

}  // namespace asp
