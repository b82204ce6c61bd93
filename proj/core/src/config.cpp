#include "metaview/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "metaview/benchbuild.hpp"

namespace metaview {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos)
    return "";
  return s.substr(a, b - a + 1);
}

std::int64_t to_int(const std::string& key, const std::string& value) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    fail(Errc::config, key + ": expected an integer, got '" + value + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    fail(Errc::config, key + ": expected a non-negative integer, got '" + value + "'");
  return out;
}

double to_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size())
      throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(Errc::config, key + ": expected a real number, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1")
    return true;
  if (value == "off" || value == "false" || value == "0")
    return false;
  fail(Errc::config, key + ": expected on/off, got '" + value + "'");
}

std::string format_real(double v) {
  char buf[40];
  if (v == static_cast<double>(static_cast<long long>(v)) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  // shortest representation that round-trips
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v)
      break;
  }
  return buf;
}

std::string views_to_string(const EncoderConfig& e) {
  std::string out;
  if (e.use_x)
    out += "x";
  if (e.use_u)
    out += out.empty() ? "u" : ",u";
  if (e.use_z)
    out += out.empty() ? "z" : ",z";
  return out;
}

void views_from_string(const std::string& key, const std::string& value, EncoderConfig& e) {
  e.use_x = e.use_u = e.use_z = false;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part == "x")
      e.use_x = true;
    else if (part == "u")
      e.use_u = true;
    else if (part == "z")
      e.use_z = true;
    else
      fail(Errc::config, key + ": views are a comma list drawn from x, u, z");
  }
  if (!e.use_x && !e.use_u && !e.use_z)
    fail(Errc::config, key + ": at least one view must be enabled");
}

struct KeyEntry {
  const char* key;
  const char* description;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyEntry>& registry() {
  static const std::vector<KeyEntry> entries = {
      {"seed", "master seed for every derived stream",
       [](RunConfig& c, const std::string& v) { c.seed = to_u64("seed", v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"jobs", "parallel episode/graph workers (0 = hardware)",
       [](RunConfig& c, const std::string& v) { c.jobs = static_cast<int>(to_int("jobs", v)); },
       [](const RunConfig& c) { return std::to_string(c.jobs); }},
      {"data_dir", "dataset root (default $METAVIEW_DATA_DIR or .)",
       [](RunConfig& c, const std::string& v) { c.data_dir = v; },
       [](const RunConfig& c) { return c.data_dir; }},

      {"view.contextual_mode", "contextual augmentation: pad | deepset | hetero_concat",
       [](RunConfig& c, const std::string& v) {
         c.views.contextual_mode = contextual_mode_from_string(v);
       },
       [](const RunConfig& c) { return to_string(c.views.contextual_mode); }},
      {"view.d_pad", "contextual width after augmentation",
       [](RunConfig& c, const std::string& v) { c.views.d_pad = to_int("view.d_pad", v); },
       [](const RunConfig& c) { return std::to_string(c.views.d_pad); }},
      {"view.d_u", "sinusoidal degree-encoding width (even)",
       [](RunConfig& c, const std::string& v) { c.views.d_u = to_int("view.d_u", v); },
       [](const RunConfig& c) { return std::to_string(c.views.d_u); }},
      {"view.d_z", "diffusion spectrum length",
       [](RunConfig& c, const std::string& v) { c.views.d_z = to_int("view.d_z", v); },
       [](const RunConfig& c) { return std::to_string(c.views.d_z); }},
      {"view.diffusion", "diffusion kind: ppr | heat",
       [](RunConfig& c, const std::string& v) {
         c.views.diffusion_kind = diffusion_kind_from_string(v);
       },
       [](const RunConfig& c) { return to_string(c.views.diffusion_kind); }},
      {"view.alpha", "PPR teleport probability in (0,1)",
       [](RunConfig& c, const std::string& v) { c.views.alpha = to_real("view.alpha", v); },
       [](const RunConfig& c) { return format_real(c.views.alpha); }},
      {"view.heat_t", "heat kernel diffusion time",
       [](RunConfig& c, const std::string& v) { c.views.heat_t = to_real("view.heat_t", v); },
       [](const RunConfig& c) { return format_real(c.views.heat_t); }},
      {"view.series_k", "series truncation for the reference diffusion path",
       [](RunConfig& c, const std::string& v) {
         c.views.series_truncation = static_cast<int>(to_int("view.series_k", v));
       },
       [](const RunConfig& c) { return std::to_string(c.views.series_truncation); }},
      {"view.augment_seed", "seed of the fixed deepset/hetero projections",
       [](RunConfig& c, const std::string& v) {
         c.views.augment_seed = to_u64("view.augment_seed", v);
       },
       [](const RunConfig& c) { return std::to_string(c.views.augment_seed); }},

      {"encoder.d_h", "hidden width",
       [](RunConfig& c, const std::string& v) { c.encoder.d_h = to_int("encoder.d_h", v); },
       [](const RunConfig& c) { return std::to_string(c.encoder.d_h); }},
      {"encoder.gnn_layers", "GIN layers per stack, 1..3",
       [](RunConfig& c, const std::string& v) {
         c.encoder.gnn_layers = static_cast<int>(to_int("encoder.gnn_layers", v));
       },
       [](const RunConfig& c) { return std::to_string(c.encoder.gnn_layers); }},
      {"encoder.mlp_layers", "MLP layers per convolution/projection, 1..3",
       [](RunConfig& c, const std::string& v) {
         c.encoder.mlp_layers = static_cast<int>(to_int("encoder.mlp_layers", v));
       },
       [](const RunConfig& c) { return std::to_string(c.encoder.mlp_layers); }},
      {"encoder.dropout", "dropout probability",
       [](RunConfig& c, const std::string& v) {
         c.encoder.dropout_p = to_real("encoder.dropout", v);
       },
       [](const RunConfig& c) { return format_real(c.encoder.dropout_p); }},
      {"encoder.fwt", "feature-wise transform layers: on | off",
       [](RunConfig& c, const std::string& v) {
         c.encoder.fwt.enabled = to_bool("encoder.fwt", v);
       },
       [](const RunConfig& c) { return c.encoder.fwt.enabled ? "on" : "off"; }},
      {"encoder.fwt_sigma_gamma", "softplus(theta_gamma), std of the scale noise",
       [](RunConfig& c, const std::string& v) {
         c.encoder.fwt.sigma_gamma = to_real("encoder.fwt_sigma_gamma", v);
       },
       [](const RunConfig& c) { return format_real(c.encoder.fwt.sigma_gamma); }},
      {"encoder.fwt_sigma_beta", "softplus(theta_beta), std of the shift noise",
       [](RunConfig& c, const std::string& v) {
         c.encoder.fwt.sigma_beta = to_real("encoder.fwt_sigma_beta", v);
       },
       [](const RunConfig& c) { return format_real(c.encoder.fwt.sigma_beta); }},
      {"encoder.views", "enabled views, comma list from x, u, z",
       [](RunConfig& c, const std::string& v) { views_from_string("encoder.views", v, c.encoder); },
       [](const RunConfig& c) { return views_to_string(c.encoder); }},

      {"train.head", "metric head: proto | match | relation",
       [](RunConfig& c, const std::string& v) { c.train.head = head_kind_from_string(v); },
       [](const RunConfig& c) { return to_string(c.train.head); }},
      {"train.meta_batch", "tasks per meta-batch",
       [](RunConfig& c, const std::string& v) {
         c.train.meta_batch = static_cast<int>(to_int("train.meta_batch", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.meta_batch); }},
      {"train.epochs", "meta-training epochs",
       [](RunConfig& c, const std::string& v) {
         c.train.epochs = static_cast<int>(to_int("train.epochs", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.epochs); }},
      {"train.patience", "early-stopping patience in epochs",
       [](RunConfig& c, const std::string& v) {
         c.train.patience = static_cast<int>(to_int("train.patience", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.patience); }},
      {"train.lr", "peak learning rate of the cosine schedule",
       [](RunConfig& c, const std::string& v) { c.train.base_lr = to_real("train.lr", v); },
       [](const RunConfig& c) { return format_real(c.train.base_lr); }},
      {"train.way", "classes per episode",
       [](RunConfig& c, const std::string& v) {
         c.train.way = static_cast<int>(to_int("train.way", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.way); }},
      {"train.shots", "support samples per class",
       [](RunConfig& c, const std::string& v) {
         c.train.shots = static_cast<int>(to_int("train.shots", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.shots); }},
      {"train.queries", "query samples per class per training episode",
       [](RunConfig& c, const std::string& v) {
         c.train.queries = static_cast<int>(to_int("train.queries", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.queries); }},
      {"train.task_steps", "task-level steps (schedule table)",
       [](RunConfig& c, const std::string& v) {
         c.train.task_steps = static_cast<int>(to_int("train.task_steps", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.task_steps); }},
      {"train.adapt_steps", "cosine-classifier steps at meta-test",
       [](RunConfig& c, const std::string& v) {
         c.train.adapt_steps = static_cast<int>(to_int("train.adapt_steps", v));
       },
       [](const RunConfig& c) { return std::to_string(c.train.adapt_steps); }},
      {"train.task_lr", "task-level learning rate (schedule table)",
       [](RunConfig& c, const std::string& v) { c.train.task_lr = to_real("train.task_lr", v); },
       [](const RunConfig& c) { return format_real(c.train.task_lr); }},
      {"train.adapt_lr", "cosine-classifier learning rate at meta-test",
       [](RunConfig& c, const std::string& v) {
         c.train.adapt_lr = to_real("train.adapt_lr", v);
       },
       [](const RunConfig& c) { return format_real(c.train.adapt_lr); }},
      {"train.tau", "cosine classifier logit scale",
       [](RunConfig& c, const std::string& v) { c.train.tau = to_real("train.tau", v); },
       [](const RunConfig& c) { return format_real(c.train.tau); }},

      {"eval.runs", "evaluation runs with fresh support seeds",
       [](RunConfig& c, const std::string& v) {
         c.eval.runs = static_cast<int>(to_int("eval.runs", v));
       },
       [](const RunConfig& c) { return std::to_string(c.eval.runs); }},
      {"eval.adapt", "meta-test adaptation: cosine | none",
       [](RunConfig& c, const std::string& v) {
         if (v == "cosine")
           c.eval.use_cosine_adapt = true;
         else if (v == "none")
           c.eval.use_cosine_adapt = false;
         else
           fail(Errc::config, "eval.adapt: expected cosine or none");
       },
       [](const RunConfig& c) { return c.eval.use_cosine_adapt ? "cosine" : "none"; }},
      {"eval.queries", "query samples per class (tasks without fixed pools)",
       [](RunConfig& c, const std::string& v) {
         c.eval.queries = static_cast<int>(to_int("eval.queries", v));
       },
       [](const RunConfig& c) { return std::to_string(c.eval.queries); }},

      {"synth.train_tasks", "synthetic suite: meta-train tasks",
       [](RunConfig& c, const std::string& v) {
         c.synth.train_tasks = static_cast<int>(to_int("synth.train_tasks", v));
       },
       [](const RunConfig& c) { return std::to_string(c.synth.train_tasks); }},
      {"synth.dev_tasks", "synthetic suite: dev tasks",
       [](RunConfig& c, const std::string& v) {
         c.synth.dev_tasks = static_cast<int>(to_int("synth.dev_tasks", v));
       },
       [](const RunConfig& c) { return std::to_string(c.synth.dev_tasks); }},
      {"synth.test_tasks", "synthetic suite: meta-test tasks",
       [](RunConfig& c, const std::string& v) {
         c.synth.test_tasks = static_cast<int>(to_int("synth.test_tasks", v));
       },
       [](const RunConfig& c) { return std::to_string(c.synth.test_tasks); }},
      {"synth.pool_per_class", "synthetic suite: graphs per class per task",
       [](RunConfig& c, const std::string& v) {
         c.synth.pool_per_class = static_cast<int>(to_int("synth.pool_per_class", v));
       },
       [](const RunConfig& c) { return std::to_string(c.synth.pool_per_class); }},
      {"synth.train_feature_dim", "synthetic suite: source feature width",
       [](RunConfig& c, const std::string& v) {
         c.synth.train_feature_dim = to_int("synth.train_feature_dim", v);
       },
       [](const RunConfig& c) { return std::to_string(c.synth.train_feature_dim); }},
      {"synth.test_feature_dim", "synthetic suite: target feature width",
       [](RunConfig& c, const std::string& v) {
         c.synth.test_feature_dim = to_int("synth.test_feature_dim", v);
       },
       [](const RunConfig& c) { return std::to_string(c.synth.test_feature_dim); }},
      {"synth.min_nodes", "synthetic suite: smallest graph",
       [](RunConfig& c, const std::string& v) {
         c.synth.min_nodes = to_int("synth.min_nodes", v);
       },
       [](const RunConfig& c) { return std::to_string(c.synth.min_nodes); }},
      {"synth.max_nodes", "synthetic suite: largest graph",
       [](RunConfig& c, const std::string& v) {
         c.synth.max_nodes = to_int("synth.max_nodes", v);
       },
       [](const RunConfig& c) { return std::to_string(c.synth.max_nodes); }},
  };
  return entries;
}

void finalize(RunConfig& cfg) {
  if (cfg.data_dir.empty()) {
    const char* env = std::getenv("METAVIEW_DATA_DIR");
    cfg.data_dir = env ? env : ".";
  }
  cfg.train.seed = cfg.seed;
  cfg.train.jobs = cfg.jobs;
  cfg.eval.seed = Rng::derive_seed(cfg.seed, 0xe7a1ULL);
  cfg.eval.jobs = cfg.jobs;
  cfg.eval.way = cfg.train.way;
  cfg.eval.shots = cfg.train.shots;
  cfg.eval.adapt_steps = cfg.train.adapt_steps;
  cfg.eval.adapt_lr = cfg.train.adapt_lr;
  cfg.eval.tau = cfg.train.tau;
  cfg.synth.seed = Rng::derive_seed(cfg.seed, 0x5b17ULL);
}

} // namespace

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& entry : registry()) {
    out += entry.key;
    out += " = ";
    out += entry.get(*this);
    out += "\n";
  }
  return out;
}

std::string RunConfig::hash() const { return fnv1a64_hex(canonical()); }

std::string RunConfig::schema() {
  RunConfig defaults;
  finalize(defaults);
  std::string out = "# key = default          description\n";
  for (const auto& entry : registry()) {
    out += entry.key;
    out += " = ";
    out += entry.get(defaults);
    out += "    # ";
    out += entry.description;
    out += "\n";
  }
  return out;
}

void RunConfig::validate() const {
  views.validate();
  encoder.validate();
  train.validate();
  eval.validate();
  if (synth.train_tasks < 1 || synth.dev_tasks < 0 || synth.test_tasks < 1 ||
      synth.pool_per_class < 1)
    fail(Errc::config, "synthetic suite sizes must be positive");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  finalize(cfg); // establish defaults before overrides
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#')
      continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(Errc::config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    bool known = false;
    for (const auto& entry : registry()) {
      if (key == entry.key) {
        entry.set(cfg, value);
        known = true;
        break;
      }
    }
    if (!known)
      fail(Errc::config, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  finalize(cfg);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    fail(Errc::config, "cannot open config: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_overrides(RunConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<int>& jobs,
                     const std::optional<std::string>& data_dir) {
  if (seed)
    cfg.seed = *seed;
  if (jobs)
    cfg.jobs = *jobs;
  if (data_dir)
    cfg.data_dir = *data_dir;
  finalize(cfg);
  cfg.validate();
}

} // namespace metaview
