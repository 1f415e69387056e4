#include "hypertune/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hypertune/error.hpp"

namespace hypertune {
namespace {

class YamlReader {
 public:
  explicit YamlReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node &at, const std::string &msg) const {
    const auto mark = at.Mark();
    const int line = mark.line >= 0 ? mark.line + 1 : 0;
    const int col = mark.column >= 0 ? mark.column + 1 : 0;
    throw ConfigError(source_ + ":" + std::to_string(line) + ":" +
                          std::to_string(col) + ": " + msg,
                      line, col);
  }

  void require_map(const YAML::Node &node, const std::string &path) const {
    if (!node.IsMap()) fail(node, "'" + path + "' must be a mapping");
  }

  void only_keys(const YAML::Node &node, const std::string &path,
                 const std::set<std::string> &allowed) const {
    for (const auto &kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        fail(kv.first, "unknown key '" + key + "' in '" + path + "'");
      }
    }
  }

  YAML::Node required(const YAML::Node &parent, const std::string &key,
                      const std::string &path) const {
    const YAML::Node child = parent[key];
    if (!child) fail(parent, "missing required field '" + path + key + "'");
    return child;
  }

  template <typename T>
  T as(const YAML::Node &node, const std::string &what) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception &) {
      fail(node, "'" + what + "' has the wrong type");
    }
  }

  template <typename T>
  void optional(const YAML::Node &parent, const std::string &key,
                const std::string &path, T &out) const {
    if (const YAML::Node child = parent[key]) out = as<T>(child, path + key);
  }

  const std::string &source() const { return source_; }

 private:
  std::string source_;
};

SearchSpace read_space(const YamlReader &r, const YAML::Node &node) {
  if (!node.IsSequence() || node.size() == 0) {
    r.fail(node, "'space' must be a non-empty list of parameters");
  }
  std::vector<ParamDef> defs;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const YAML::Node p = node[i];
    const std::string path = "space[" + std::to_string(i) + "].";
    r.require_map(p, "space[" + std::to_string(i) + "]");
    r.only_keys(p, "space[" + std::to_string(i) + "]",
                {"name", "lower", "upper", "multiple_of"});
    ParamDef def;
    def.name = r.as<std::string>(r.required(p, "name", path), path + "name");
    def.lower = r.as<std::int64_t>(r.required(p, "lower", path), path + "lower");
    def.upper = r.as<std::int64_t>(r.required(p, "upper", path), path + "upper");
    r.optional(p, "multiple_of", path, def.multiple_of);
    defs.push_back(std::move(def));
  }
  try {
    return SearchSpace(std::move(defs));
  } catch (const ValidationError &e) {
    r.fail(node, e.what());
  }
}

ObjectiveSpec read_objective(const YamlReader &r, const YAML::Node &node) {
  r.require_map(node, "objective");
  r.only_keys(node, "objective",
              {"kind", "builtin_id", "command", "negate", "timeout", "children"});
  ObjectiveSpec spec;
  const auto kind = r.as<std::string>(r.required(node, "kind", "objective."),
                                      "objective.kind");
  if (kind == "builtin") {
    spec.kind = ObjectiveKind::builtin;
    spec.builtin_id = r.as<std::string>(
        r.required(node, "builtin_id", "objective."), "objective.builtin_id");
    const auto &ids = builtin_objective_ids();
    if (std::find(ids.begin(), ids.end(), spec.builtin_id) == ids.end()) {
      r.fail(node["builtin_id"], "unknown builtin objective '" + spec.builtin_id + "'");
    }
  } else if (kind == "external") {
    spec.kind = ObjectiveKind::external;
    spec.builtin_id.clear();
    spec.command = r.as<std::string>(r.required(node, "command", "objective."),
                                     "objective.command");
  } else {
    r.fail(node["kind"], "objective.kind must be 'builtin' or 'external'");
  }
  r.optional(node, "negate", "objective.", spec.negate);
  r.optional(node, "timeout", "objective.", spec.timeout);
  r.optional(node, "children", "objective.", spec.children);
  try {
    spec.check();
  } catch (const ValidationError &e) {
    r.fail(node, e.what());
  }
  return spec;
}

void read_kernel(const YamlReader &r, const YAML::Node &node, KernelConfig &k) {
  r.require_map(node, "bo.kernel");
  r.only_keys(node, "bo.kernel",
              {"signal_variance", "length_scale", "noise_variance", "jitter"});
  r.optional(node, "signal_variance", "bo.kernel.", k.signal_variance);
  if (const YAML::Node ls = node["length_scale"]) {
    if (ls.IsSequence()) {
      k.length_scale = r.as<std::vector<double>>(ls, "bo.kernel.length_scale");
    } else {
      k.length_scale = {r.as<double>(ls, "bo.kernel.length_scale")};
    }
  }
  r.optional(node, "noise_variance", "bo.kernel.", k.noise_variance);
  r.optional(node, "jitter", "bo.kernel.", k.jitter);
}

void read_bo(const YamlReader &r, const YAML::Node &node, BoConfig &bo) {
  r.require_map(node, "bo");
  r.only_keys(node, "bo",
              {"n_initial", "refit_period", "refit_length_scales", "acquisition",
               "lambda", "allow_revisit", "kernel"});
  r.optional(node, "n_initial", "bo.", bo.n_initial);
  r.optional(node, "refit_period", "bo.", bo.refit_period);
  r.optional(node, "refit_length_scales", "bo.", bo.refit_length_scales);
  r.optional(node, "allow_revisit", "bo.", bo.allow_revisit);
  r.optional(node, "lambda", "bo.", bo.acquisition.lambda);
  if (const YAML::Node a = node["acquisition"]) {
    try {
      bo.acquisition.kind =
          parse_acquisition_kind(r.as<std::string>(a, "bo.acquisition"));
    } catch (const ValidationError &e) {
      r.fail(a, e.what());
    }
  }
  if (const YAML::Node k = node["kernel"]) read_kernel(r, k, bo.kernel);
}

void read_cobyla(const YamlReader &r, const YAML::Node &node, CobylaConfig &c) {
  r.require_map(node, "cobyla");
  r.only_keys(node, "cobyla", {"rho_begin", "rho_end"});
  r.optional(node, "rho_begin", "cobyla.", c.rho_begin);
  r.optional(node, "rho_end", "cobyla.", c.rho_end);
}

void read_pso(const YamlReader &r, const YAML::Node &node, PsoConfig &p) {
  r.require_map(node, "pso");
  r.only_keys(node, "pso",
              {"n_particles", "inertia", "cognitive", "social", "max_iters",
               "v_max", "memoize"});
  r.optional(node, "n_particles", "pso.", p.n_particles);
  r.optional(node, "inertia", "pso.", p.inertia);
  r.optional(node, "cognitive", "pso.", p.cognitive);
  r.optional(node, "social", "pso.", p.social);
  r.optional(node, "max_iters", "pso.", p.max_iters);
  r.optional(node, "v_max", "pso.", p.v_max);
  r.optional(node, "memoize", "pso.", p.memoize);
}

nlohmann::ordered_json kernel_json(const KernelConfig &k) {
  return {{"signal_variance", k.signal_variance},
          {"length_scale", k.length_scale},
          {"noise_variance", k.noise_variance},
          {"jitter", k.jitter}};
}

}  // namespace

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::bo: return "bo";
    case OptimizerKind::cobyla: return "cobyla";
    case OptimizerKind::pso: return "pso";
    case OptimizerKind::random: return "random";
  }
  return "unknown";
}

OptimizerKind parse_optimizer_kind(const std::string &text) {
  if (text == "bo") return OptimizerKind::bo;
  if (text == "cobyla") return OptimizerKind::cobyla;
  if (text == "pso") return OptimizerKind::pso;
  if (text == "random") return OptimizerKind::random;
  throw ValidationError("unknown optimizer '" + text +
                        "' (expected bo, cobyla, pso or random)");
}

BoConfig RunConfig::effective_bo() const {
  BoConfig c = bo;
  c.seed = seed;
  c.max_iterations = max_evals;
  c.n_initial = std::min(c.n_initial, max_evals);
  return c;
}

CobylaConfig RunConfig::effective_cobyla() const {
  CobylaConfig c = cobyla;
  c.seed = seed;
  c.max_evals = max_evals;
  return c;
}

PsoConfig RunConfig::effective_pso() const {
  PsoConfig c = pso;
  c.seed = seed;
  c.max_evals = max_evals;
  return c;
}

void RunConfig::check() const {
  try {
    if (max_evals < 1) throw ValidationError("max_evals must be >= 1");
    objective.check();
    switch (optimizer) {
      case OptimizerKind::bo:
        effective_bo().check(space.lattice_size());
        break;
      case OptimizerKind::cobyla:
        effective_cobyla().check(space.dims());
        break;
      case OptimizerKind::pso:
        effective_pso().check();
        break;
      case OptimizerKind::random:
        break;
    }
    if (objective.kind == ObjectiveKind::builtin) {
      BuiltinObjective probe(space, objective.builtin_id, objective.negate);
    }
  } catch (const ValidationError &e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config(const std::string &yaml_text,
                       const std::string &source_name) {
  const YamlReader r(source_name);
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException &e) {
    const int line = e.mark.line + 1;
    const int col = e.mark.column + 1;
    throw ConfigError(source_name + ":" + std::to_string(line) + ":" +
                          std::to_string(col) + ": " + e.msg,
                      line, col);
  }
  if (!root || !root.IsMap()) {
    throw ConfigError(source_name + ":1:1: config must be a mapping", 1, 1);
  }
  r.only_keys(root, "<root>",
              {"space", "objective", "optimizer", "seed", "max_evals",
               "output_dir", "bo", "cobyla", "pso", "known_optimum",
               "optimum_tolerance"});

  RunConfig cfg;
  cfg.space = read_space(r, r.required(root, "space", ""));
  cfg.objective = read_objective(r, r.required(root, "objective", ""));
  if (const YAML::Node o = root["optimizer"]) {
    try {
      cfg.optimizer = parse_optimizer_kind(r.as<std::string>(o, "optimizer"));
    } catch (const ValidationError &e) {
      r.fail(o, e.what());
    }
  }
  r.optional(root, "seed", "", cfg.seed);
  r.optional(root, "max_evals", "", cfg.max_evals);
  r.optional(root, "output_dir", "", cfg.output_dir);
  r.optional(root, "optimum_tolerance", "", cfg.optimum_tolerance);
  if (const YAML::Node k = root["known_optimum"]) {
    cfg.known_optimum = r.as<double>(k, "known_optimum");
  }
  if (const YAML::Node n = root["bo"]) read_bo(r, n, cfg.bo);
  if (const YAML::Node n = root["cobyla"]) read_cobyla(r, n, cfg.cobyla);
  if (const YAML::Node n = root["pso"]) read_pso(r, n, cfg.pso);

  const char *section = nullptr;
  switch (cfg.optimizer) {
    case OptimizerKind::bo: section = "bo"; break;
    case OptimizerKind::cobyla: section = "cobyla"; break;
    case OptimizerKind::pso: section = "pso"; break;
    case OptimizerKind::random: break;
  }
  if (section && !root[section]) {
    r.fail(root, std::string("missing required field '") + section +
                     "' (settings for optimizer " + section + ")");
  }
  try {
    cfg.check();
  } catch (const ConfigError &e) {
    r.fail(root, e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

nlohmann::ordered_json resolved_json(const RunConfig &cfg) {
  nlohmann::ordered_json j;
  auto &space = j["space"] = nlohmann::ordered_json::array();
  for (const auto &p : cfg.space.params()) {
    space.push_back({{"name", p.name},
                     {"lower", p.lower},
                     {"upper", p.upper},
                     {"multiple_of", p.multiple_of}});
  }
  const auto &o = cfg.objective;
  j["objective"] = {{"kind", o.kind == ObjectiveKind::builtin ? "builtin" : "external"},
                    {"builtin_id", o.builtin_id},
                    {"command", o.command},
                    {"negate", o.negate},
                    {"timeout", o.timeout},
                    {"children", o.children}};
  j["optimizer"] = to_string(cfg.optimizer);
  j["seed"] = cfg.seed;
  j["max_evals"] = cfg.max_evals;
  j["output_dir"] = cfg.output_dir;
  const auto bo = cfg.effective_bo();
  j["bo"] = {{"n_initial", bo.n_initial},
             {"refit_period", bo.refit_period},
             {"refit_length_scales", bo.refit_length_scales},
             {"acquisition", to_string(bo.acquisition.kind)},
             {"lambda", bo.acquisition.lambda},
             {"allow_revisit", bo.allow_revisit},
             {"kernel", kernel_json(bo.kernel)}};
  j["cobyla"] = {{"rho_begin", cfg.cobyla.rho_begin}, {"rho_end", cfg.cobyla.rho_end}};
  const auto &p = cfg.pso;
  j["pso"] = {{"n_particles", p.n_particles}, {"inertia", p.inertia},
              {"cognitive", p.cognitive},     {"social", p.social},
              {"max_iters", p.max_iters},     {"v_max", p.v_max},
              {"memoize", p.memoize}};
  j["known_optimum"] = cfg.known_optimum ? nlohmann::ordered_json(*cfg.known_optimum)
                                         : nlohmann::ordered_json(nullptr);
  j["optimum_tolerance"] = cfg.optimum_tolerance;
  return j;
}

RunConfig config_from_resolved(const nlohmann::json &j) {
  try {
    RunConfig cfg;
    std::vector<ParamDef> defs;
    for (const auto &p : j.at("space")) {
      defs.push_back({p.at("name").get<std::string>(), p.at("lower").get<std::int64_t>(),
                      p.at("upper").get<std::int64_t>(),
                      p.at("multiple_of").get<std::int64_t>()});
    }
    cfg.space = SearchSpace(std::move(defs));
    const auto &o = j.at("objective");
    cfg.objective.kind = o.at("kind") == "builtin" ? ObjectiveKind::builtin
                                                   : ObjectiveKind::external;
    cfg.objective.builtin_id = o.at("builtin_id").get<std::string>();
    cfg.objective.command = o.at("command").get<std::string>();
    cfg.objective.negate = o.at("negate").get<bool>();
    cfg.objective.timeout = o.at("timeout").get<double>();
    cfg.objective.children = o.at("children").get<int>();
    cfg.optimizer = parse_optimizer_kind(j.at("optimizer").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.max_evals = j.at("max_evals").get<std::size_t>();
    cfg.output_dir = j.at("output_dir").get<std::string>();
    const auto &bo = j.at("bo");
    cfg.bo.n_initial = bo.at("n_initial").get<std::size_t>();
    cfg.bo.refit_period = bo.at("refit_period").get<std::size_t>();
    cfg.bo.refit_length_scales = bo.at("refit_length_scales").get<bool>();
    cfg.bo.acquisition.kind = parse_acquisition_kind(bo.at("acquisition").get<std::string>());
    cfg.bo.acquisition.lambda = bo.at("lambda").get<double>();
    cfg.bo.allow_revisit = bo.at("allow_revisit").get<bool>();
    const auto &k = bo.at("kernel");
    cfg.bo.kernel.signal_variance = k.at("signal_variance").get<double>();
    cfg.bo.kernel.length_scale = k.at("length_scale").get<std::vector<double>>();
    cfg.bo.kernel.noise_variance = k.at("noise_variance").get<double>();
    cfg.bo.kernel.jitter = k.at("jitter").get<double>();
    cfg.cobyla.rho_begin = j.at("cobyla").at("rho_begin").get<double>();
    cfg.cobyla.rho_end = j.at("cobyla").at("rho_end").get<double>();
    const auto &p = j.at("pso");
    cfg.pso.n_particles = p.at("n_particles").get<std::size_t>();
    cfg.pso.inertia = p.at("inertia").get<double>();
    cfg.pso.cognitive = p.at("cognitive").get<double>();
    cfg.pso.social = p.at("social").get<double>();
    cfg.pso.max_iters = p.at("max_iters").get<std::size_t>();
    cfg.pso.v_max = p.at("v_max").get<double>();
    cfg.pso.memoize = p.at("memoize").get<bool>();
    if (!j.at("known_optimum").is_null()) {
      cfg.known_optimum = j.at("known_optimum").get<double>();
    }
    cfg.optimum_tolerance = j.at("optimum_tolerance").get<double>();
    return cfg;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("config.resolved: ") + e.what());
  } catch (const ValidationError &e) {
    throw ConfigError(std::string("config.resolved: ") + e.what());
  }
}

}  // namespace hypertune
