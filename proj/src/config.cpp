#include "srn/config.hpp"

#include <fstream>
#include <set>

namespace srn {

namespace {

using nlohmann::ordered_json;

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw config_error("config: unknown key '" + key + "' in " + where);
  }
}

void require(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key))
    throw config_error("config: missing required key '" + std::string(key) +
                       "' in " + where);
}

NetworkPreset parse_network(const ordered_json& net_doc,
                            const ordered_json& obs_doc) {
  require(obs_doc, "species", "observable");
  require(obs_doc, "threshold", "observable");
  reject_unknown_keys(obs_doc, {"species", "threshold"}, "observable");

  if (net_doc.contains("preset")) {
    reject_unknown_keys(net_doc, {"preset"}, "network");
    NetworkPreset preset = preset_by_name(net_doc["preset"].get<std::string>());
    // observable may override the preset default
    if (obs_doc["species"].is_string())
      preset.observable_species =
          preset.net.species_index(obs_doc["species"].get<std::string>());
    else
      preset.observable_species = obs_doc["species"].get<int>();
    preset.threshold = obs_doc["threshold"].get<double>();
    if (preset.observable_species < 0 ||
        preset.observable_species >= preset.net.species_count())
      throw config_error("config: observable species out of range");
    return preset;
  }

  require(net_doc, "species", "network");
  require(net_doc, "x0", "network");
  require(net_doc, "final_time", "network");
  require(net_doc, "reactions", "network");
  reject_unknown_keys(net_doc, {"species", "x0", "final_time", "reactions"},
                      "network");

  const auto names = net_doc["species"].get<std::vector<std::string>>();
  const int d = static_cast<int>(names.size());
  auto index_of = [&](const std::string& n) {
    for (int i = 0; i < d; ++i)
      if (names[static_cast<std::size_t>(i)] == n) return i;
    throw config_error("config: unknown species '" + n + "' in reaction");
  };

  std::vector<std::vector<int>> alpha, beta;
  std::vector<double> rates;
  for (const auto& r : net_doc["reactions"]) {
    require(r, "rate", "reaction");
    reject_unknown_keys(r, {"reactants", "products", "rate"}, "reaction");
    std::vector<int> a(static_cast<std::size_t>(d), 0);
    std::vector<int> b(static_cast<std::size_t>(d), 0);
    if (r.contains("reactants"))
      for (const auto& [name, coeff] : r["reactants"].items())
        a[static_cast<std::size_t>(index_of(name))] = coeff.get<int>();
    if (r.contains("products"))
      for (const auto& [name, coeff] : r["products"].items())
        b[static_cast<std::size_t>(index_of(name))] = coeff.get<int>();
    alpha.push_back(std::move(a));
    beta.push_back(std::move(b));
    rates.push_back(r["rate"].get<double>());
  }

  ReactionNetwork net(d, alpha, beta, rates, names);
  State x0 = net_doc["x0"].get<State>();
  net.validate_state(x0);

  int obs_species = obs_doc["species"].is_string()
                        ? net.species_index(obs_doc["species"].get<std::string>())
                        : obs_doc["species"].get<int>();
  if (obs_species < 0 || obs_species >= d)
    throw config_error("config: observable species out of range");

  return NetworkPreset{std::move(net), std::move(x0),
                       net_doc["final_time"].get<double>(), obs_species,
                       obs_doc["threshold"].get<double>(), "custom"};
}

}  // namespace

ExperimentConfig parse_experiment_config(const ordered_json& doc) {
  reject_unknown_keys(doc,
                      {"schema_version", "seed", "threads", "output_dir",
                       "network", "observable", "regression", "hjb", "forward"},
                      "top level");
  require(doc, "schema_version", "top level");
  require(doc, "network", "top level");
  require(doc, "observable", "top level");
  const int schema = doc["schema_version"].get<int>();
  if (schema != 1)
    throw config_error("config: unsupported schema_version " +
                       std::to_string(schema));

  PipelineConfig pipeline(parse_network(doc["network"], doc["observable"]));

  if (doc.contains("regression")) {
    const auto& reg = doc["regression"];
    reject_unknown_keys(reg, {"paths", "dt", "t_degree", "s_degree"}, "regression");
    if (reg.contains("paths")) pipeline.fit_paths = reg["paths"].get<int>();
    if (reg.contains("dt")) pipeline.fit_dt = reg["dt"].get<double>();
    if (reg.contains("t_degree")) pipeline.basis_t_degree = reg["t_degree"].get<int>();
    if (reg.contains("s_degree")) pipeline.basis_s_degree = reg["s_degree"].get<int>();
  }

  if (doc.contains("hjb")) {
    const auto& h = doc["hjb"];
    reject_unknown_keys(h,
                        {"s_max", "u_floor", "rel_tol", "abs_tol", "max_step",
                         "sigmoid_slope", "sigmoid_midpoint", "pilot_paths"},
                        "hjb");
    if (h.contains("s_max")) pipeline.s_max = h["s_max"].get<std::int64_t>();
    if (h.contains("u_floor")) pipeline.u_floor = h["u_floor"].get<double>();
    if (h.contains("rel_tol")) pipeline.ode_rel_tol = h["rel_tol"].get<double>();
    if (h.contains("abs_tol")) pipeline.ode_abs_tol = h["abs_tol"].get<double>();
    if (h.contains("max_step")) pipeline.ode_max_step = h["max_step"].get<double>();
    if (h.contains("sigmoid_slope"))
      pipeline.sigmoid_slope = h["sigmoid_slope"].get<double>();
    if (h.contains("sigmoid_midpoint"))
      pipeline.sigmoid_midpoint = h["sigmoid_midpoint"].get<double>();
    if (h.contains("pilot_paths")) pipeline.pilot_paths = h["pilot_paths"].get<int>();
  }

  if (doc.contains("forward")) {
    const auto& f = doc["forward"];
    reject_unknown_keys(
        f, {"paths", "dt_list", "policy", "delta_floor", "crude_baseline"},
        "forward");
    if (f.contains("paths")) pipeline.forward_paths = f["paths"].get<std::uint64_t>();
    if (f.contains("dt_list"))
      pipeline.forward_dts = f["dt_list"].get<std::vector<double>>();
    if (f.contains("policy")) pipeline.policy = f["policy"].get<std::string>();
    if (f.contains("delta_floor"))
      pipeline.delta_floor = f["delta_floor"].get<double>();
    if (f.contains("crude_baseline"))
      pipeline.crude_baseline = f["crude_baseline"].get<bool>();
  }

  if (doc.contains("seed")) pipeline.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("threads")) pipeline.threads = doc["threads"].get<unsigned>();

  const std::set<std::string> policies = {"crude", "mp-mapped", "mp-alternative",
                                          "hjb-full"};
  if (!policies.count(pipeline.policy))
    throw config_error("config: unknown policy '" + pipeline.policy + "'");
  for (double dt : pipeline.forward_dts)
    if (dt <= 0.0) throw config_error("config: forward dt must be positive");
  if (pipeline.fit_dt <= 0.0) throw config_error("config: regression dt must be positive");

  ExperimentConfig cfg(std::move(pipeline));
  cfg.schema_version = schema;
  if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
  cfg.echo = doc;
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config: parse failure in '" + path + "': " + e.what());
  }
  return parse_experiment_config(doc);
}

std::uint64_t config_hash(const ordered_json& doc) {
  const std::string dump = doc.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace srn
