#include "magnl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "magnl/errors.hpp"

namespace magnl {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

double need_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": must be a number");
  return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": must be a number");
  return obj[key].get<double>();
}

std::string need_string(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  if (!obj[key].is_string()) throw ConfigError(where + "." + key + ": must be a string");
  return obj[key].get<std::string>();
}

DomainSpec parse_domain(const json& j) {
  if (!j.is_object()) throw ConfigError("domain: must be an object");
  const std::string type = need_string(j, "domain", "type");
  if (type == "rectangle") {
    reject_unknown(j, "domain", {"type", "x0", "y0", "x1", "y1"});
    return DomainSpec::rectangle(need_number(j, "domain", "x0"), need_number(j, "domain", "y0"),
                                 need_number(j, "domain", "x1"), need_number(j, "domain", "y1"));
  }
  if (type == "disk") {
    reject_unknown(j, "domain", {"type", "cx", "cy", "r", "segments"});
    return DomainSpec::disk({need_number(j, "domain", "cx"), need_number(j, "domain", "cy")},
                            need_number(j, "domain", "r"),
                            static_cast<int>(opt_number(j, "domain", "segments", 64)));
  }
  throw ConfigError("domain.type: must be \"rectangle\" or \"disk\"");
}

HoleSpec parse_hole(const json& j) {
  if (!j.is_object()) throw ConfigError("hole: must be an object");
  const std::string type = need_string(j, "hole", "type");
  if (type == "none") {
    reject_unknown(j, "hole", {"type"});
    return HoleSpec::none();
  }

  const Vec2 c{need_number(j, "hole", "cx"), need_number(j, "hole", "cy")};
  // The per-epsilon sweep overrides the scale; 1.0 is a placeholder.
  if (type == "disk") {
    reject_unknown(j, "hole", {"type", "cx", "cy", "segments"});
    return HoleSpec::disk(c, 1.0, static_cast<int>(opt_number(j, "hole", "segments", 48)));
  }
  if (type == "convex-polygon") {
    reject_unknown(j, "hole", {"type", "cx", "cy", "vertices"});
    if (!j.contains("vertices") || !j["vertices"].is_array())
      throw ConfigError("hole.vertices: must be an array of [x, y] pairs");
    std::vector<Vec2> verts;
    for (const auto& v : j["vertices"]) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError("hole.vertices: must be an array of [x, y] pairs");
      verts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return HoleSpec::convex_polygon(c, 1.0, std::move(verts));
  }
  if (type == "segment-slit") {
    reject_unknown(j, "hole", {"type", "cx", "cy", "angle"});
    return HoleSpec::segment_slit(c, 1.0, opt_number(j, "hole", "angle", 0.0));
  }
  if (type == "l-slit") {
    reject_unknown(j, "hole", {"type", "cx", "cy", "angle"});
    return HoleSpec::l_slit(c, 1.0, opt_number(j, "hole", "angle", 0.0));
  }
  if (type == "split-ring") {
    reject_unknown(j, "hole", {"type", "cx", "cy", "gap_fraction", "ring_factor", "segments"});
    return HoleSpec::split_ring(c, 1.0, opt_number(j, "hole", "gap_fraction", 0.25),
                                opt_number(j, "hole", "ring_factor", 0.8),
                                static_cast<int>(opt_number(j, "hole", "segments", 64)));
  }
  throw ConfigError("hole.type: must be one of none, disk, convex-polygon, segment-slit, "
                    "l-slit, split-ring");
}

PotentialModel parse_field(const json& j) {
  if (!j.is_object()) throw ConfigError("field: must be an object");
  reject_unknown(j, "field", {"type", "b0", "gauge"});
  const std::string type = need_string(j, "field", "type");
  if (type != "uniform") throw ConfigError("field.type: must be \"uniform\"");
  PotentialModel model = PotentialModel::uniform(need_number(j, "field", "b0"));
  if (j.contains("gauge")) {
    const json& g = j["gauge"];
    if (!g.is_object()) throw ConfigError("field.gauge: must be an object");
    reject_unknown(g, "field.gauge", {"chi", "amplitude"});
    const std::string chi = need_string(g, "field.gauge", "chi");
    const double amp = need_number(g, "field.gauge", "amplitude");
    try {
      model = gauge_shift(model, chi, amp);
    } catch (const InvalidSpecError& e) {
      throw ConfigError(std::string("field.gauge.chi: ") + e.what());
    }
  }
  return model;
}

}  // namespace

SweepConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, "config",
                 {"domain", "hole", "epsilons", "field", "h", "m", "tol", "eta", "grid_n",
                  "seed"});

  SweepConfig cfg;
  if (!j.contains("domain")) throw ConfigError("config: missing \"domain\"");
  cfg.domain = parse_domain(j["domain"]);
  if (!j.contains("hole")) throw ConfigError("config: missing \"hole\"");
  cfg.hole = parse_hole(j["hole"]);

  if (!j.contains("epsilons") || !j["epsilons"].is_array() || j["epsilons"].empty())
    throw ConfigError("epsilons: must be a nonempty array");
  for (const auto& e : j["epsilons"]) {
    if (!e.is_number()) throw ConfigError("epsilons: entries must be numbers");
    cfg.epsilons.push_back(e.get<double>());
  }

  cfg.field = j.contains("field") ? parse_field(j["field"]) : PotentialModel::uniform(1.0);
  cfg.h = opt_number(j, "config", "h", 0.0);
  cfg.m = static_cast<int>(opt_number(j, "config", "m", 6));
  cfg.tol = opt_number(j, "config", "tol", 1e-8);
  if (j.contains("eta")) {
    if (j["eta"].is_string()) {
      if (j["eta"].get<std::string>() != "auto")
        throw ConfigError("eta: must be a number or \"auto\"");
      cfg.eta = 0.0;
    } else if (j["eta"].is_number()) {
      cfg.eta = j["eta"].get<double>();
    } else {
      throw ConfigError("eta: must be a number or \"auto\"");
    }
  }
  cfg.grid_n = static_cast<int>(opt_number(j, "config", "grid_n", 32));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw ConfigError("seed: must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace magnl
