#include <fstream>
#include <set>
#include <sstream>

#include "hqr/cli.hpp"

namespace hqr::cli {

namespace {

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  try {
    out = j[key].get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParameter, std::string("config field '") + key + "': " + e.what());
  }
}

template <class T>
void take(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  T v{};
  take(j, key, v);
  out = v;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "command", "radial", "angular", "refinement_cap", "tol", "radii", "angles", "refine",
      "max_evaluations", "min_step", "map", "scale", "constant", "check", "K", "Kprime",
      "verify_tol", "target", "alpha_K", "levels", "first_reported", "stabilization",
      "growth_target", "first", "last", "growth_angular", "grid", "out", "plot", "seed", "threads"};
  return keys;
}

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["radial"] = c.radial;
  j["angular"] = c.angular;
  j["refinement_cap"] = c.refinement_cap;
  j["tol"] = c.tol;
  j["radii"] = c.radii;
  j["angles"] = c.angles;
  j["refine"] = c.refine;
  j["max_evaluations"] = c.max_evaluations;
  j["min_step"] = c.min_step;
  j["map"] = c.map;
  j["scale"] = c.scale;
  j["constant"] = c.constant;
  j["check"] = c.check;
  j["K"] = c.K ? json(*c.K) : json(nullptr);
  j["Kprime"] = c.Kprime ? json(*c.Kprime) : json(nullptr);
  j["verify_tol"] = c.verify_tol;
  j["target"] = c.target;
  j["alpha_K"] = c.alpha_K ? json(*c.alpha_K) : json(nullptr);
  j["levels"] = c.levels;
  j["first_reported"] = c.first_reported;
  j["stabilization"] = c.stabilization;
  j["growth_target"] = c.growth_target;
  j["first"] = c.first;
  j["last"] = c.last;
  j["growth_angular"] = c.growth_angular;
  j["grid"] = c.grid;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

RunConfig config_from_json(const json& j) {
  require(j.is_object(), "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    require(known_keys().count(key) > 0, "unknown config field '" + key + "'");
  }
  RunConfig c;
  take(j, "command", c.command);
  take(j, "radial", c.radial);
  take(j, "angular", c.angular);
  take(j, "refinement_cap", c.refinement_cap);
  take(j, "tol", c.tol);
  take(j, "radii", c.radii);
  take(j, "angles", c.angles);
  take(j, "refine", c.refine);
  take(j, "max_evaluations", c.max_evaluations);
  take(j, "min_step", c.min_step);
  if (j.contains("map")) c.map = j["map"];
  take(j, "scale", c.scale);
  take(j, "constant", c.constant);
  take(j, "check", c.check);
  take(j, "K", c.K);
  take(j, "Kprime", c.Kprime);
  take(j, "verify_tol", c.verify_tol);
  take(j, "target", c.target);
  take(j, "alpha_K", c.alpha_K);
  take(j, "levels", c.levels);
  take(j, "first_reported", c.first_reported);
  take(j, "stabilization", c.stabilization);
  take(j, "growth_target", c.growth_target);
  take(j, "first", c.first);
  take(j, "last", c.last);
  take(j, "growth_angular", c.growth_angular);
  if (j.contains("grid")) c.grid = j["grid"];
  take(j, "out", c.out);
  take(j, "plot", c.plot);
  take(j, "seed", c.seed);
  take(j, "threads", c.threads);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    // A JSONL report: take the first line.
    const auto line = text.substr(0, text.find('\n'));
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::InvalidParameter, "config '" + path + "' is not JSON: " + e.what());
    }
  }
  if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
  return config_from_json(j);
}

}  // namespace hqr::cli
