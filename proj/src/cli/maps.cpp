#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hqr/cli.hpp"

namespace hqr::cli {

namespace {

std::string shortest(const json& v) {
  if (!v.is_number_float()) return v.dump();
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
  return std::string(buf, res.ptr);
}

json parse_value(const std::string& raw) {
  std::istringstream in(raw);
  std::vector<double> nums;
  double x;
  while (in >> x) nums.push_back(x);
  if (in.eof() && !nums.empty()) {
    if (nums.size() == 1 && raw.find(' ') == std::string::npos) return nums[0];
    return nums;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  return raw;
}

Complex coefficient(const json& c) {
  if (c.is_number()) return {c.get<double>(), 0.0};
  if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
    return {c[0].get<double>(), c[1].get<double>()};
  fail(ErrorKind::InvalidParameter, "bad coefficient " + c.dump());
}

std::vector<Complex> coefficients(const json& list) {
  require(list.is_array() && !list.empty(), "coefficient list expected, got " + list.dump());
  std::vector<Complex> out;
  for (const auto& c : list) out.push_back(coefficient(c));
  return out;
}

double number(const json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  require(spec[key].is_number(), std::string("map field '") + key + "' must be a number");
  return spec[key].get<double>();
}

double need(const json& spec, const char* key) {
  require(spec.contains(key), "map family '" + spec.value("family", std::string()) + "' needs '" + key + "'");
  return number(spec, key, 0.0);
}

/// w = k z unless an explicit w is given.
AnalyticFn dilatation_of(const json& spec, double& k) {
  if (spec.contains("w")) {
    AnalyticFn w = build_analytic(spec["w"]);
    k = sampled_sup_modulus(w);
    return w;
  }
  k = need(spec, "k");
  return poly({0.0, k});
}

}  // namespace

json parse_map_text(const std::string& text) {
  require(!text.empty(), "empty map spec");
  if (text.front() == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::InvalidParameter, std::string("map spec: ") + e.what());
    }
  }
  json spec;
  const auto colon = text.find(':');
  spec["family"] = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    require(eq != std::string::npos && eq > 0, "map parameter '" + item + "' is not key=value");
    spec[item.substr(0, eq)] = parse_value(item.substr(eq + 1));
  }
  return spec;
}

std::string map_text(const json& spec) {
  if (spec.is_string()) return spec.get<std::string>();
  if (!spec.is_object() || !spec.contains("family")) return spec.dump();
  std::string out = spec["family"].get<std::string>();
  char sep = ':';
  for (const auto& [key, v] : spec.items()) {
    if (key == "family") continue;
    out += sep;
    sep = ',';
    out += key + "=";
    if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + shortest(v[i]);
    } else if (v.is_string()) {
      out += v.get<std::string>();
    } else {
      out += shortest(v);
    }
  }
  return out;
}

AnalyticFn build_analytic(const json& spec) {
  if (spec.is_number()) return constant(spec.get<double>());
  if (spec.is_array()) return poly(coefficients(spec));
  if (spec.is_object() && spec.contains("poly")) return poly(coefficients(spec["poly"]));
  if (spec.is_string()) {
    const auto s = spec.get<std::string>();
    if (s == "z") return identity();
    if (s == "koebe") return koebe();
    if (s == "koebe'") return derivative(koebe());
    if (s == "z/(1-z)" || s == "cayley_half") return cayley_half();
    const json v = parse_value(s);
    if (!v.is_string()) return build_analytic(v);
  }
  fail(ErrorKind::InvalidParameter, "unknown analytic function " + spec.dump());
}

BuiltMap build_map(const json& raw) {
  const json spec = raw.is_string() ? parse_map_text(raw.get<std::string>()) : raw;
  require(spec.is_object() && spec.contains("family") && spec["family"].is_string(),
          "map spec needs a family, got " + spec.dump());
  const auto family = spec["family"].get<std::string>();
  std::optional<HarmonicMap> f;
  double K = 1.0;
  std::optional<double> Kp;
  double k = 0.0;

  if (family == "identity") {
    f = HarmonicMap::analytic(identity());
  } else if (family == "koebe") {
    f = HarmonicMap::analytic(koebe());
  } else if (family == "analytic") {
    f = HarmonicMap::analytic(build_analytic(spec.value("h", json("z"))));
  } else if (family == "affine") {
    k = need(spec, "k");
    const double sign = number(spec, "sign", -1.0);
    require(sign == 1.0 || sign == -1.0, "affine sign must be +1 or -1");
    f = affine_extremal(k, static_cast<int>(sign));
    K = QrParams::K_from_k(k);
  } else if (family == "kkprime") {
    f = kkprime_example();
    Kp = 4.0;
  } else if (family == "perturbed_affine") {
    k = need(spec, "k");
    f = perturbed_affine(k, need(spec, "eps"));
    K = number(spec, "K", QrParams::K_from_k(k));
    Kp = sampled_kprime(*f, K);
  } else if (family == "shear" || family == "koebe_shear") {
    const AnalyticFn w = dilatation_of(spec, k);
    const AnalyticFn phi = family == "koebe_shear" ? koebe() : build_analytic(spec.value("phi", json("z/(1-z)")));
    const bool normalize = spec.value("normalize", family == "koebe_shear");
    f = shear({phi, w, normalize});
    K = QrParams::K_from_k(k);
  } else if (family == "from_dilatation") {
    const AnalyticFn w = dilatation_of(spec, k);
    f = from_dilatation(build_analytic(spec.value("hprime", json("koebe'"))), w);
    K = QrParams::K_from_k(k);
  } else if (family == "poly") {
    f = HarmonicMap::normalized(poly(coefficients(spec.value("h", json::array({0.0, 1.0})))),
                                poly(coefficients(spec.value("g", json::array({0.0})))));
    const auto est = estimate_quasiregularity(*f, {48, 96, 1.0 - 1e-9, 8});
    require(!est.unbounded_dilatation || spec.contains("K"), "poly map has unbounded dilatation; give K");
    K = est.K_est;
  } else {
    fail(ErrorKind::InvalidParameter, "unknown map family '" + family + "'");
  }
  K = number(spec, "K", K);
  if (spec.contains("Kprime")) Kp = number(spec, "Kprime", 0.0);
  require(std::isfinite(K) && K >= 1.0, "K must be at least 1");
  return {*f, map_text(spec), K, Kp};
}

}  // namespace hqr::cli
