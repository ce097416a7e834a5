#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <unistd.h>

#include "hqr/cli.hpp"
#include "hqr/parallel.hpp"

namespace hqr::cli {

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

QuadratureConfig quadrature_of(const RunConfig& c) {
  QuadratureConfig q = norm_quadrature();
  q.radial = c.radial;
  q.angular = c.angular;
  q.refinement_cap = c.refinement_cap;
  q.tol = c.tol;
  require(q.radial >= 2 && q.angular >= 4, "radial >= 2 and angular >= 4 required");
  return q;
}

SupSearchSpec search_of(const RunConfig& c) {
  SupSearchSpec s;
  if (!c.radii.empty()) s.radii = c.radii;
  s.angles_per_radius = c.angles;
  s.refine = c.refine;
  s.max_evaluations = c.max_evaluations;
  s.min_step = c.min_step;
  return s;
}

VerifyOptions verify_options(const RunConfig& c) {
  VerifyOptions o;
  o.search = search_of(c);
  o.cfg = quadrature_of(c);
  o.tol = c.verify_tol;
  return o;
}

MembershipOptions membership_options(const RunConfig& c) {
  MembershipOptions o;
  o.levels = c.levels;
  o.first_reported = c.first_reported;
  o.stabilization = c.stabilization;
  o.search = search_of(c);
  o.seed = c.seed;
  return o;
}

std::string check_family(const std::string& check) {
  for (const char* kind : {"conjugate", "kkprime", "membership"}) {
    const std::string k = kind;
    if (check == k) return k;
    if (check.size() > k.size() && check.ends_with("-" + k)) return k;
  }
  fail(ErrorKind::InvalidParameter, "unknown check '" + check + "'");
}

bool is_f_scale(const SpaceParams& s) { return std::holds_alternative<Fpqs>(s); }

std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string render(const json& record) { return record.dump() + "\n"; }

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Accuracy:
    case ErrorKind::Singularity:
    case ErrorKind::Pole:
      return kExitQuadrature;
    case ErrorKind::Io:
      return kExitIo;
    default:
      return kExitInvalid;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_atomically(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::Io, "cannot move output into '" + path + "'");
  }
}

json report_record(const VerificationReport& r, const std::string& map_name) {
  json j;
  j["theorem"] = r.check;
  j["map"] = map_name;
  j["scale"] = r.scale;
  j["K"] = r.K;
  j["Kprime"] = r.Kprime;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["pass"] = r.pass;
  j["tol"] = r.tol;
  j["grid_radial"] = r.grid_radial;
  j["grid_angular"] = r.grid_angular;
  j["map_description"] = r.map_description;
  j["power_scale"] = r.power_scale;
  j["p"] = r.p;
  if (!r.constant_name.empty()) {
    j["constant"] = r.constant_name;
    j["constant_value"] = r.constant_value;
  }
  j["sup_a_u"] = complex_json(r.sup_a_u);
  j["sup_a_v"] = complex_json(r.sup_a_v);
  j["converged"] = r.converged;
  j["warnings"] = r.warnings;
  if (r.membership) {
    const auto& m = *r.membership;
    json mj;
    mj["target"] = m.target;
    mj["alpha_K"] = m.alpha_K;
    mj["t"] = m.range.t;
    mj["c"] = m.range.c;
    mj["gamma"] = m.range.gamma;
    mj["bound"] = m.range.bound;
    mj["in_range"] = m.range.in_range;
    mj["regime"] = m.range.regime;
    mj["identity_residual"] = m.range.identity_residual;
    mj["radii"] = m.radii;
    mj["values"] = m.values;
    mj["relative_changes"] = m.relative_changes;
    mj["stabilized"] = m.stabilized;
    mj["status"] = m.status;
    mj["divergence_exponent"] = m.divergence_exponent;
    if (m.pointwise_ratio >= 0.0) mj["pointwise_ratio"] = m.pointwise_ratio;
    mj["mesh_nodes"] = m.mesh_nodes;
    j["membership"] = mj;
  }
  return j;
}

json norm_record(const NormResult& r, const std::string& map_name) {
  json j;
  j["map"] = map_name;
  j["scale"] = r.scale;
  j["route"] = r.route;
  j["value"] = r.value;
  j["sup_integral"] = r.sup_integral;
  j["root"] = r.root;
  if (r.f0_included) j["f0_term"] = r.f0_term;
  j["sup_a"] = complex_json(r.sup_a);
  j["error_estimate"] = r.error_estimate;
  j["integral_error"] = r.integral_error;
  j["converged"] = r.converged;
  j["grid_radial"] = r.grid_radial;
  j["grid_angular"] = r.grid_angular;
  j["warnings"] = r.warnings;
  json trace = json::array();
  for (const auto& e : r.trace) {
    trace.push_back({{"a", complex_json(e.a)}, {"value", e.value}, {"error", e.error}, {"converged", e.converged}});
  }
  j["trace"] = trace;
  return j;
}

VerificationReport run_check(const RunConfig& c, const BuiltMap& m, const SpaceParams& scale,
                             const MembershipSamples* cached) {
  const std::string kind = check_family(c.check);
  const double K = c.K.value_or(m.K);
  const double Kp = c.Kprime.value_or(m.Kprime.value_or(0.0));
  const auto vo = verify_options(c);
  VerificationReport r;

  if (kind == "membership") {
    const OrderModel model = c.alpha_K ? OrderModel::with_order(K, *c.alpha_K) : OrderModel::conjectured(K);
    std::variant<Mpqs, Fpqs> sc;
    if (const auto* mp = std::get_if<Mpqs>(&scale)) {
      sc = *mp;
    } else if (const auto* fp = std::get_if<Fpqs>(&scale)) {
      sc = *fp;
    } else {
      fail(ErrorKind::InvalidParameter, "membership checks take an M or F scale");
    }
    const auto target = membership_target_from(c.target);
    if (cached) {
      r = verify_membership(*cached, model, sc, membership_options(c));
    } else {
      const MembershipSamples samples(m.map, target, is_f_scale(scale), c.levels);
      r = verify_membership(samples, model, sc, membership_options(c));
    }
  } else {
    const bool kp = kind == "kkprime";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Qnpa>) {
            require(s.n == 1, "conjugate checks on the Q scale need n = 1");
            r = kp ? verify_q_kkprime(m.map, K, Kp, s.p, s.alpha, vo) : verify_q_conjugate(m.map, K, s.p, s.alpha, vo);
          } else if constexpr (std::is_same_v<T, Fpqs>) {
            r = kp ? verify_f_kkprime(m.map, K, Kp, s, vo) : verify_f_conjugate(m.map, K, s, vo);
          } else if constexpr (std::is_same_v<T, Mpqs>) {
            fail(ErrorKind::InvalidParameter, "M scales only support membership checks");
          } else {
            r = verify_scale_bound(m.map, K, Kp, SpecialScale{s}, kp, vo);
          }
        },
        scale);
  }
  require(c.check == kind || c.check == r.check,
          "check '" + c.check + "' does not match scale " + describe(scale) + " (runs as '" + r.check + "')");
  return r;
}

int cmd_verify(const RunConfig& c) {
  require(!c.map.is_null(), "verify needs --map");
  require(!c.scale.empty(), "verify needs --scale");
  const auto m = build_map(c.map);
  const auto scale = parse_space(c.scale);
  const auto r = run_check(c, m, scale);
  auto rec = report_record(r, m.name);
  rec["config"] = to_json(c);
  write_atomically(c.out, render(rec));
  return r.pass ? kExitOk : kExitCheckFailed;
}

int cmd_norm(const RunConfig& c) {
  require(!c.map.is_null(), "norm needs --map");
  require(!c.scale.empty(), "norm needs --scale");
  const auto m = build_map(c.map);
  const auto scale = parse_space(c.scale);
  const auto r = norm(m.map, scale, search_of(c), quadrature_of(c));
  auto rec = norm_record(r, m.name);
  rec["config"] = to_json(c);
  write_atomically(c.out, render(rec));
  return kExitOk;
}

int cmd_constants(const RunConfig& c) {
  require(!c.constant.empty(), "constants needs --constant");
  const auto which = parse_constant(c.constant);
  json rec;
  rec["constant"] = describe(which);
  try {
    const auto r = space_constant(which, {}, quadrature_of(c));
    rec["finite"] = true;
    rec["value"] = r.value;
    rec["sup_a"] = complex_json(r.sup_a);
    rec["error_estimate"] = r.error_estimate;
    rec["converged"] = r.converged;
    rec["grid_radial"] = r.grid_radial;
    rec["grid_angular"] = r.grid_angular;
    rec["warnings"] = r.warnings;
    json trace = json::array();
    for (const auto& e : r.trace) trace.push_back({{"rho", std::abs(e.a)}, {"value", e.value}});
    rec["trace"] = trace;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InfiniteConstant) throw;
    rec["finite"] = false;
    rec["value"] = nullptr;
    rec["reason"] = e.what();
  }
  rec["config"] = to_json(c);
  write_atomically(c.out, render(rec));
  return kExitOk;
}

int cmd_growth(const RunConfig& c) {
  require(!c.map.is_null(), "growth needs --map");
  const auto m = build_map(c.map);
  const auto radii = dyadic_radii(c.first, c.last);
  const auto which = growth_target_from(c.growth_target);
  const auto fit = growth_exponent(m.map, which, radii, c.growth_angular);
  json rec;
  rec["map"] = m.name;
  rec["target"] = to_string(which);
  rec["beta"] = fit.beta;
  rec["intercept"] = fit.intercept;
  rec["residual"] = fit.residual;
  rec["non_monotone"] = fit.non_monotone;
  rec["radii"] = fit.radii;
  rec["maxima"] = fit.maxima;
  rec["config"] = to_json(c);
  if (!c.plot.empty()) {
    std::ostringstream dat;
    dat.precision(17);
    dat << "# radius  -log(1-r^2)  max\n";
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
      const double r = fit.radii[i];
      dat << r << ' ' << -std::log1p(-r * r) << ' ' << fit.maxima[i] << '\n';
    }
    write_atomically(c.plot + ".dat", dat.str());
    std::ostringstream gp;
    gp << "set logscale y\nset xlabel '-log(1-r^2)'\nset ylabel 'max |" << to_string(which) << "|'\n"
       << "plot '" << std::filesystem::path(c.plot).filename().string()
       << ".dat' using 2:3 with points title 'samples', exp(" << fit.intercept << " + " << fit.beta
       << " * x) title 'beta = " << fit.beta << "'\n";
    write_atomically(c.plot + ".gp", gp.str());
  }
  write_atomically(c.out, render(rec));
  return kExitOk;
}

int cmd_sweep(const RunConfig& c) {
  const json& g = c.grid;
  require(g.is_null() || g.is_object(), "grid must be an object");
  auto list = [&](const char* key) {
    if (g.is_null() || !g.contains(key)) return json::array();
    require(g[key].is_array(), std::string("grid field '") + key + "' must be a list");
    return g[key];
  };
  if (!g.is_null()) {
    for (const auto& [key, _] : g.items()) {
      require(key == "maps" || key == "k" || key == "scales" || key == "Kprime", "unknown grid field '" + key + "'");
    }
  }
  const json maps = list("maps"), ks = list("k"), scales = list("scales"), kps = list("Kprime");

  struct Cell {
    json map;
    std::optional<double> k, kp;
    std::string scale;
  };
  std::vector<Cell> cells;
  for (const auto& mp : maps) {
    const json spec = mp.is_string() ? parse_map_text(mp.get<std::string>()) : mp;
    const json kk = ks.empty() ? json::array({nullptr}) : ks;
    for (const auto& k : kk) {
      for (const auto& sc : scales) {
        const json pp = kps.empty() ? json::array({nullptr}) : kps;
        for (const auto& kp : pp) {
          Cell cell{spec, std::nullopt, std::nullopt, sc.get<std::string>()};
          if (!k.is_null()) cell.k = k.get<double>();
          if (!kp.is_null()) cell.kp = kp.get<double>();
          const auto fam = spec.value("family", std::string());
          const bool takes_k = fam == "affine" || fam == "shear" || fam == "koebe_shear" ||
                               fam == "from_dilatation" || fam == "perturbed_affine";
          if (cell.k && takes_k && !cell.map.contains("k") && !cell.map.contains("w")) cell.map["k"] = *cell.k;
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  struct Row {
    VerificationReport r;
    std::string map, scale, status, detail;
    double K = 0, Kp = 0;
    bool pass = false;
  };
  std::vector<Row> rows(cells.size());

  // Membership samples are shared between cells that differ only in exponents.
  std::map<std::string, std::shared_ptr<MembershipSamples>> samples;
  std::vector<std::string> sample_key(cells.size());
  const bool membership = check_family(c.check) == "membership";
  for (std::size_t i = 0; membership && i < cells.size(); ++i) {
    try {
      const auto m = build_map(cells[i].map);
      const bool fs = is_f_scale(parse_space(cells[i].scale));
      sample_key[i] = m.name + (fs ? "|F" : "|M");
      if (!samples.count(sample_key[i])) {
        samples[sample_key[i]] =
            std::make_shared<MembershipSamples>(m.map, membership_target_from(c.target), fs, c.levels);
      }
    } catch (const Error&) {
      sample_key[i].clear();
    }
  }

  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell& cell = cells[i];
    Row& row = rows[i];
    row.scale = cell.scale;
    row.map = map_text(cell.map);
    try {
      const auto m = build_map(cell.map);
      row.map = m.name;
      RunConfig cc = c;
      if (cell.k) cc.K = std::max(QrParams::K_from_k(*cell.k), m.K);
      if (cell.kp) cc.Kprime = cell.kp;
      const auto scale = parse_space(cell.scale);
      const MembershipSamples* cached = nullptr;
      if (auto it = samples.find(sample_key[i]); it != samples.end()) cached = it->second.get();
      row.r = run_check(cc, m, scale, cached);
      row.pass = row.r.pass;
      row.K = row.r.K;
      row.Kp = row.r.Kprime;
      row.scale = row.r.scale;
      if (row.r.membership) {
        row.status = row.r.membership->status;
        row.detail = row.r.membership->range.in_range ? "in range" : "out of range";
      } else {
        row.status = row.r.converged ? "ok" : "not converged";
      }
    } catch (const Error& e) {
      row.status = "error:" + std::string(to_string(e.kind()));
      row.detail = e.what();
    }
  });

  std::ostringstream csv;
  csv << "theorem,map,scale,K,Kprime,lhs,rhs,margin,pass,tol,grid_radial,grid_angular,status,detail\n";
  bool all = true;
  for (const auto& row : rows) {
    all = all && row.pass;
    csv << csv_field(row.r.check) << ',' << csv_field(row.map) << ',' << csv_field(row.scale) << ',' << num(row.K) << ','
        << num(row.Kp) << ',' << num(row.r.lhs) << ',' << num(row.r.rhs) << ',' << num(row.r.margin) << ','
        << (row.pass ? "true" : "false") << ',' << num(row.r.tol) << ',' << row.r.grid_radial << ',' << row.r.grid_angular << ',' << csv_field(row.status)
        << ',' << csv_field(row.detail) << '\n';
  }
  if (!c.plot.empty()) {
    std::ostringstream dat;
    dat.precision(17);
    dat << "# row  lhs  rhs  margin\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      dat << i << ' ' << num(rows[i].r.lhs) << ' ' << num(rows[i].r.rhs) << ' ' << num(rows[i].r.margin) << '\n';
    }
    write_atomically(c.plot + ".dat", dat.str());
    const auto name = std::filesystem::path(c.plot).filename().string();
    write_atomically(c.plot + ".gp", "set logscale y\nset xlabel 'row'\nplot '" + name +
                                         ".dat' using 1:2 title 'lhs', '' using 1:3 title 'rhs'\n");
  }
  write_atomically(c.out, csv.str());
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace hqr::cli
