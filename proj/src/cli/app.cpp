#include <iostream>

#include "CLI11.hpp"
#include "hqr/cli.hpp"
#include "hqr/parallel.hpp"

namespace hqr::cli {

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out, plot, map, scale, constant, check, target, growth_target;
  std::optional<int> radial, angular, levels, first, last;
  std::optional<double> tol, K, Kprime, alpha_K, verify_tol;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> grid;
};

void common_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "JSON config or a report line to re-run")->envname("HQR_CONFIG");
  sub.add_option("--out", f.out, "output path (default stdout)")->envname("HQR_OUT");
  sub.add_option("--radial", f.radial, "radial quadrature nodes")->envname("HQR_RADIAL");
  sub.add_option("--angular", f.angular, "angular quadrature nodes")->envname("HQR_ANGULAR");
  sub.add_option("--tol", f.tol, "quadrature tolerance")->envname("HQR_TOL");
  sub.add_option("--seed", f.seed, "seed for sample grids")->envname("HQR_SEED");
  sub.add_option("--threads", f.threads, "worker threads, 0 = all cores")->envname("HQR_THREADS");
}

template <class T>
void over(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}
template <class T>
void over(T& dst, const std::optional<T>& src) {
  if (src) dst = *src;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Conjugate-type norm bounds for harmonic quasiregular maps"};
  app.require_subcommand(1);
  Flags f;

  auto* norm_cmd = app.add_subcommand("norm", "seminorm of a map in one scale");
  auto* const_cmd = app.add_subcommand("constants", "sup constant of a scale");
  auto* verify_cmd = app.add_subcommand("verify", "one conjugate-bound or membership check");
  auto* sweep_cmd = app.add_subcommand("sweep", "grid of checks written as CSV");
  auto* growth_cmd = app.add_subcommand("growth", "radial growth exponent fit");
  for (auto* s : {norm_cmd, const_cmd, verify_cmd, sweep_cmd, growth_cmd}) common_flags(*s, f);
  for (auto* s : {norm_cmd, verify_cmd, growth_cmd}) {
    s->add_option("--map", f.map, "family:key=value,... or JSON");
  }
  for (auto* s : {norm_cmd, verify_cmd}) s->add_option("--scale", f.scale, "e.g. Q(1,1.5,0), F(2,0,1), Morrey(0.5)");
  const_cmd->add_option("--constant", f.constant, "e.g. C_s(1), C_q_s(0,1), C_p_alpha(1.5,0)");
  for (auto* s : {verify_cmd, sweep_cmd}) {
    s->add_option("--check", f.check, "conjugate, kkprime or membership");
    s->add_option("--K", f.K);
    s->add_option("--Kprime", f.Kprime);
    s->add_option("--verify-tol", f.verify_tol, "relative margin tolerance");
    s->add_option("--target", f.target, "membership target: f, fz, fzbar, ftheta, bfb");
    s->add_option("--alpha-K", f.alpha_K, "order override for membership ranges");
    s->add_option("--levels", f.levels, "truncation levels R_j = 1 - 2^-j");
  }
  sweep_cmd->add_option("--grid", f.grid, "grid JSON: maps, k, scales, Kprime");
  for (auto* s : {sweep_cmd, growth_cmd}) s->add_option("--plot", f.plot, "prefix for .dat and .gp files");
  growth_cmd->add_option("--which", f.growth_target, "hprime, hsecond, gprime, gsecond, f");
  growth_cmd->add_option("--first", f.first);
  growth_cmd->add_option("--last", f.last);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    c.command = app.get_subcommands().front()->get_name();
    over(c.out, f.out);
    over(c.plot, f.plot);
    over(c.radial, f.radial);
    over(c.angular, f.angular);
    over(c.tol, f.tol);
    over(c.seed, f.seed);
    over(c.threads, f.threads);
    if (f.map) c.map = parse_map_text(*f.map);
    over(c.scale, f.scale);
    over(c.constant, f.constant);
    over(c.check, f.check);
    over(c.K, f.K);
    over(c.Kprime, f.Kprime);
    over(c.verify_tol, f.verify_tol);
    over(c.target, f.target);
    over(c.alpha_K, f.alpha_K);
    over(c.levels, f.levels);
    over(c.growth_target, f.growth_target);
    over(c.first, f.first);
    over(c.last, f.last);
    if (f.grid) {
      try {
        c.grid = json::parse(*f.grid);
      } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidParameter, std::string("--grid: ") + e.what());
      }
    }
    set_thread_count(c.threads);

    if (c.command == "norm") return cmd_norm(c);
    if (c.command == "constants") return cmd_constants(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "sweep") return cmd_sweep(c);
    return cmd_growth(c);
  } catch (const Error& e) {
    std::cerr << "hqr: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "hqr: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"hqr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace hqr::cli
