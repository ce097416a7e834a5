#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "hqr/verify.hpp"

namespace hqr::cli {

using json = nlohmann::ordered_json;

/// Everything a run depends on. Reports embed the resolved config, and
/// feeding it back through --config reproduces the run.
struct RunConfig {
  std::string command;

  int radial = 128;
  int angular = 256;
  int refinement_cap = 1;
  double tol = 1e-8;

  /// Empty means the library default radii.
  std::vector<double> radii;
  int angles = 16;
  bool refine = true;
  int max_evaluations = 400;
  double min_step = 1e-3;

  json map;
  std::string scale;
  std::string constant;
  std::string check = "conjugate";
  std::optional<double> K;
  std::optional<double> Kprime;
  double verify_tol = 1e-6;

  std::string target = "f";
  std::optional<double> alpha_K;
  int levels = 12;
  int first_reported = 3;
  double stabilization = 1e-3;

  std::string growth_target = "hprime";
  int first = 3;
  int last = 12;
  int growth_angular = 256;

  json grid;

  std::string out;
  std::string plot;
  std::uint64_t seed = 7;
  unsigned threads = 0;
};

json to_json(const RunConfig& c);
RunConfig config_from_json(const json& j);
/// Reads a config object, or the "config" field of the first report line.
RunConfig load_config(const std::string& path);

struct BuiltMap {
  HarmonicMap map;
  /// Compact spec text, e.g. "affine:k=0.5,sign=-1".
  std::string name;
  /// Smallest K the construction guarantees, or the spec's override.
  double K = 1.0;
  std::optional<double> Kprime;
};

/// "name:key=value,..." to a spec object. Space separated numbers become
/// coefficient lists.
json parse_map_text(const std::string& text);
std::string map_text(const json& spec);
/// z, koebe, koebe', z/(1-z), a number, a coefficient list or {"poly": [...]}.
AnalyticFn build_analytic(const json& spec);
BuiltMap build_map(const json& spec);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitQuadrature = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(ErrorKind kind);

json report_record(const VerificationReport& r, const std::string& map_name);
json norm_record(const NormResult& r, const std::string& map_name);

/// Runs one verification job described by the config's map, scale, check,
/// K and K'.
VerificationReport run_check(const RunConfig& c, const BuiltMap& m, const SpaceParams& scale,
                             const MembershipSamples* cached = nullptr);

int cmd_norm(const RunConfig& c);
int cmd_constants(const RunConfig& c);
int cmd_verify(const RunConfig& c);
int cmd_sweep(const RunConfig& c);
int cmd_growth(const RunConfig& c);

/// Parses arguments, resolves config (defaults < file < environment < flags)
/// and dispatches. Never throws.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// Writes to a sibling temporary file and renames it over path. Empty path
/// means stdout.
void write_atomically(const std::string& path, const std::string& content);

std::string csv_field(const std::string& s);

}  // namespace hqr::cli
