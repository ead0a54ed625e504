#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinmono/lattice.hpp"
#include "spinmono/rates.hpp"
#include "spinmono/verify.hpp"

namespace spinmono::cli {

enum ExitCode : int {
  kSuccess = 0,
  kViolation = 1,
  kInvalidInput = 2,
  kInconclusive = 3,
};

/// Invalid configuration; `field` names the offending key (dotted path).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ModelConfig {
  std::string name = "contact";
  ModelParams params;
  /// Present for custom tables (inline "rates" or a "csv" file).
  std::optional<int> radius;
  std::map<std::string, double> rates;
  std::optional<std::string> csv;
};

struct ExperimentConfig {
  ModelConfig model;
  InitialCondition init;
  double t = 1.0;
  Site z_min = 0;
  Site z_max = 4;
  int m = 3;
  std::uint64_t replicas = 1000;
  std::uint64_t seed = 1;
  double epsilon_trunc = 1e-3;
  Mode mode = Mode::coupled;

  // command-specific
  std::optional<Window> window;  // exact-mode window
  std::vector<Site> n_values{0};  // verify-remark2
  Backend backend = Backend::uniformized;
};

/// Parses the JSON config document. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Normalized echo of a config (used in the run manifest).
nlohmann::json to_json(const ExperimentConfig& config);

RateSpec to_rate_spec(const ModelConfig& model);

/// Rate table as a custom-model JSON object ("name", "radius", "rates").
nlohmann::json rate_table_json(const RateSpec& spec);

/// Rate table CSV: `model,pattern,rate`.
void write_rate_table_csv(std::ostream& out, const std::vector<RateSpec>& specs);
/// Reads back the rows of one model from a rate table CSV.
RateSpec read_rate_table_csv(std::istream& in, const std::string& model);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);
/// RFC 4180 quoting when needed.
std::string csv_field(const std::string& s);

void write_profile_csv(std::ostream& out, const OccupancyProfile& profile);
void write_verify_csv(std::ostream& out, const MonotonicityReport& report);
nlohmann::json report_json(const MonotonicityReport& report);

struct RunContext {
  std::filesystem::path out_dir = ".";
  unsigned workers = 0;
  std::ostream* log = nullptr;  // human-readable summary; may be null
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"models",  "check",          "simulate", "profile",
                                              "verify",  "verify-remark2", "self-check"};
  return names;
}

/// Runs one command and writes its artifacts plus manifest.json into
/// ctx.out_dir. Returns an ExitCode.
int run(const std::string& command, const ExperimentConfig& config, const RunContext& ctx);

}  // namespace spinmono::cli
