#pragma once

#include "gtensor/exponents.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace gtensor {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigEnvVar = "GTENSOR_CONFIG";
inline constexpr const char* kReportSchema = "gtensor-report/1";

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string omega_table_path;  // empty: built-in table
  std::uint64_t tensor_nonzero_limit = std::uint64_t{1} << 24;
  std::size_t treewidth_vertex_limit = 22;
  std::size_t isomorphism_vertex_limit = 10;
  std::size_t sweep_grid = 1000;
  double ipf_tolerance = 1e-12;
  double optimize_tolerance = 1e-10;
  std::string output_dir;
  OutputFormat format = OutputFormat::Text;
  unsigned threads = 1;
  SearchConfig search;
};

void validate(const RunConfig& c);
RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);
// Explicit path first, then the environment variable, then defaults.
RunConfig resolve_config(const std::string& explicit_path);

OmegaTable load_omega_table(const RunConfig& c);

Json rational_json(const Rational& q);
Json derivation_json(const DerivationStep& s);
Json omega_table_json(const OmegaTable& t);

struct DerivationReport {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json omega_table = Json::object();
  double seconds = 0;
  bool ok = true;

  Json to_json() const;
  static DerivationReport from_json(const Json& j);
  // Everything except timing.
  Json payload() const;
};

void write_report(std::ostream& out, const DerivationReport& r, OutputFormat format);
// Writes <dir>/<command>.json when dir is non-empty.
void persist_report(const RunConfig& c, const DerivationReport& r);

}  // namespace gtensor
