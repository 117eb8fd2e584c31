#include "gtensor/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace gtensor {

void validate(const RunConfig& c) {
  if (c.tensor_nonzero_limit == 0 || c.treewidth_vertex_limit == 0 || c.isomorphism_vertex_limit == 0)
    throw std::invalid_argument("config: limits must be positive");
  if (c.treewidth_vertex_limit > 30) throw std::invalid_argument("config: treewidth_vertex_limit is at most 30");
  if (c.sweep_grid < 2) throw std::invalid_argument("config: sweep_grid must be at least 2");
  if (!(c.ipf_tolerance > 0) || !(c.optimize_tolerance > 0))
    throw std::invalid_argument("config: tolerances must be positive");
  if (c.threads == 0) throw std::invalid_argument("config: threads must be positive");
  if (c.search.vertex_limit == 0 || c.search.mixed_edge_limit == 0)
    throw std::invalid_argument("config: search limits must be positive");
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (k == "omega_table") c.omega_table_path = v.get<std::string>();
    else if (k == "tensor_nonzero_limit") c.tensor_nonzero_limit = v.get<std::uint64_t>();
    else if (k == "treewidth_vertex_limit") c.treewidth_vertex_limit = v.get<std::size_t>();
    else if (k == "isomorphism_vertex_limit") c.isomorphism_vertex_limit = v.get<std::size_t>();
    else if (k == "sweep_grid") c.sweep_grid = v.get<std::size_t>();
    else if (k == "ipf_tolerance") c.ipf_tolerance = v.get<double>();
    else if (k == "optimize_tolerance") c.optimize_tolerance = v.get<double>();
    else if (k == "output_dir") c.output_dir = v.get<std::string>();
    else if (k == "threads") c.threads = v.get<unsigned>();
    else if (k == "format") {
      auto f = v.get<std::string>();
      if (f == "text") c.format = OutputFormat::Text;
      else if (f == "json") c.format = OutputFormat::Json;
      else throw std::invalid_argument("config: format must be text or json");
    } else if (k == "search") {
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "vertex_limit") c.search.vertex_limit = sv.get<std::size_t>();
        else if (sk == "leftover_edges") c.search.leftover_edges = sv.get<std::size_t>();
        else if (sk == "treewidth_edges") c.search.treewidth_edges = sv.get<std::size_t>();
        else if (sk == "mixed_edge_limit") c.search.mixed_edge_limit = sv.get<std::size_t>();
        else throw std::invalid_argument("config: unknown search key '" + sk + "'");
      }
    } else {
      throw std::invalid_argument("config: unknown key '" + k + "'");
    }
  }
  validate(c);
  return c;
}

Json config_to_json(const RunConfig& c) {
  return Json{{"omega_table", c.omega_table_path},
              {"tensor_nonzero_limit", c.tensor_nonzero_limit},
              {"treewidth_vertex_limit", c.treewidth_vertex_limit},
              {"isomorphism_vertex_limit", c.isomorphism_vertex_limit},
              {"sweep_grid", c.sweep_grid},
              {"ipf_tolerance", c.ipf_tolerance},
              {"optimize_tolerance", c.optimize_tolerance},
              {"output_dir", c.output_dir},
              {"format", c.format == OutputFormat::Json ? "json" : "text"},
              {"threads", c.threads},
              {"search",
               {{"vertex_limit", c.search.vertex_limit},
                {"leftover_edges", c.search.leftover_edges},
                {"treewidth_edges", c.search.treewidth_edges},
                {"mixed_edge_limit", c.search.mixed_edge_limit}}}};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  RunConfig c = config_from_json(j);
  if (!c.omega_table_path.empty() && std::filesystem::path(c.omega_table_path).is_relative())
    c.omega_table_path = (std::filesystem::path(path).parent_path() / c.omega_table_path).string();
  return c;
}

RunConfig resolve_config(const std::string& explicit_path) {
  if (!explicit_path.empty()) return load_config(explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return load_config(env);
  return RunConfig{};
}

OmegaTable load_omega_table(const RunConfig& c) {
  return c.omega_table_path.empty() ? OmegaTable::defaults() : read_omega_table_file(c.omega_table_path);
}

Json rational_json(const Rational& q) { return Json{{"exact", to_string(q)}, {"decimal", to_decimal(q, 6)}}; }

Json derivation_json(const DerivationStep& s) {
  Json j{{"rule", s.rule}, {"detail", s.detail}};
  switch (s.op) {
    case DerivationStep::Op::Leaf: j["op"] = "leaf"; break;
    case DerivationStep::Op::Sum: j["op"] = "sum"; break;
    case DerivationStep::Op::Scale:
      j["op"] = "scale";
      j["factor"] = to_string(s.factor);
      break;
  }
  j["value"] = rational_json(s.value);
  if (!s.children.empty()) {
    j["children"] = Json::array();
    for (const auto& c : s.children) j["children"].push_back(derivation_json(c));
  }
  return j;
}

Json omega_table_json(const OmegaTable& t) {
  Json om = Json::object();
  for (const auto& [k, v] : t.omega) om[to_string(k)] = to_decimal(v, 6);
  return Json{{"omega", om}, {"tau4", to_decimal(t.tau4, 6)}};
}

Json DerivationReport::payload() const {
  return Json{{"schema", kReportSchema}, {"command", command}, {"ok", ok},
              {"inputs", inputs},        {"results", results}, {"omega_table", omega_table}};
}

Json DerivationReport::to_json() const {
  Json j = payload();
  j["seconds"] = seconds;
  return j;
}

DerivationReport DerivationReport::from_json(const Json& j) {
  if (j.value("schema", "") != kReportSchema) throw std::invalid_argument("report: unknown schema");
  DerivationReport r;
  r.command = j.at("command").get<std::string>();
  r.ok = j.at("ok").get<bool>();
  r.inputs = j.at("inputs");
  r.results = j.at("results");
  r.omega_table = j.at("omega_table");
  r.seconds = j.value("seconds", 0.0);
  return r;
}

namespace {

void text_value(std::ostream& out, const Json& v, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (v.is_object()) {
    if (v.contains("exact") && v.contains("decimal") && v.size() == 2) {
      out << v["decimal"].get<std::string>() << " (" << v["exact"].get<std::string>() << ")\n";
      return;
    }
    out << "\n";
    for (const auto& [k, x] : v.items()) {
      out << pad << k << ": ";
      text_value(out, x, indent + 1);
    }
  } else if (v.is_array()) {
    if (std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); })) {
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
      out << "\n";
      return;
    }
    out << "\n";
    for (const auto& x : v) {
      out << pad << "- ";
      text_value(out, x, indent + 1);
    }
  } else if (v.is_string()) {
    out << v.get<std::string>() << "\n";
  } else {
    out << v.dump() << "\n";
  }
}

}  // namespace

void write_report(std::ostream& out, const DerivationReport& r, OutputFormat format) {
  if (format == OutputFormat::Json) {
    out << r.to_json().dump(2) << "\n";
    return;
  }
  out << r.command << (r.ok ? "" : " (FAILED)") << "\n";
  if (!r.inputs.empty()) {
    out << "inputs:";
    text_value(out, r.inputs, 1);
  }
  out << "results:";
  text_value(out, r.results, 1);
}

void persist_report(const RunConfig& c, const DerivationReport& r) {
  if (c.output_dir.empty()) return;
  std::filesystem::create_directories(c.output_dir);
  std::string name = r.command;
  for (char& ch : name)
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
  std::ofstream f(std::filesystem::path(c.output_dir) / (name + ".json"));
  if (!f) throw std::runtime_error("cannot write report to " + c.output_dir);
  f << r.to_json().dump(2) << "\n";
}

}  // namespace gtensor
