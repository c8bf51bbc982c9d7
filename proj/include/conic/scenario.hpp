#pragma once

#include "conic/cancellation.hpp"
#include "conic/setopt.hpp"

#include "json.hpp"

#include <optional>

namespace conic {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportVersion = "1.0";

struct ConeSpec {
  std::string kind;  // "generators" or "halfspaces"
  PointList vectors;
  PolyhedralCone cone;
};

struct CheckSpec {
  std::string op;
  json args = json::object();
  std::optional<json> expect;
};

struct Scenario {
  Eigen::Index dim = 0;
  NormId norm = NormId::l2;
  std::map<std::string, ConeSpec> cones;
  std::map<std::string, UnionSet> sets;
  std::map<std::string, BoxMap> maps;
  json params = json::object();  // scalars, vectors (arrays), matrices (arrays of rows)
  std::vector<CheckSpec> checks;

  const PolyhedralCone& cone(const std::string& name) const;
  const UnionSet& set(const std::string& name) const;
  const BoxMap& map(const std::string& name) const;
  /// Literal or the name of a param.
  Vec vec(const json& arg) const;
  Mat mat(const json& arg) const;
  double scalar(const json& arg) const;
};

/// Throws Error(ParseError) on schema violations, MissingObject on dangling names.
Scenario parse_scenario(const json& doc);
Scenario load_scenario(const std::string& path);
json to_json(const Scenario& s);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
};

Tolerance tolerance_for(const RunOptions& opts);

struct CheckResult {
  json record;      // {"op","args","verdict","margins","witness","seed", ...}
  bool ok = true;   // consistent and expectation met
};

CheckResult run_check(const Scenario& s, const CheckSpec& check, const RunOptions& opts = {});

struct ScenarioReport {
  json doc;  // {"checks": [...], "version"}
  bool ok = true;
};

ScenarioReport run_scenario(const Scenario& s, const RunOptions& opts = {});

/// One line per check record.
std::string human_line(const json& record);

json verdict_json(const Verdict& v);
json vec_json(const Vec& v);
/// Non-finite values become the strings "inf", "-inf", "nan".
json num_json(double x);

}  // namespace conic
