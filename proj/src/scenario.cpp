#include "conic/scenario.hpp"

#include "conic/excess.hpp"
#include "conic/gerstewitz.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace conic {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) parse_fail(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double parse_num(const json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where + ": expected a number");
  return j.get<double>();
}

Vec parse_vec(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_num(j[i], where);
  return v;
}

PointList parse_points(const json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array of vectors");
  PointList out;
  for (const auto& p : j) {
    Vec v = parse_vec(p, where);
    if (v.size() != dim) parse_fail(where + ": vector of dim " + std::to_string(v.size()) + ", expected " + std::to_string(dim));
    out.push_back(std::move(v));
  }
  return out;
}

Mat parse_mat(const json& j, const std::string& where) {
  if (j.is_number()) return Mat::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) parse_fail(where + ": expected a matrix");
  if (j.front().is_number()) {
    const Vec row = parse_vec(j, where);
    return row.transpose();
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Vec first = parse_vec(j.front(), where);
  Mat m(rows, first.size());
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vec r = parse_vec(j[static_cast<std::size_t>(i)], where);
    if (r.size() != first.size()) parse_fail(where + ": ragged matrix");
    m.row(i) = r.transpose();
  }
  return m;
}

Poly parse_poly(const json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": polynomial must be an array of {c, p} terms");
  std::vector<Poly::Term> terms;
  for (const auto& t : j) {
    const double c = parse_num(need(t, "c", where), where);
    const json& pj = need(t, "p", where);
    if (!pj.is_array() || static_cast<Eigen::Index>(pj.size()) != dim) parse_fail(where + ": exponent vector must have domain_dim entries");
    Eigen::VectorXi p(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const json& e = pj[static_cast<std::size_t>(i)];
      if (!e.is_number_integer() || e.get<int>() < 0) parse_fail(where + ": exponents must be nonnegative integers");
      p[i] = e.get<int>();
    }
    terms.push_back({c, p});
  }
  return Poly(dim, terms);
}

json poly_json(const Poly& p) {
  json out = json::array();
  for (const auto& t : p.terms()) {
    json pj = json::array();
    for (Eigen::Index i = 0; i < t.p.size(); ++i) pj.push_back(t.p[i]);
    out.push_back({{"c", t.c}, {"p", pj}});
  }
  return out;
}

json points_json(const PointList& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(vec_json(p));
  return out;
}

UnionSet parse_set(const json& j, Eigen::Index dim, NormId norm, const std::string& where) {
  const json& comps = need(j, "components", where);
  if (!comps.is_array() || comps.empty()) parse_fail(where + ": components must be a nonempty array");
  std::vector<GenSet> out;
  for (const auto& c : comps) {
    PointList pts = parse_points(need(c, "points", where), dim, where);
    if (pts.empty()) parse_fail(where + ": component needs at least one point");
    PointList rays = c.contains("rays") ? parse_points(c.at("rays"), dim, where) : PointList{};
    const double r = c.contains("radius") ? parse_num(c.at("radius"), where) : 0.0;
    if (r < 0) parse_fail(where + ": negative radius");
    const bool open = c.value("open", false);
    out.emplace_back(std::move(pts), std::move(rays), r, open, norm);
  }
  return UnionSet(std::move(out));
}

BoxMap parse_map(const json& j, Eigen::Index dim, const std::string& where, const Tolerance& tol) {
  const auto m = static_cast<Eigen::Index>(parse_num(need(j, "domain_dim", where), where));
  const auto n = static_cast<Eigen::Index>(parse_num(need(j, "range_dim", where), where));
  if (n != dim) parse_fail(where + ": range_dim must equal the scenario dim");
  const json& lo = need(j, "lower", where);
  const json& hi = need(j, "upper", where);
  if (!lo.is_array() || !hi.is_array() || static_cast<Eigen::Index>(lo.size()) != n ||
      static_cast<Eigen::Index>(hi.size()) != n) {
    parse_fail(where + ": lower and upper need range_dim polynomials");
  }
  std::vector<Poly> fl, fu;
  for (Eigen::Index i = 0; i < n; ++i) {
    fl.push_back(parse_poly(lo[static_cast<std::size_t>(i)], m, where));
    fu.push_back(parse_poly(hi[static_cast<std::size_t>(i)], m, where));
  }
  Vec blo = Vec::Constant(m, -10.0), bhi = Vec::Constant(m, 10.0);
  if (j.contains("box")) {
    blo = parse_vec(need(j.at("box"), "lo", where), where);
    bhi = parse_vec(need(j.at("box"), "hi", where), where);
    if (blo.size() != m || bhi.size() != m) parse_fail(where + ": box dims must equal domain_dim");
  }
  return BoxMap(std::move(fl), std::move(fu), std::move(blo), std::move(bhi), tol);
}

std::string arg_name(const json& args, const char* key, const std::string& fallback = "") {
  if (args.contains(key)) {
    if (!args.at(key).is_string()) parse_fail(std::string("argument '") + key + "' must be a name");
    return args.at(key).get<std::string>();
  }
  if (fallback.empty()) parse_fail(std::string("missing argument '") + key + "'");
  return fallback;
}

const json& arg(const json& args, const char* key, const json& fallback = json()) {
  if (args.contains(key)) return args.at(key);
  if (fallback.is_null()) parse_fail(std::string("missing argument '") + key + "'");
  return fallback;
}

// A name, or a list of names meaning their Minkowski sum.
UnionSet set_expr(const Scenario& s, const json& j) {
  if (j.is_string()) return s.set(j.get<std::string>());
  if (!j.is_array() || j.empty()) parse_fail("set argument must be a name or a list of names");
  UnionSet out = set_expr(s, j.front());
  for (std::size_t i = 1; i < j.size(); ++i) out = minkowski_sum(out, set_expr(s, j[i]));
  return out;
}

std::optional<PolyhedralCone> opt_cone(const Scenario& s, const json& args) {
  if (!args.contains("cone")) return std::nullopt;
  return s.cone(arg_name(args, "cone"));
}

const PolyhedralCone& cone_arg(const Scenario& s, const json& args) {
  if (args.contains("cone")) return s.cone(arg_name(args, "cone"));
  if (s.cones.size() == 1) return s.cones.begin()->second.cone;
  if (s.cones.count("K")) return s.cone("K");
  parse_fail("missing argument 'cone'");
}

// Fields checked against "expect".
struct Outcome {
  std::optional<bool> holds;
  std::optional<double> value;
  std::optional<bool> consistent;
  std::string verdict;
};

bool expectation_met(const json& expect, const Outcome& o) {
  bool ok = true;
  if (expect.contains("holds")) ok = ok && o.holds && *o.holds == expect.at("holds").get<bool>();
  if (expect.contains("consistent")) ok = ok && o.consistent && *o.consistent == expect.at("consistent").get<bool>();
  if (expect.contains("verdict")) ok = ok && o.verdict == expect.at("verdict").get<std::string>();
  if (expect.contains("value")) {
    const double tol = expect.value("tol", 1e-6);
    ok = ok && o.value && std::abs(*o.value - expect.at("value").get<double>()) <= tol;
  }
  return ok;
}

json margins_of(const Verdict& v) {
  json h = json::object();
  for (const auto& hc : v.hypotheses) h[hc.name] = num_json(hc.margin);
  return {{"hypotheses", h}, {"conclusion", num_json(v.conclusion.margin)}};
}

// Theorem checks may be inconsistent; property checks just pass or fail.
void fill_verdict(json& rec, Outcome& o, const Verdict& v, bool theorem) {
  o.holds = v.conclusion.holds;
  o.consistent = v.consistent;
  o.value = v.conclusion.margin;
  if (theorem) {
    o.verdict = v.consistent ? "consistent" : "inconsistent";
  } else {
    o.verdict = v.hypotheses_hold() ? (v.conclusion.holds ? "pass" : "fail") : "hypotheses_fail";
  }
  rec["verdict"] = o.verdict;
  rec["margins"] = margins_of(v);
  rec["witness"] = vec_json(v.conclusion.witness);
  rec["detail"] = verdict_json(v);
}

void fill_subdiff(json& rec, Outcome& o, const SubdiffReport& r) {
  o.verdict = to_string(r.verdict);
  o.holds = r.verdict == SubdiffVerdict::pass;
  o.value = r.q.empty() ? 0.0 : r.q.back();
  json q = json::array(), qu = json::array(), rad = json::array();
  for (double x : r.q) q.push_back(num_json(x));
  for (double x : r.q_upper) qu.push_back(num_json(x));
  for (double x : r.radii) rad.push_back(num_json(x));
  rec["verdict"] = o.verdict;
  rec["margins"] = {{"radii", rad}, {"q", q}, {"q_upper", qu}};
  rec["witness"] = vec_json(r.witness);
  rec["detail"] = {{"direction", to_string(r.direction)}, {"samples", r.samples}, {"eps_accept", r.eps_accept},
                   {"eps_reject", r.eps_reject}, {"note", r.note}};
}

void fill_value(json& rec, Outcome& o, double value, const Vec& witness) {
  o.value = value;
  o.verdict = "value";
  rec["verdict"] = "value";
  rec["margins"] = {{"value", num_json(value)}};
  rec["witness"] = vec_json(witness);
}

SubdiffOptions subdiff_opts(const json& args, std::uint64_t seed) {
  SubdiffOptions so;
  so.seed = seed;
  so.directions = args.value("directions", so.directions);
  so.levels = args.value("levels", so.levels);
  so.delta0 = args.value("delta0", so.delta0);
  return so;
}

}  // namespace

const PolyhedralCone& Scenario::cone(const std::string& name) const {
  auto it = cones.find(name);
  if (it == cones.end()) throw Error(ErrorCode::MissingObject, "unknown cone '" + name + "'");
  return it->second.cone;
}

const UnionSet& Scenario::set(const std::string& name) const {
  auto it = sets.find(name);
  if (it == sets.end()) throw Error(ErrorCode::MissingObject, "unknown set '" + name + "'");
  return it->second;
}

const BoxMap& Scenario::map(const std::string& name) const {
  auto it = maps.find(name);
  if (it == maps.end()) throw Error(ErrorCode::MissingObject, "unknown map '" + name + "'");
  return it->second;
}

Vec Scenario::vec(const json& a) const {
  if (a.is_string()) {
    const auto name = a.get<std::string>();
    if (!params.contains(name)) throw Error(ErrorCode::MissingObject, "unknown param '" + name + "'");
    return parse_vec(params.at(name), "param " + name);
  }
  if (a.is_number()) return Vec::Constant(1, a.get<double>());
  return parse_vec(a, "vector argument");
}

Mat Scenario::mat(const json& a) const {
  if (a.is_string()) {
    const auto name = a.get<std::string>();
    if (!params.contains(name)) throw Error(ErrorCode::MissingObject, "unknown param '" + name + "'");
    return parse_mat(params.at(name), "param " + name);
  }
  return parse_mat(a, "matrix argument");
}

double Scenario::scalar(const json& a) const {
  if (a.is_string()) {
    const auto name = a.get<std::string>();
    if (!params.contains(name)) throw Error(ErrorCode::MissingObject, "unknown param '" + name + "'");
    return parse_num(params.at(name), "param " + name);
  }
  return parse_num(a, "scalar argument");
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) parse_fail("scenario must be a JSON object");
  Scenario s;
  s.dim = static_cast<Eigen::Index>(parse_num(need(doc, "dim", "scenario"), "dim"));
  if (s.dim < 1) parse_fail("dim must be >= 1");
  if (doc.contains("norm")) {
    try {
      s.norm = parse_norm(doc.at("norm").get<std::string>());
    } catch (const Error&) {
      parse_fail("norm must be one of l2, l1, linf");
    }
  }
  const json cones_doc = doc.value("cones", json::object());
  for (const auto& [name, c] : cones_doc.items()) {
    ConeSpec spec;
    const std::string where = "cone " + name;
    if (c.contains("generators")) {
      spec.kind = "generators";
      spec.vectors = parse_points(c.at("generators"), s.dim, where);
      spec.cone = PolyhedralCone::from_generators(s.dim, spec.vectors);
    } else if (c.contains("halfspaces")) {
      spec.kind = "halfspaces";
      spec.vectors = parse_points(c.at("halfspaces"), s.dim, where);
      spec.cone = PolyhedralCone::from_halfspaces(s.dim, spec.vectors);
    } else {
      parse_fail(where + ": needs generators or halfspaces");
    }
    s.cones.emplace(name, std::move(spec));
  }
  const json sets_doc = doc.value("sets", json::object());
  for (const auto& [name, j] : sets_doc.items()) {
    s.sets.emplace(name, parse_set(j, s.dim, s.norm, "set " + name));
  }
  const json maps_doc = doc.value("maps", json::object());
  for (const auto& [name, j] : maps_doc.items()) {
    s.maps.emplace(name, parse_map(j, s.dim, "map " + name, default_tolerance()));
  }
  s.params = doc.value("params", json::object());
  if (!s.params.is_object()) parse_fail("params must be an object");
  const json checks = doc.value("checks", json::array());
  if (!checks.is_array()) parse_fail("checks must be an array");
  for (const auto& c : checks) {
    CheckSpec cs;
    const json& op = need(c, "op", "check");
    if (!op.is_string()) parse_fail("check op must be a string");
    cs.op = op.get<std::string>();
    cs.args = c.value("args", json::object());
    if (!cs.args.is_object()) parse_fail("check args must be an object");
    if (c.contains("expect")) cs.expect = c.at("expect");
    s.checks.push_back(std::move(cs));
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open scenario file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& s) {
  json doc;
  doc["dim"] = s.dim;
  doc["norm"] = std::string(to_string(s.norm));
  json cones = json::object();
  for (const auto& [name, c] : s.cones) cones[name] = {{c.kind, points_json(c.vectors)}};
  doc["cones"] = cones;
  json sets = json::object();
  for (const auto& [name, u] : s.sets) {
    json comps = json::array();
    for (const auto& g : u.components()) {
      json c = {{"points", points_json(g.points())}};
      if (!g.rays().empty()) c["rays"] = points_json(g.rays());
      if (g.radius() != 0.0) c["radius"] = g.radius();
      if (g.open_ball()) c["open"] = true;
      comps.push_back(c);
    }
    sets[name] = {{"components", comps}};
  }
  doc["sets"] = sets;
  json maps = json::object();
  for (const auto& [name, f] : s.maps) {
    json lo = json::array(), hi = json::array();
    for (const auto& p : f.lower()) lo.push_back(poly_json(p));
    for (const auto& p : f.upper()) hi.push_back(poly_json(p));
    maps[name] = {{"domain_dim", f.domain_dim()}, {"range_dim", f.range_dim()}, {"lower", lo}, {"upper", hi},
                  {"box", {{"lo", vec_json(f.box_lo())}, {"hi", vec_json(f.box_hi())}}}};
  }
  doc["maps"] = maps;
  doc["params"] = s.params;
  json checks = json::array();
  for (const auto& c : s.checks) {
    json cj = {{"op", c.op}, {"args", c.args}};
    if (c.expect) cj["expect"] = *c.expect;
    checks.push_back(cj);
  }
  doc["checks"] = checks;
  return doc;
}

Tolerance tolerance_for(const RunOptions& opts) {
  Tolerance tol = default_tolerance();
  if (opts.tol) tol.feas_tol = *opts.tol;
  return tol;
}

CheckResult run_check(const Scenario& s, const CheckSpec& check, const RunOptions& opts) {
  const json& a = check.args;
  const Tolerance tol = tolerance_for(opts);
  const std::uint64_t seed = opts.seed ? *opts.seed : a.value("seed", std::uint64_t{1});
  const int samples = opts.samples ? *opts.samples : a.value("samples", 64);
  json rec;
  rec["op"] = check.op;
  rec["args"] = a;
  Outcome o;
  bool theorem = false;
  const std::string& op = check.op;

  if (op == "includes") {
    const UnionSet src = set_expr(s, arg(a, "a"));
    UnionSet target = set_expr(s, arg(a, "b"));
    const auto k = opt_cone(s, a);
    if (a.value("hull", false)) {
      target = UnionSet(convexify(target, k ? &*k : nullptr, true).set);
    } else if (k) {
      target = target.with_cone(*k);
    }
    InclusionOptions io;
    io.strict = a.value("strict", target.any_open());
    const Inclusion inc = includes(src, target, io, tol);
    o.holds = inc.holds;
    o.value = inc.margin;
    o.verdict = inc.holds ? "holds" : "fails";
    rec["verdict"] = o.verdict;
    rec["margins"] = {{"margin", num_json(inc.margin)}, {"exact", inc.exact}};
    rec["witness"] = vec_json(inc.witness);
  } else if (op == "distance") {
    UnionSet target = set_expr(s, arg(a, "set"));
    if (const auto k = opt_cone(s, a)) target = target.with_cone(*k);
    const Vec x = s.vec(arg(a, "point"));
    fill_value(rec, o, distance_to_union(target, x, tol), x);
  } else if (op == "excess" || op == "hausdorff") {
    UnionSet from = set_expr(s, arg(a, "from"));
    UnionSet to = set_expr(s, arg(a, "to"));
    if (const auto k = opt_cone(s, a)) {
      to = to.with_cone(*k);
      if (op == "hausdorff") from = from.with_cone(*k);
    }
    ExcessOptions eo;
    eo.seed = seed;
    const ExcessReport r = op == "excess" ? excess(from, to, eo, tol) : hausdorff(from, to, eo, tol);
    fill_value(rec, o, r.value, r.attained_at);
    rec["margins"]["upper"] = num_json(r.upper);
    rec["margins"]["method"] = to_string(r.method);
  } else if (op == "phi") {
    const Gerstewitz g(cone_arg(s, a), s.vec(arg(a, "e")), tol);
    const Vec x = s.vec(arg(a, "x"));
    fill_value(rec, o, g(x), x);
  } else if (op == "law") {
    const LawId law = parse_law(arg(a, "law").get<std::string>());
    LawInstance inst;
    const json names = a.value("sets", json::object());
    for (const char* n : {"A", "B", "C", "D"}) {
      if (names.contains(n)) {
        inst.sets[n] = set_expr(s, names.at(n));
      } else if (s.sets.count(n)) {
        inst.sets[n] = s.set(n);
      }
    }
    if (a.contains("cone")) {
      inst.cone = s.cone(arg_name(a, "cone"));
    } else if (s.cones.count("K")) {
      inst.cone = s.cone("K");
    } else if (s.cones.size() == 1) {
      inst.cone = s.cones.begin()->second.cone;
    }
    if (a.contains("e")) {
      inst.e = s.vec(a.at("e"));
    } else if (s.params.contains("e")) {
      inst.e = s.vec(json("e"));
    }
    VerifyOptions vo;
    vo.seed = seed;
    vo.samples = samples;
    for (const auto& d : a.value("drop", json::array())) vo.drop.insert(d.get<std::string>());
    // With hypotheses dropped a failure refutes the weakened law, not the run.
    theorem = vo.drop.empty();
    fill_verdict(rec, o, verify_law(law, inst, vo, tol), true);
    if (!theorem && !o.consistent.value_or(true)) rec["verdict"] = o.verdict = "counterexample";
  } else if (op == "excess_invariance") {
    theorem = true;
    const std::string variant = a.value("variant", std::string("closed_ball"));
    if (variant != "closed_ball" && variant != "open_ball") parse_fail("variant must be open_ball or closed_ball");
    ExcessOptions eo;
    eo.seed = seed;
    const Verdict v = excess_invariance_check(
        set_expr(s, arg(a, "A", "A")), set_expr(s, arg(a, "B", "B")), set_expr(s, arg(a, "C", "C")),
        cone_arg(s, a), variant == "open_ball" ? InvarianceVariant::open_ball : InvarianceVariant::closed_ball, eo, tol);
    fill_verdict(rec, o, v, true);
  } else if (op == "subdiff") {
    const BoxMap& f = s.map(arg_name(a, "map", "F"));
    const auto dir = a.value("upper", false) ? SubdiffDirection::upper : SubdiffDirection::lower;
    const SubdiffReport r =
        subdiff_test(f, s.vec(arg(a, "at", "zbar")), LinMap{s.mat(arg(a, "T", "T"))}, cone_arg(s, a), dir,
                     subdiff_opts(a, seed), tol);
    fill_subdiff(rec, o, r);
  } else if (op == "sum_invariance") {
    theorem = true;
    const auto dir = a.value("upper", false) ? SubdiffDirection::upper : SubdiffDirection::lower;
    const Verdict v = subdiff_sum_invariance_test(s.map(arg_name(a, "map", "F")), set_expr(s, arg(a, "A", "A")),
                                                  s.vec(arg(a, "at", "zbar")), LinMap{s.mat(arg(a, "T", "T"))},
                                                  cone_arg(s, a), dir, subdiff_opts(a, seed), tol);
    fill_verdict(rec, o, v, true);
  } else if (op == "k_lipschitz" || op == "subgradient_bound") {
    SampleOptions so{samples, seed};
    const BoxMap& f = s.map(arg_name(a, "map", "F"));
    const Vec zbar = s.vec(arg(a, "at", "zbar"));
    const double ell = s.scalar(arg(a, "ell", "L"));
    const Vec e = s.vec(arg(a, "e", "e"));
    const double radius = s.scalar(arg(a, "radius", 1.0));
    if (op == "k_lipschitz") {
      fill_verdict(rec, o, k_lipschitz_check(f, zbar, ell, e, radius, cone_arg(s, a), so, tol), false);
    } else {
      theorem = true;
      const Verdict v =
          subgradient_bound_check(f, zbar, LinMap{s.mat(arg(a, "T", "T"))}, cone_arg(s, a), ell, e, radius, so, tol);
      fill_verdict(rec, o, v, true);
    }
  } else if (op == "sharp" || op == "necessary") {
    SampleOptions so{samples, seed};
    SharpInstance inst{s.map(arg_name(a, "map", "F")), GenSet(), s.vec(arg(a, "zbar", "zbar")),
                       s.scalar(arg(a, "mu", "mu")), s.vec(arg(a, "e", "e")), cone_arg(s, a), std::nullopt};
    const UnionSet& m = s.set(arg_name(a, "M", "M"));
    if (m.size() != 1) parse_fail("constraint set M must have one component");
    inst.m = m.components().front();
    if (a.contains("radius")) inst.radius = s.scalar(a.at("radius"));
    if (op == "sharp") {
      fill_verdict(rec, o, sharp_weak_min_check(inst, so, tol), false);
    } else {
      theorem = true;
      fill_verdict(rec, o, necessary_condition_check(inst, LinMap{s.mat(arg(a, "T", "T"))}, so, subdiff_opts(a, seed), tol),
                   true);
    }
  } else if (op == "stability") {
    theorem = true;
    SampleOptions so{samples, seed};
    StabilityInstance inst;
    inst.f = s.map(arg_name(a, "F", "F"));
    inst.h = s.map(arg_name(a, "H", "H"));
    const UnionSet& m = s.set(arg_name(a, "M", "M"));
    if (m.size() != 1) parse_fail("constraint set M must have one component");
    inst.m = m.components().front();
    inst.zbar = s.vec(arg(a, "zbar", "zbar"));
    inst.z_eps = s.vec(arg(a, "z_eps", "z_eps"));
    inst.mu = s.scalar(arg(a, "mu", "mu"));
    inst.ell = s.scalar(arg(a, "L", "L"));
    inst.eps = s.scalar(arg(a, "eps", "eps"));
    inst.e = s.vec(arg(a, "e", "e"));
    inst.k = cone_arg(s, a);
    fill_verdict(rec, o, stability_check(inst, so, tol), true);
  } else {
    parse_fail("unknown op '" + op + "'");
  }

  rec["seed"] = seed;
  CheckResult out;
  out.ok = !theorem || o.consistent.value_or(true);
  if (check.expect) {
    const bool met = expectation_met(*check.expect, o);
    rec["expect"] = *check.expect;
    rec["expect_met"] = met;
    out.ok = out.ok && met;
  }
  out.record = std::move(rec);
  return out;
}

ScenarioReport run_scenario(const Scenario& s, const RunOptions& opts) {
  ScenarioReport rep;
  json checks = json::array();
  for (const auto& c : s.checks) {
    CheckResult r = run_check(s, c, opts);
    rep.ok = rep.ok && r.ok;
    checks.push_back(std::move(r.record));
  }
  rep.doc = {{"checks", checks}, {"version", kReportVersion}};
  return rep;
}

namespace {

std::string fmt(const json& j) {
  if (j.is_number_float()) {
    std::ostringstream os;
    os.precision(10);
    os << j.get<double>();
    return os.str();
  }
  return j.dump();
}

}  // namespace

std::string human_line(const json& rec) {
  std::ostringstream os;
  os << rec.value("op", std::string("?")) << ": " << rec.value("verdict", std::string("?"));
  const json& m = rec.contains("margins") ? rec.at("margins") : json::object();
  if (m.contains("value")) os << " value=" << fmt(m.at("value"));
  if (m.contains("margin")) os << " margin=" << fmt(m.at("margin"));
  if (m.contains("conclusion")) os << " conclusion_margin=" << fmt(m.at("conclusion"));
  if (m.contains("q") && !m.at("q").empty()) os << " q_min_radius=" << fmt(m.at("q").back());
  if (rec.contains("detail") && rec.at("detail").contains("hypotheses")) {
    for (const auto& h : rec.at("detail").at("hypotheses")) {
      os << " " << h.at("name").get<std::string>() << "=" << (h.at("holds").get<bool>() ? "held" : "failed");
      if (h.value("dropped", false)) os << "(dropped)";
    }
  }
  if (rec.contains("witness") && !rec.at("witness").empty()) os << " witness=" << rec.at("witness").dump();
  if (rec.contains("expect_met")) os << (rec.at("expect_met").get<bool>() ? " [expected]" : " [UNEXPECTED]");
  return os.str();
}

json num_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x == 0.0 ? 0.0 : x;
}

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num_json(v[i]));
  return out;
}

json verdict_json(const Verdict& v) {
  json hyps = json::array();
  for (const auto& h : v.hypotheses) {
    json hj = {{"name", h.name}, {"holds", h.holds}, {"margin", num_json(h.margin)}};
    if (h.dropped) hj["dropped"] = true;
    hyps.push_back(hj);
  }
  return {{"law", v.law},
          {"consistent", v.consistent},
          {"hypotheses_hold", v.hypotheses_hold()},
          {"hypotheses", hyps},
          {"conclusion",
           {{"holds", v.conclusion.holds}, {"margin", num_json(v.conclusion.margin)}, {"witness", vec_json(v.conclusion.witness)}}},
          {"notes", v.notes},
          {"rng_seed", v.rng_seed}};
}

}  // namespace conic
