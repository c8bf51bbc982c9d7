#include "conic/scenario.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>

using namespace conic;

namespace {

// "1,2,3" or a JSON array
json parse_vector_flag(const std::string& s) {
  if (!s.empty() && s.front() == '[') return json::parse(s);
  json out = json::array();
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

// rows separated by ';', entries by ','; or a JSON array of rows
json parse_matrix_flag(const std::string& s) {
  if (!s.empty() && s.front() == '[') return json::parse(s);
  json out = json::array();
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) out.push_back(parse_vector_flag(row));
  return out;
}

int emit(const json& doc, bool as_json, bool ok) {
  if (as_json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& rec : doc.at("checks")) std::cout << human_line(rec) << "\n";
  }
  return ok ? 0 : 1;
}

int run_one(const Scenario& s, const CheckSpec& c, const RunOptions& ro, bool as_json) {
  const CheckResult r = run_check(s, c, ro);
  const json doc = {{"checks", json::array({r.record})}, {"version", kReportVersion}};
  return emit(doc, as_json, r.ok);
}

json instance_scenario(const LawInstance& inst) {
  Scenario s;
  s.dim = inst.sets.begin()->second.dim();
  s.norm = inst.sets.begin()->second.norm();
  s.sets = inst.sets;
  if (inst.cone) s.cones["K"] = ConeSpec{"generators", inst.cone->generators(), *inst.cone};
  if (inst.e) s.params["e"] = vec_json(*inst.e);
  return to_json(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conic: cancellation laws, excess and set optimization checks"};
  app.require_subcommand(1);

  std::string scenario_path, law, from, to, cone, map, at, tmat, e, x;
  std::vector<std::string> drop;
  std::uint64_t seed = 1;
  int samples = 64, trials = 10000, dim = 2;
  double tol = 0;
  bool as_json = false, upper = false;

  auto common = [&](CLI::App* sub, bool scenario_required = true) {
    auto* opt = sub->add_option("--scenario", scenario_path, "scenario JSON file");
    if (scenario_required) opt->required();
    sub->add_flag("--json", as_json, "emit one JSON document");
  };
  auto run_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "64-bit seed");
    sub->add_option("--samples", samples, "samples per sampled quantifier");
    sub->add_option("--tol", tol, "feasibility tolerance");
  };

  auto* run = app.add_subcommand("run", "run every check of a scenario");
  common(run);
  run_flags(run);

  auto* check = app.add_subcommand("check", "verify a cancellation law on the scenario sets A..D and cone K");
  check->add_option("--law", law, "law id")->required();
  common(check);
  run_flags(check);

  auto* exc = app.add_subcommand("excess", "e(from, to [+ K])");
  auto* hau = app.add_subcommand("hausdorff", "Hausdorff distance, both sides [+ K]");
  for (auto* sub : {exc, hau}) {
    common(sub);
    sub->add_option("--from", from)->required();
    sub->add_option("--to", to)->required();
    sub->add_option("--cone", cone);
  }

  auto* phi = app.add_subcommand("phi", "Gerstewitz functional of a point");
  common(phi);
  phi->add_option("--cone", cone)->required();
  phi->add_option("--e", e, "direction in int K, e.g. 1,1")->required();
  phi->add_option("--x", x, "point")->required();

  auto* sub = app.add_subcommand("subdiff", "numeric Frechet (or upper) subdifferential test");
  common(sub);
  sub->add_option("--map", map)->required();
  sub->add_option("--at", at)->required();
  sub->add_option("--T", tmat, "matrix, rows separated by ';'")->required();
  sub->add_option("--cone", cone);
  sub->add_flag("--upper", upper);
  sub->add_option("--seed", seed);

  auto* fal = app.add_subcommand("falsify", "seeded counterexample search with hypotheses dropped");
  fal->add_option("--law", law)->required();
  fal->add_option("--drop", drop, "hypothesis to leave unchecked (repeatable)");
  fal->add_option("--trials", trials);
  fal->add_option("--seed", seed);
  fal->add_option("--dim", dim);
  fal->add_flag("--json", as_json);

  auto* stab = app.add_subcommand("stability", "stability bound with maps F, H, set M and cone K");
  common(stab);
  run_flags(stab);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  }

  RunOptions ro;
  auto flag_set = [](CLI::App* a, const char* name) { return a->count(name) > 0; };
  try {
    for (auto* s : {run, check, stab}) {
      if (!s->parsed()) continue;
      if (flag_set(s, "--seed")) ro.seed = seed;
      if (flag_set(s, "--samples")) ro.samples = samples;
      if (flag_set(s, "--tol")) ro.tol = tol;
    }

    if (run->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      const ScenarioReport rep = run_scenario(s, ro);
      return emit(rep.doc, as_json, rep.ok);
    }
    if (check->parsed()) {
      parse_law(law);
      return run_one(load_scenario(scenario_path), CheckSpec{"law", {{"law", law}}, std::nullopt}, ro, as_json);
    }
    if (exc->parsed() || hau->parsed()) {
      json args = {{"from", from}, {"to", to}};
      if (!cone.empty()) args["cone"] = cone;
      return run_one(load_scenario(scenario_path), CheckSpec{exc->parsed() ? "excess" : "hausdorff", args, std::nullopt},
                     ro, as_json);
    }
    if (phi->parsed()) {
      const Scenario s = load_scenario(scenario_path);
      const CheckResult r =
          run_check(s, CheckSpec{"phi", {{"cone", cone}, {"e", parse_vector_flag(e)}, {"x", parse_vector_flag(x)}}, std::nullopt});
      if (as_json) return emit({{"checks", json::array({r.record})}, {"version", kReportVersion}}, true, r.ok);
      std::cout << r.record.at("margins").at("value").dump() << "\n";
      return 0;
    }
    if (sub->parsed()) {
      json args = {{"map", map}, {"at", parse_vector_flag(at)}, {"T", parse_matrix_flag(tmat)}, {"upper", upper}};
      if (!cone.empty()) args["cone"] = cone;
      if (flag_set(sub, "--seed")) ro.seed = seed;
      return run_one(load_scenario(scenario_path), CheckSpec{"subdiff", args, std::nullopt}, ro, as_json);
    }
    if (stab->parsed()) {
      return run_one(load_scenario(scenario_path), CheckSpec{"stability", json::object(), std::nullopt}, ro, as_json);
    }
    if (fal->parsed()) {
      const LawId id = parse_law(law);
      const std::set<std::string> dropped(drop.begin(), drop.end());
      const FalsifyResult r = falsify(id, dropped, trials, seed, dim);
      json doc = {{"law", law},
                  {"drop", drop},
                  {"trials", trials},
                  {"trials_run", r.trials_run},
                  {"hypotheses_held", r.hypotheses_held},
                  {"seed", seed},
                  {"dim", dim},
                  {"found", r.found}};
      if (r.found) {
        doc["trial"] = r.trial;
        doc["verdict"] = verdict_json(r.verdict);
        doc["instance"] = instance_scenario(r.instance);
      }
      if (as_json) {
        std::cout << doc.dump(2) << "\n";
      } else if (r.found) {
        std::cout << "counterexample at trial " << r.trial << " (" << r.hypotheses_held << " of " << r.trials_run
                  << " trials met the remaining hypotheses)\n";
        std::cout << "conclusion margin " << r.verdict.conclusion.margin << "\n";
        std::cout << "instance " << doc["instance"].dump() << "\n";
      } else {
        std::cout << "no counterexample in " << r.trials_run << " trials (" << r.hypotheses_held
                  << " met the remaining hypotheses)\n";
      }
      return 0;
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const json::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: bad number in flag value\n";
    return 2;
  }
  return 2;
}
