#include "excat/commands.hpp"

#include <algorithm>

namespace excat {

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"entries", m.a}};
}

static json morphism_to_json(const ModuleMorphism& f) {
  return json{{"source_dim", f.source.dim},
              {"target_dim", f.target.dim},
              {"matrix", matrix_to_json(f.mat)}};
}

static json ses_to_json(const ShortExactSequence& s) {
  return json{{"inflation", morphism_to_json(s.inflation)},
              {"deflation", morphism_to_json(s.deflation)}};
}

json trace_to_json(const CellTrace& t) {
  json stages = json::array();
  for (const auto& st : t.stages) {
    json cells = json::array();
    for (const auto& c : st.cells)
      cells.push_back(json{{"member", c.member}, {"attach", matrix_to_json(c.attach)}});
    stages.push_back(json{{"cells", cells},
                          {"result_dim", st.result.dim},
                          {"step", matrix_to_json(st.step)},
                          {"coproduct_leg", matrix_to_json(st.coproduct_leg)}});
  }
  return json{{"start_dim", t.start.dim},
              {"end_dim", t.end.dim},
              {"composite", matrix_to_json(trace_composite(t).mat)},
              {"stages", stages}};
}

namespace {

ExactStructure resolve_structure(const Workspace& ws, const std::string& s) {
  if (s == "abelian" || s.empty()) return ExactStructure::abelian();
  const std::string prefix = "relative:";
  if (s.rfind(prefix, 0) == 0)
    return ExactStructure::relative(ws.module_ref(s.substr(prefix.size())));
  throw Error("unknown structure '" + s + "' (use abelian or relative:NAME)");
}

MorphismSet resolve_set(const Workspace& ws, const std::string& name,
                        const ExactStructure& e) {
  auto it = ws.sets.find(name);
  if (it == ws.sets.end()) throw Error("unresolved set reference: " + name);
  std::vector<ModuleMorphism> members;
  for (const auto& n : it->second) members.push_back(ws.morphism_ref(n));
  return make_morphism_set(name, std::move(members), e);
}

TestUniverse resolve_universe(const Workspace& ws, const std::string& name) {
  auto it = ws.universes.find(name);
  if (it == ws.universes.end()) throw Error("unresolved universe reference: " + name);
  std::vector<Module> objects;
  for (const auto& n : it->second) objects.push_back(ws.module_ref(n));
  return make_universe(std::move(objects), "workspace universe " + name);
}

void need_args(const CommandRequest& req, std::size_t n) {
  if (req.args.size() != n)
    throw Error("command '" + req.command + "' expects " + std::to_string(n) +
                " arguments, got " + std::to_string(req.args.size()));
}

json cmd_ext1(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 2);
  ExactStructure e = resolve_structure(ws, req.structure);
  ExtGroup ext = ext1(ws.module_ref(req.args[0]), ws.module_ref(req.args[1]), e);
  json cocycles = json::array();
  for (const auto& c : ext.cocycle_basis) cocycles.push_back(matrix_to_json(c.mat));
  exit_code = 0;
  return json{{"dim", ext.dim},
              {"cocycles", cocycles},
              {"resolution", ses_to_json(ext.resolution.cover)}};
}

json cmd_rlp(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 2);
  ExactStructure e = resolve_structure(ws, req.structure);
  MorphismSet I = resolve_set(ws, req.args[1], e);
  bool verdict = has_rlp(ws.morphism_ref(req.args[0]), I);
  exit_code = verdict ? 0 : 1;
  return json{{"rlp", verdict}};
}

json cmd_factorize(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 2);
  ExactStructure e = resolve_structure(ws, req.structure);
  MorphismSet I = resolve_set(ws, req.args[1], e);
  const ModuleMorphism& f = ws.morphism_ref(req.args[0]);
  Factorization fact = factorize(f, I, req.budget);
  json body{{"completed", fact.completed},
            {"stages", fact.trace.stages.size()},
            {"trace", trace_to_json(fact.trace)},
            {"residual", morphism_to_json(fact.residual)}};
  if (!fact.completed) {
    body["unsolved_dims"] = fact.unsolved_dims;
    exit_code = 2;
    return body;
  }
  bool composite_ok = mul(fact.residual.mat, trace_composite(fact.trace).mat) == f.mat;
  bool rlp_ok = has_rlp(fact.residual, I);
  replay(fact.trace, I);
  body["composite_equals_input"] = composite_ok;
  body["residual_has_rlp"] = rlp_ok;
  exit_code = composite_ok && rlp_ok ? 0 : 1;
  return body;
}

json cmd_preenvelope(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 2);
  ExactStructure e = resolve_structure(ws, req.structure);
  MorphismSet I = resolve_set(ws, req.args[1], e);
  Preenvelope pe = special_preenvelope(ws.module_ref(req.args[0]), I, req.budget, e);
  exit_code = pe.target_certified ? 0 : 1;
  return json{{"sequence", ses_to_json(pe.seq)},
              {"trace", trace_to_json(pe.trace)},
              {"cokernel_trace", trace_to_json(pe.cok_trace)},
              {"cokernel_identification", matrix_to_json(pe.cok_identification.mat)},
              {"ext_dims_against_coks", pe.ext_dims},
              {"target_certified", pe.target_certified}};
}

json cmd_precover(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 2);
  ExactStructure e = resolve_structure(ws, req.structure);
  MorphismSet I = resolve_set(ws, req.args[1], e);
  Precover pc = special_precover(ws.module_ref(req.args[0]), I, req.budget, e);
  exit_code = pc.kernel_certified && pc.kernel_rlp ? 0 : 1;
  return json{{"sequence", ses_to_json(pc.seq)},
              {"trace", trace_to_json(pc.trace)},
              {"ext_dims_against_coks", pc.ext_dims},
              {"kernel_certified", pc.kernel_certified},
              {"kernel_has_rlp", pc.kernel_rlp}};
}

json cmd_eklof(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 2);
  ExactStructure e = resolve_structure(ws, req.structure);
  auto it = ws.filtrations.find(req.args[0]);
  if (it == ws.filtrations.end())
    throw Error("unresolved filtration reference: " + req.args[0]);
  const Module& a = ws.module_ref(req.args[1]);

  std::vector<ShortExactSequence> steps;
  for (const auto& n : it->second)
    steps.push_back(conflation_from_inflation(ws.morphism_ref(n)));
  Filtration flt = make_filtration(std::move(steps));

  json cok_dims = json::array();
  bool perp_ok = true;
  for (const auto& c : flt.cokernels) {
    std::size_t d = ext1(c, a, e).dim;
    cok_dims.push_back(d);
    perp_ok = perp_ok && d == 0;
  }
  Module top = flt.steps.empty() ? zero_module(a.alg)
                                 : flt.steps.back().inflation.target;
  ExtGroup top_ext = ext1(top, a, e);

  json conflations = json::array();
  bool sections_ok = perp_ok;
  if (perp_ok) {
    // realize one conflation per cocycle-space basis vector, plus the split one
    std::vector<ModuleMorphism> reps = hom_basis(top_ext.resolution.syzygy(), a);
    reps.push_back(zero_morphism(top_ext.resolution.syzygy(), a));
    for (const auto& c : reps) {
      ShortExactSequence ses = extension_from_cocycle(c, top_ext.resolution);
      ModuleMorphism s = eklof_splitting(flt, a, ses, e);
      bool ok = mul(ses.deflation.mat, s.mat).is_identity();
      sections_ok = sections_ok && ok;
      conflations.push_back(json{{"middle_dim", ses.inflation.target.dim},
                                 {"section", matrix_to_json(s.mat)},
                                 {"verified", ok}});
    }
  }
  bool verdict = perp_ok && top_ext.dim == 0 && sections_ok;
  exit_code = verdict ? 0 : 1;
  return json{{"cokernel_ext_dims", cok_dims},
              {"top_ext_dim", top_ext.dim},
              {"conflations", conflations},
              {"verdict", verdict}};
}

json cmd_homological(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 1);
  if (req.universe.empty()) throw Error("homological: --universe is required");
  ExactStructure e = resolve_structure(ws, req.structure);
  MorphismSet I = resolve_set(ws, req.args[0], e);
  TestUniverse u = resolve_universe(ws, req.universe);
  HomologicalVerdict v = is_homological(I, u, e);
  json counter = json::array();
  for (const auto& c : v.counterexamples)
    counter.push_back(json{{"object_index", c.universe_index},
                           {"member_index", c.member_index},
                           {"ext_dim", c.ext_dim}});
  exit_code = v.holds ? 0 : 1;
  return json{{"holds", v.holds},
              {"injective_object_indices", v.injective_objects},
              {"counterexamples", counter}};
}

json cmd_acyclic(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  need_args(req, 2);
  GAcyclicity ga = is_g_acyclic(ws.complex_ref(req.args[0]), ws.module_ref(req.args[1]));
  json witnesses = json::array();
  for (const auto& w : ga.witnesses)
    witnesses.push_back(json{{"degree", w.degree},
                             {"image_dim", w.factorization.image.dim},
                             {"deflation_ok", w.deflation_ok},
                             {"inflation_ok", w.inflation_ok},
                             {"exact_at_next", w.exact_at_next},
                             {"z_sequence_ok", w.z_sequence_ok}});
  exit_code = ga.acyclic ? 0 : 1;
  return json{{"acyclic", ga.acyclic}, {"witnesses", witnesses}};
}

json cmd_corollary42(const Workspace& ws, const CommandRequest& req, int& exit_code) {
  if (req.args.empty()) throw Error("corollary42: name at least one generator module");
  if (req.universe.empty()) throw Error("corollary42: --universe is required");
  auto it = ws.cuniverses.find(req.universe);
  if (it == ws.cuniverses.end())
    throw Error("unresolved complex universe reference: " + req.universe);

  std::vector<Module> gs;
  for (const auto& n : req.args) gs.push_back(ws.module_ref(n));
  std::vector<Complex> universe;
  std::vector<std::string> names;
  for (const auto& n : it->second) {
    universe.push_back(ws.complex_ref(n));
    names.push_back(n);
  }
  int lo = universe.front().lo, hi = universe.front().hi;
  for (const auto& x : universe) {
    lo = std::min(lo, x.lo);
    hi = std::max(hi, x.hi);
  }
  if (req.window) {
    lo = req.window->first;
    hi = req.window->second;
  } else {
    lo -= 1;
    hi += 1;
  }
  for (auto& x : universe) x = pad_complex(x, lo, hi);

  CompletenessReport rep = verify_complex_completeness(
      gs, lo, hi, universe, names, req.budget, req.bridge_samples, req.seed);

  json items = json::array();
  bool any_budget = false;
  for (const auto& i : rep.items) {
    any_budget = any_budget || i.budget_exhausted;
    items.push_back(json{{"name", i.name},
                         {"budget_exhausted", i.budget_exhausted},
                         {"preenvelope_ok", i.preenvelope_ok},
                         {"precover_ok", i.precover_ok},
                         {"preenvelope_degreewise_g_exact", i.preenvelope_degreewise},
                         {"precover_degreewise_g_exact", i.precover_degreewise},
                         {"left_perp_member", i.left_perp_member},
                         {"summand_ok", i.summand_ok},
                         {"filtration_ok", i.filtration_ok},
                         {"preenvelope_ext_dims", i.preenvelope_ext_dims},
                         {"precover_ext_dims", i.precover_ext_dims}});
  }
  json counter = json::array();
  for (const auto& c : rep.homological.counterexamples)
    counter.push_back(json{{"object_index", c.universe_index},
                           {"member_index", c.member_index},
                           {"ext_dim", c.ext_dim}});
  exit_code = rep.all_ok ? 0 : (any_budget ? 2 : 1);
  return json{{"window", json::array({lo, hi})},
              {"generating_count", rep.generating_count},
              {"generators_are_inflations", rep.generators_are_inflations},
              {"homological",
               json{{"holds", rep.homological.holds}, {"counterexamples", counter}}},
              {"items", items},
              {"bridge_checks",
               json{{"passed", rep.bridge_checks_passed},
                    {"total", rep.bridge_checks_total}}},
              {"all_ok", rep.all_ok}};
}

}  // namespace

Report run_command(const Workspace& ws, const CommandRequest& req) {
  Report rep;
  rep.body = json{{"command", req.command},
                  {"args", req.args},
                  {"structure", req.structure},
                  {"budget", req.budget}};
  try {
    int code = 0;
    json payload;
    if (req.command == "ext1")
      payload = cmd_ext1(ws, req, code);
    else if (req.command == "rlp")
      payload = cmd_rlp(ws, req, code);
    else if (req.command == "factorize")
      payload = cmd_factorize(ws, req, code);
    else if (req.command == "preenvelope")
      payload = cmd_preenvelope(ws, req, code);
    else if (req.command == "precover")
      payload = cmd_precover(ws, req, code);
    else if (req.command == "eklof")
      payload = cmd_eklof(ws, req, code);
    else if (req.command == "homological")
      payload = cmd_homological(ws, req, code);
    else if (req.command == "acyclic")
      payload = cmd_acyclic(ws, req, code);
    else if (req.command == "corollary42")
      payload = cmd_corollary42(ws, req, code);
    else
      throw Error("unknown command: " + req.command);
    rep.body["result"] = payload;
    rep.body["status"] = code == 0 ? "pass" : (code == 2 ? "budget-exhausted" : "fail");
    rep.exit_code = code;
  } catch (const BudgetExhausted& b) {
    rep.body["status"] = "budget-exhausted";
    rep.body["error"] = b.what();
    rep.body["unsolved_dims"] = b.partial.unsolved_dims;
    rep.exit_code = 2;
  } catch (const Error& e) {
    rep.body["status"] = "error";
    rep.body["error"] = e.what();
    rep.exit_code = 3;
  }
  return rep;
}

}  // namespace excat
