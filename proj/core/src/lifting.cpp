#include "excat/lifting.hpp"

#include <algorithm>

namespace excat {

MorphismSet make_morphism_set(std::string label, std::vector<ModuleMorphism> members,
                              const ExactStructure& e) {
  for (std::size_t m = 0; m < members.size(); ++m)
    if (!is_inflation(members[m], e))
      throw Error("MorphismSet '" + label + "': member " + std::to_string(m) +
                  " is not an inflation in the active structure");
  return {std::move(label), std::move(members)};
}

LiftingProblem make_lifting_problem(ModuleMorphism i, ModuleMorphism p,
                                    ModuleMorphism f, ModuleMorphism g) {
  if (!(i.source == f.source) || !(i.target == g.source) ||
      !(p.source == f.target) || !(p.target == g.target))
    throw Error("LiftingProblem: corner objects do not match");
  if (!(mul(p.mat, f.mat) == mul(g.mat, i.mat)))
    throw Error("LiftingProblem: square does not commute");
  return {std::move(i), std::move(p), std::move(f), std::move(g)};
}

std::optional<ModuleMorphism> solve_lift(const LiftingProblem& lp) {
  const Module& b = lp.i.target;
  const Module& x = lp.p.source;
  const auto& alg = b.alg;
  const std::uint32_t p = alg->field.p;
  const std::size_t s = b.dim, t = x.dim;
  const std::size_t unknowns = t * s;

  std::vector<std::uint32_t> rows, rhs;
  std::vector<std::uint32_t> row(unknowns);
  auto push_row = [&](std::uint32_t r) {
    rows.insert(rows.end(), row.begin(), row.end());
    rhs.push_back(r);
  };

  // h is a module morphism
  for (std::size_t g : alg->generator_indices) {
    const Matrix& rs = b.action[g];
    const Matrix& rt = x.action[g];
    for (std::size_t r = 0; r < t; ++r)
      for (std::size_t c = 0; c < s; ++c) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t cp = 0; cp < s; ++cp)
          row[r * s + cp] = fp_add(row[r * s + cp], rs.at(cp, c), p);
        for (std::size_t rp = 0; rp < t; ++rp)
          row[rp * s + c] = fp_sub(row[rp * s + c], rt.at(r, rp), p);
        push_row(0);
      }
  }
  // h . i = f
  const Matrix& im = lp.i.mat;
  for (std::size_t r = 0; r < t; ++r)
    for (std::size_t c = 0; c < lp.i.source.dim; ++c) {
      std::fill(row.begin(), row.end(), 0);
      for (std::size_t cp = 0; cp < s; ++cp) row[r * s + cp] = im.at(cp, c);
      push_row(lp.f.mat.at(r, c));
    }
  // p . h = g
  const Matrix& pm = lp.p.mat;
  for (std::size_t r = 0; r < lp.p.target.dim; ++r)
    for (std::size_t c = 0; c < s; ++c) {
      std::fill(row.begin(), row.end(), 0);
      for (std::size_t rp = 0; rp < t; ++rp) row[rp * s + c] = pm.at(r, rp);
      push_row(lp.g.mat.at(r, c));
    }

  const std::size_t nrows = rhs.size();
  Matrix sys(p, nrows, unknowns, std::move(rows));
  Matrix rhsm(p, nrows, 1, std::move(rhs));
  auto sol = solve(sys, rhsm);
  if (!sol) return std::nullopt;
  Matrix h(p, t, s);
  h.a.assign(sol->a.begin(), sol->a.end());
  return ModuleMorphism(b, x, std::move(h));
}

namespace {

// hom-space data for the squares of one member i: A -> B against p: X -> Y
struct SquareSpace {
  std::vector<ModuleMorphism> basis_ax, basis_by;
  Matrix squares;   // basis of {(f,g) : p.f = g.i} in Hom(A,X) (+) Hom(B,Y) coords
  Matrix solvable;  // image of phi |-> (phi.i, p.phi), same coordinates
};

SquareSpace square_space(const ModuleMorphism& i, const ModuleMorphism& p) {
  SquareSpace sq;
  const Module& a = i.source;
  const Module& b = i.target;
  const Module& x = p.source;
  const Module& y = p.target;
  sq.basis_ax = hom_basis(a, x);
  sq.basis_by = hom_basis(b, y);
  auto basis_ay = hom_basis(a, y);
  auto basis_bx = hom_basis(b, x);

  Matrix post_p = hom_post_matrix(p, sq.basis_ax, basis_ay);
  Matrix pre_i = hom_pre_matrix(i, sq.basis_by, basis_ay);
  sq.squares = kernel_basis(hstack(post_p, neg(pre_i)));

  Matrix phi_top = hom_pre_matrix(i, basis_bx, sq.basis_ax);
  Matrix phi_bot = hom_post_matrix(p, basis_bx, sq.basis_by);
  sq.solvable = vstack(phi_top, phi_bot);
  return sq;
}

}  // namespace

bool has_rlp(const ModuleMorphism& p, const MorphismSet& I) {
  for (const auto& i : I.members) {
    SquareSpace sq = square_space(i, p);
    if (rank(sq.solvable) != sq.squares.cols) return false;
  }
  return true;
}

bool has_llp(const ModuleMorphism& i, const std::vector<ModuleMorphism>& P) {
  for (const auto& p : P) {
    SquareSpace sq = square_space(i, p);
    if (rank(sq.solvable) != sq.squares.cols) return false;
  }
  return true;
}

std::vector<std::size_t> unsolved_square_dims(const ModuleMorphism& current,
                                              const MorphismSet& I) {
  std::vector<std::size_t> dims;
  dims.reserve(I.members.size());
  for (const auto& i : I.members) {
    SquareSpace sq = square_space(i, current);
    dims.push_back(sq.squares.cols - rank(sq.solvable));
  }
  return dims;
}

StageResult attach_stage(const ModuleMorphism& current, const MorphismSet& I) {
  const Module& xn = current.source;
  const Module& y = current.target;
  const auto& alg = xn.alg;

  std::vector<CellAttachment> cells;
  std::vector<ModuleMorphism> cell_i, cell_g;
  for (std::size_t m = 0; m < I.members.size(); ++m) {
    const ModuleMorphism& im = I.members[m];
    SquareSpace sq = square_space(im, current);
    if (sq.squares.cols == 0) continue;
    // pivots of [solvable | squares] landing in the squares block pick out a
    // basis of the unsolved quotient, in deterministic rref order
    Rref r = rref(hstack(sq.solvable, sq.squares));
    for (auto piv : r.pivots) {
      if (piv < sq.solvable.cols) continue;
      std::size_t j = piv - sq.solvable.cols;
      std::vector<std::uint32_t> fc(sq.basis_ax.size()), gc(sq.basis_by.size());
      for (std::size_t k = 0; k < fc.size(); ++k) fc[k] = sq.squares.at(k, j);
      for (std::size_t k = 0; k < gc.size(); ++k)
        gc[k] = sq.squares.at(fc.size() + k, j);
      ModuleMorphism f = from_hom_coordinates(im.source, xn, sq.basis_ax, fc);
      ModuleMorphism g = from_hom_coordinates(im.target, y, sq.basis_by, gc);
      cells.push_back({m, f.mat});
      cell_i.push_back(im);
      cell_g.push_back(g);
    }
  }

  if (cells.empty()) return {CellStage{}, current, false};

  ModuleMorphism cop = direct_sum_morphism(cell_i, alg);
  Matrix attach_mat(alg->field.p, xn.dim, 0);
  for (const auto& c : cells) attach_mat = hstack(attach_mat, c.attach);
  ModuleMorphism attach(cop.source, xn, attach_mat);
  PushoutResult po = pushout(cop, attach);

  // induced X_{n+1} -> Y through the quotient presentation of the pushout
  auto ds = direct_sum({cop.target, xn}, alg);
  ModuleMorphism q(ds.object, po.object, hstack(po.from_target.mat, po.from_other.mat));
  Matrix gm(alg->field.p, y.dim, 0);
  for (const auto& g : cell_g) gm = hstack(gm, g.mat);
  ModuleMorphism rhs(ds.object, y, hstack(gm, current.mat));
  auto next = factor_through_deflation(rhs, q);
  if (!next) throw Error("attach_stage: induced morphism does not descend");

  CellStage stage{std::move(cells), po.object, po.from_other.mat, po.from_target.mat};
  return {std::move(stage), std::move(*next), true};
}

Factorization factorize(const ModuleMorphism& f, const MorphismSet& I,
                        std::size_t budget) {
  for (const auto& m : I.members)
    if (!is_injective(m)) throw Error("factorize: member of I is not injective");
  Factorization out;
  out.trace = empty_trace(f.source);
  ModuleMorphism p = f;
  for (;;) {
    StageResult sr = attach_stage(p, I);
    if (!sr.attached) {
      out.residual = p;
      out.completed = true;
      return out;
    }
    if (out.trace.stages.size() >= budget) {
      out.residual = p;
      out.completed = false;
      out.unsolved_dims = unsolved_square_dims(p, I);
      return out;
    }
    out.trace.stages.push_back(sr.stage);
    out.trace.end = sr.stage.result;
    p = sr.next;
  }
}

CellTrace empty_trace(const Module& at) { return {at, {}, at}; }

ModuleMorphism trace_composite(const CellTrace& t) {
  Matrix comp = Matrix::identity(t.start.alg->field.p, t.start.dim);
  for (const auto& st : t.stages) comp = mul(st.step, comp);
  return ModuleMorphism(t.start, t.end, comp);
}

namespace {

struct StageRebuild {
  PushoutResult po;
  ModuleMorphism quotient;  // (+)targets (+) X_n -> pushout
};

StageRebuild rebuild_stage(const Module& xn, const std::vector<CellAttachment>& cells,
                           const MorphismSet& I) {
  const auto& alg = xn.alg;
  std::vector<ModuleMorphism> cell_i;
  Matrix attach_mat(alg->field.p, xn.dim, 0);
  for (const auto& c : cells) {
    cell_i.push_back(I.members.at(c.member));
    attach_mat = hstack(attach_mat, c.attach);
  }
  ModuleMorphism cop = direct_sum_morphism(cell_i, alg);
  ModuleMorphism attach(cop.source, xn, attach_mat);
  PushoutResult po = pushout(cop, attach);
  auto ds = direct_sum({cop.target, xn}, alg);
  ModuleMorphism q(ds.object, po.object, hstack(po.from_target.mat, po.from_other.mat));
  return {std::move(po), std::move(q)};
}

}  // namespace

ModuleMorphism replay(const CellTrace& t, const MorphismSet& I) {
  Module x = t.start;
  Matrix comp = Matrix::identity(x.alg->field.p, x.dim);
  for (std::size_t n = 0; n < t.stages.size(); ++n) {
    const CellStage& st = t.stages[n];
    StageRebuild rb = rebuild_stage(x, st.cells, I);
    if (!(rb.po.object == st.result) || !(rb.po.from_other.mat == st.step) ||
        !(rb.po.from_target.mat == st.coproduct_leg))
      throw Error("replay: stage " + std::to_string(n) +
                  " does not reproduce the recorded pushout");
    comp = mul(st.step, comp);
    x = st.result;
  }
  if (!(x == t.end)) throw Error("replay: end object mismatch");
  return ModuleMorphism(t.start, t.end, comp);
}

CellTrace compose_traces(const CellTrace& t1, const CellTrace& t2) {
  if (!(t1.end == t2.start)) throw Error("compose_traces: endpoint mismatch");
  CellTrace out = t1;
  out.stages.insert(out.stages.end(), t2.stages.begin(), t2.stages.end());
  out.end = t2.end;
  return out;
}

PushedTrace pushout_trace(const CellTrace& t, const MorphismSet& I,
                          const ModuleMorphism& g) {
  if (!(t.start == g.source)) throw Error("pushout_trace: base mismatch");
  const auto& alg = t.start.alg;
  CellTrace out = empty_trace(g.target);
  ModuleMorphism u = g;  // X_n -> E_n
  Module x = t.start;
  for (const auto& st : t.stages) {
    std::vector<CellAttachment> pushed_cells;
    pushed_cells.reserve(st.cells.size());
    for (const auto& c : st.cells)
      pushed_cells.push_back({c.member, mul(u.mat, c.attach)});
    StageRebuild rb = rebuild_stage(out.end, pushed_cells, I);
    out.stages.push_back({pushed_cells, rb.po.object, rb.po.from_other.mat,
                          rb.po.from_target.mat});
    out.end = rb.po.object;

    // carry u across the stage through the quotient presentation
    StageRebuild rb_x = rebuild_stage(x, st.cells, I);
    ModuleMorphism rhs(rb_x.quotient.source, out.end,
                       hstack(rb.po.from_target.mat, mul(rb.po.from_other.mat, u.mat)));
    auto nu = factor_through_deflation(rhs, rb_x.quotient);
    if (!nu) throw Error("pushout_trace: comparison map does not descend");
    u = *nu;
    x = st.result;
  }
  return {std::move(out), std::move(u)};
}

CellTrace coproduct_of_cells(const std::vector<CellTrace>& traces,
                             const MorphismSet& I, const AlgebraPtr& alg) {
  CellTrace acc = empty_trace(zero_module(alg));
  for (const auto& t : traces) {
    if (t.start.dim != 0) throw Error("coproduct_of_cells: trace does not start at 0");
    PushedTrace pushed = pushout_trace(t, I, zero_morphism(t.start, acc.end));
    acc = compose_traces(acc, pushed.trace);
  }
  return acc;
}

Filtration make_filtration(std::vector<ShortExactSequence> steps) {
  Filtration f;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (!ses_invariants_hold(steps[j]))
      throw Error("Filtration: step " + std::to_string(j) + " is not short exact");
    if (j > 0 && !(steps[j].inflation.source == steps[j - 1].inflation.target))
      throw Error("Filtration: chain condition fails at step " + std::to_string(j));
    f.cokernels.push_back(steps[j].deflation.target);
  }
  f.steps = std::move(steps);
  return f;
}

TraceFiltration trace_to_filtration(const CellTrace& t, const MorphismSet& I) {
  if (t.start.dim != 0) throw Error("trace_to_filtration: trace does not start at 0");
  const auto& alg = t.start.alg;

  std::vector<CokernelResult> member_cok;
  member_cok.reserve(I.members.size());
  for (const auto& m : I.members) member_cok.push_back(cokernel(m));

  TraceFiltration out;
  std::vector<ShortExactSequence> steps;
  Module x = t.start;
  for (const auto& st : t.stages) {
    ModuleMorphism sigma(x, st.result, st.step);
    ShortExactSequence ses = conflation_from_inflation(sigma);
    const ModuleMorphism& q = ses.deflation;

    std::vector<Module> parts;
    Matrix chi(alg->field.p, q.target.dim, 0);
    std::size_t off = 0;
    for (const auto& c : st.cells) {
      const auto& ck = member_cok[c.member];
      const Module& b = I.members[c.member].target;
      Matrix tau_c(alg->field.p, st.result.dim, b.dim);
      for (std::size_t i = 0; i < st.result.dim; ++i)
        for (std::size_t j = 0; j < b.dim; ++j)
          tau_c.at(i, j) = st.coproduct_leg.at(i, off + j);
      off += b.dim;
      ModuleMorphism into_cok(b, q.target, mul(q.mat, tau_c));
      auto comp = factor_through_deflation(into_cok, ck.projection);
      if (!comp) throw Error("trace_to_filtration: canonical map does not descend");
      chi = hstack(chi, comp->mat);
      parts.push_back(ck.object);
    }
    auto sum = direct_sum(parts, alg);
    ModuleMorphism iso(sum.object, q.target, chi);
    if (rank(iso.mat) != q.target.dim || sum.object.dim != q.target.dim)
      throw Error("trace_to_filtration: stage cokernel is not a sum of Cok I members");
    out.cok_sums.push_back(sum.object);
    out.cok_isos.push_back(std::move(iso));
    steps.push_back(std::move(ses));
    x = st.result;
  }
  out.filtration = make_filtration(std::move(steps));
  return out;
}

std::optional<ModuleMorphism> lift_through_trace(const CellTrace& t, const MorphismSet& I,
                                                 const ModuleMorphism& p,
                                                 const ModuleMorphism& u,
                                                 const ModuleMorphism& v) {
  const auto& alg = t.start.alg;
  ModuleMorphism gamma = trace_composite(t);
  if (!(mul(p.mat, u.mat) == mul(v.mat, gamma.mat)))
    throw Error("lift_through_trace: outer square does not commute");

  // suffix composites X_n -> end
  std::vector<Matrix> suffix(t.stages.size() + 1);
  suffix[t.stages.size()] = Matrix::identity(alg->field.p, t.end.dim);
  for (std::size_t n = t.stages.size(); n-- > 0;)
    suffix[n] = mul(suffix[n + 1], t.stages[n].step);

  ModuleMorphism h = u;  // X_n -> W
  Module x = t.start;
  for (std::size_t n = 0; n < t.stages.size(); ++n) {
    const CellStage& st = t.stages[n];
    Matrix vrest = mul(v.mat, suffix[n + 1]);  // X_{n+1} -> Z
    std::vector<ModuleMorphism> lifts;
    std::size_t off = 0;
    for (const auto& c : st.cells) {
      const ModuleMorphism& i = I.members[c.member];
      ModuleMorphism f_c(i.source, p.source, mul(h.mat, c.attach));
      Matrix tau_c(alg->field.p, st.result.dim, i.target.dim);
      for (std::size_t r = 0; r < st.result.dim; ++r)
        for (std::size_t j = 0; j < i.target.dim; ++j)
          tau_c.at(r, j) = st.coproduct_leg.at(r, off + j);
      off += i.target.dim;
      ModuleMorphism g_c(i.target, p.target, mul(vrest, tau_c));
      auto lift = solve_lift(make_lifting_problem(i, p, f_c, g_c));
      if (!lift) return std::nullopt;
      lifts.push_back(std::move(*lift));
    }
    StageRebuild rb = rebuild_stage(x, st.cells, I);
    Matrix lm(alg->field.p, p.source.dim, 0);
    for (const auto& l : lifts) lm = hstack(lm, l.mat);
    ModuleMorphism rhs(rb.quotient.source, p.source, hstack(lm, h.mat));
    auto nh = factor_through_deflation(rhs, rb.quotient);
    if (!nh) throw Error("lift_through_trace: stage lift does not descend");
    h = *nh;
    x = st.result;
  }
  if (!(mul(h.mat, gamma.mat) == u.mat) || !(mul(p.mat, h.mat) == v.mat))
    throw Error("lift_through_trace: assembled lift fails the defining equations");
  return h;
}

}  // namespace excat
