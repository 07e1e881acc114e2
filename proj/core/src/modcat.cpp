#include "excat/modcat.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace excat {

namespace {

// span tracking for subalgebra closure: rows of `basis` are reduced vectors
struct SpanTracker {
  std::uint32_t p;
  std::size_t dim;
  std::vector<std::vector<std::uint32_t>> rows;  // in row-echelon form
  std::vector<std::size_t> pivots;

  bool add(std::vector<std::uint32_t> v) {  // returns true if rank grew
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::uint32_t f = v[pivots[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < dim; ++j)
        v[j] = fp_sub(v[j], fp_mul(f, rows[i][j], p), p);
    }
    std::size_t piv = dim;
    for (std::size_t j = 0; j < dim; ++j)
      if (v[j] != 0) { piv = j; break; }
    if (piv == dim) return false;
    std::uint32_t inv = fp_inv(v[piv], p);
    for (std::size_t j = 0; j < dim; ++j) v[j] = fp_mul(v[j], inv, p);
    rows.push_back(std::move(v));
    pivots.push_back(piv);
    return true;
  }
  bool contains(std::vector<std::uint32_t> v) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::uint32_t f = v[pivots[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < dim; ++j)
        v[j] = fp_sub(v[j], fp_mul(f, rows[i][j], p), p);
    }
    return std::all_of(v.begin(), v.end(), [](std::uint32_t e) { return e == 0; });
  }
};

}  // namespace

Algebra::Algebra(FieldPrime f, std::size_t d, std::vector<std::uint32_t> structure_constants,
                 std::vector<std::uint32_t> unit_coords)
    : field(f), dim(d), sc(std::move(structure_constants)), unit(std::move(unit_coords)) {
  const std::uint32_t p = field.p;
  if (sc.size() != d * d * d) throw Error("Algebra: structure constant table has wrong size");
  if (unit.size() != d) throw Error("Algebra: unit vector has wrong size");
  for (auto& e : sc) e %= p;
  for (auto& e : unit) e %= p;

  // associativity: (e_i e_j) e_k = e_i (e_j e_k) for all basis triples
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t t = 0; t < d; ++t) {
          std::uint64_t lhs = 0, rhs = 0;
          for (std::size_t m = 0; m < d; ++m) {
            lhs += std::uint64_t(c(i, j, m)) * c(m, k, t) % p;
            rhs += std::uint64_t(c(j, k, m)) * c(i, m, t) % p;
          }
          if (lhs % p != rhs % p)
            throw Error("Algebra: associativity fails on basis triple (" +
                        std::to_string(i) + "," + std::to_string(j) + "," +
                        std::to_string(k) + ")");
        }
      }

  // unit law: 1 * e_j = e_j = e_j * 1
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<std::uint32_t> ej(d, 0);
    ej[j] = 1 % p;
    if (multiply(unit, ej) != ej || multiply(ej, unit) != ej)
      throw Error("Algebra: unit does not act as a two-sided identity on e_" +
                  std::to_string(j));
  }

  // greedy generating subset: commuting with these (plus the unit) implies
  // commuting with the whole basis, which keeps morphism systems small
  SpanTracker span{p, d, {}, {}};
  span.add(unit);
  bool closed = false;
  auto close_under_products = [&]() {
    bool grew = true;
    while (grew) {
      grew = false;
      auto snapshot = span.rows;
      for (const auto& u : snapshot)
        for (const auto& v : snapshot)
          if (span.add(multiply(u, v))) grew = true;
    }
  };
  close_under_products();
  for (std::size_t i = 0; i < d && !closed; ++i) {
    std::vector<std::uint32_t> ei(d, 0);
    ei[i] = 1 % p;
    if (!span.contains(ei)) {
      generator_indices.push_back(i);
      span.add(ei);
      close_under_products();
      closed = span.rows.size() == d;
    }
  }
}

std::vector<std::uint32_t> Algebra::multiply(const std::vector<std::uint32_t>& x,
                                             const std::vector<std::uint32_t>& y) const {
  const std::uint32_t p = field.p;
  std::vector<std::uint32_t> z(dim, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (y[j] == 0) continue;
      std::uint32_t xy = fp_mul(x[i], y[j], p);
      for (std::size_t k = 0; k < dim; ++k)
        z[k] = fp_add(z[k], fp_mul(xy, c(i, j, k), p), p);
    }
  }
  return z;
}

Matrix Algebra::left_mult(std::size_t i) const {
  Matrix m(field.p, dim, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k) m.at(k, j) = c(i, j, k);
  return m;
}

Module::Module(AlgebraPtr a, std::size_t n, std::vector<Matrix> act)
    : alg(std::move(a)), dim(n), action(std::move(act)) {
  const std::size_t d = alg->dim;
  const std::uint32_t p = alg->field.p;
  if (action.size() != d) throw Error("Module: need one action matrix per basis element");
  for (const auto& m : action)
    if (m.rows != dim || m.cols != dim || m.p != p)
      throw Error("Module: action matrix has wrong shape or field");

  // unit acts as identity
  Matrix u(p, dim, dim);
  for (std::size_t i = 0; i < d; ++i)
    if (alg->unit[i] != 0) u = add(u, scalar_mul(alg->unit[i], action[i]));
  if (!u.is_identity()) throw Error("Module: unit does not act as the identity");

  // multiplicativity on a generating set implies it on the whole basis
  auto rho_hat = [&](const std::vector<std::uint32_t>& x) {
    Matrix m(p, dim, dim);
    for (std::size_t i = 0; i < d; ++i)
      if (x[i] != 0) m = add(m, scalar_mul(x[i], action[i]));
    return m;
  };
  for (std::size_t g : alg->generator_indices) {
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<std::uint32_t> ej(d, 0);
      ej[j] = 1 % p;
      std::vector<std::uint32_t> prod(d, 0);
      for (std::size_t k = 0; k < d; ++k) prod[k] = alg->c(g, j, k);
      if (mul(action[g], action[j]) != rho_hat(prod))
        throw Error("Module: action does not respect structure constants at (" +
                    std::to_string(g) + "," + std::to_string(j) + ")");
    }
  }
}

bool same_algebra(const Module& m, const Module& n) {
  return m.alg == n.alg || *m.alg == *n.alg;
}

Module zero_module(const AlgebraPtr& alg) {
  std::vector<Matrix> act(alg->dim, Matrix(alg->field.p, 0, 0));
  return Module(alg, 0, std::move(act));
}

Module regular_module(const AlgebraPtr& alg) {
  std::vector<Matrix> act;
  act.reserve(alg->dim);
  for (std::size_t i = 0; i < alg->dim; ++i) act.push_back(alg->left_mult(i));
  return Module(alg, alg->dim, std::move(act));
}

ModuleMorphism::ModuleMorphism(Module src, Module tgt, Matrix m)
    : source(std::move(src)), target(std::move(tgt)), mat(std::move(m)) {
  if (!same_algebra(source, target)) throw Error("ModuleMorphism: algebra mismatch");
  if (mat.rows != target.dim || mat.cols != source.dim || mat.p != source.alg->field.p)
    throw Error("ModuleMorphism: matrix shape or field mismatch");
  for (std::size_t g : source.alg->generator_indices)
    if (mul(mat, source.action[g]) != mul(target.action[g], mat))
      throw Error("ModuleMorphism: matrix does not commute with the action of e_" +
                  std::to_string(g));
}

ModuleMorphism zero_morphism(const Module& src, const Module& tgt) {
  return ModuleMorphism(src, tgt, Matrix(src.alg->field.p, tgt.dim, src.dim));
}

ModuleMorphism identity_morphism(const Module& m) {
  return ModuleMorphism(m, m, Matrix::identity(m.alg->field.p, m.dim));
}

ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f) {
  if (!(f.target == g.source)) throw Error("compose: middle objects differ");
  return ModuleMorphism(f.source, g.target, mul(g.mat, f.mat));
}

ModuleMorphism add(const ModuleMorphism& f, const ModuleMorphism& g) {
  if (!(f.source == g.source) || !(f.target == g.target))
    throw Error("add: morphisms not parallel");
  return ModuleMorphism(f.source, f.target, add(f.mat, g.mat));
}

ModuleMorphism sub(const ModuleMorphism& f, const ModuleMorphism& g) {
  if (!(f.source == g.source) || !(f.target == g.target))
    throw Error("sub: morphisms not parallel");
  return ModuleMorphism(f.source, f.target, sub(f.mat, g.mat));
}

bool is_injective(const ModuleMorphism& f) { return rank(f.mat) == f.source.dim; }
bool is_surjective(const ModuleMorphism& f) { return rank(f.mat) == f.target.dim; }

ShortExactSequence make_ses(ModuleMorphism inflation, ModuleMorphism deflation) {
  ShortExactSequence s{std::move(inflation), std::move(deflation)};
  if (!(s.inflation.target == s.deflation.source))
    throw Error("make_ses: middle objects differ");
  if (!is_injective(s.inflation)) throw Error("make_ses: inflation not injective");
  if (!is_surjective(s.deflation)) throw Error("make_ses: deflation not surjective");
  if (!mul(s.deflation.mat, s.inflation.mat).is_zero())
    throw Error("make_ses: composite is nonzero");
  if (s.inflation.source.dim != s.inflation.target.dim - s.deflation.target.dim)
    throw Error("make_ses: dimension count violates exactness");
  return s;
}

bool ses_invariants_hold(const ShortExactSequence& s) {
  if (!(s.inflation.target == s.deflation.source)) return false;
  if (!is_injective(s.inflation) || !is_surjective(s.deflation)) return false;
  if (!mul(s.deflation.mat, s.inflation.mat).is_zero()) return false;
  return s.inflation.source.dim == s.inflation.target.dim - s.deflation.target.dim;
}

ExactStructure ExactStructure::relative(Module g) {
  ExactStructure e;
  e.kind = Kind::relative;
  e.generators = {std::move(g)};
  return e;
}

ExactStructure ExactStructure::relative_sum(std::vector<Module> parts) {
  if (parts.empty()) throw Error("ExactStructure: relative structure needs a generator");
  ExactStructure e;
  e.kind = Kind::relative;
  e.generators = std::move(parts);
  return e;
}

Module ExactStructure::generator() const {
  if (is_abelian()) throw Error("ExactStructure: abelian structure has no generator");
  if (generators.size() == 1) return generators.front();
  return direct_sum(generators, generators.front().alg).object;
}

KernelResult kernel(const ModuleMorphism& f) {
  Matrix k = kernel_basis(f.mat);
  const auto& alg = f.source.alg;
  std::vector<Matrix> act;
  act.reserve(alg->dim);
  for (std::size_t i = 0; i < alg->dim; ++i) {
    auto sol = solve(k, mul(f.source.action[i], k));
    if (!sol) throw Error("kernel: induced action failed (invariant violation)");
    act.push_back(std::move(*sol));
  }
  Module obj(alg, k.cols, std::move(act));
  ModuleMorphism incl(obj, f.source, k);
  return {std::move(obj), std::move(incl)};
}

CokernelResult cokernel(const ModuleMorphism& f) {
  const auto& alg = f.source.alg;
  const std::uint32_t p = alg->field.p;
  const std::size_t n = f.target.dim;
  Rref r = rref(transpose(f.mat));  // rows span im(f)
  std::vector<bool> is_piv(n, false);
  for (auto c : r.pivots) is_piv[c] = true;
  std::vector<std::size_t> np;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_piv[j]) np.push_back(j);

  Matrix q(p, np.size(), n);
  for (std::size_t a = 0; a < np.size(); ++a) {
    q.at(a, np[a]) = 1 % p;
    for (std::size_t i = 0; i < r.pivots.size(); ++i)
      q.at(a, r.pivots[i]) = fp_neg(r.matrix.at(i, np[a]), p);
  }
  if (!mul(q, f.mat).is_zero()) throw Error("cokernel: projection does not kill image");

  Matrix qt = transpose(q);
  std::vector<Matrix> act;
  act.reserve(alg->dim);
  for (std::size_t i = 0; i < alg->dim; ++i) {
    auto sol = solve(qt, mul(transpose(f.target.action[i]), qt));
    if (!sol) throw Error("cokernel: induced action failed (invariant violation)");
    act.push_back(transpose(*sol));
  }
  Module obj(alg, np.size(), std::move(act));
  ModuleMorphism proj(f.target, obj, q);
  return {std::move(obj), std::move(proj)};
}

ImageFactorization image_factorization(const ModuleMorphism& f) {
  const auto& alg = f.source.alg;
  Rref r = rref(f.mat);
  Matrix b(alg->field.p, f.target.dim, r.pivots.size());
  for (std::size_t j = 0; j < r.pivots.size(); ++j)
    for (std::size_t i = 0; i < f.target.dim; ++i) b.at(i, j) = f.mat.at(i, r.pivots[j]);
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < alg->dim; ++i) {
    auto sol = solve(b, mul(f.target.action[i], b));
    if (!sol) throw Error("image_factorization: image is not a submodule");
    act.push_back(std::move(*sol));
  }
  Module img(alg, b.cols, std::move(act));
  auto proj = solve(b, f.mat);
  if (!proj) throw Error("image_factorization: projection solve failed");
  return {img, ModuleMorphism(f.source, img, std::move(*proj)),
          ModuleMorphism(img, f.target, b)};
}

PushoutResult pushout(const ModuleMorphism& i, const ModuleMorphism& f) {
  if (!(i.source == f.source)) throw Error("pushout: sources differ");
  auto ds = direct_sum({i.target, f.target}, i.source.alg);
  ModuleMorphism span(i.source, ds.object, vstack(i.mat, neg(f.mat)));
  CokernelResult c = cokernel(span);
  std::size_t nb = i.target.dim;
  ModuleMorphism from_target(i.target, c.object, col_slice(c.projection.mat, 0, nb));
  ModuleMorphism from_other(f.target, c.object,
                            col_slice(c.projection.mat, nb, nb + f.target.dim));
  return {c.object, std::move(from_target), std::move(from_other)};
}

PullbackResult pullback(const ModuleMorphism& p, const ModuleMorphism& g) {
  if (!(p.target == g.target)) throw Error("pullback: targets differ");
  auto ds = direct_sum({p.source, g.source}, p.source.alg);
  ModuleMorphism cospan(ds.object, p.target, hstack(p.mat, neg(g.mat)));
  KernelResult k = kernel(cospan);
  std::size_t nb = p.source.dim;
  ModuleMorphism to_source(k.object, p.source, row_slice(k.inclusion.mat, 0, nb));
  ModuleMorphism to_other(k.object, g.source,
                          row_slice(k.inclusion.mat, nb, nb + g.source.dim));
  return {k.object, std::move(to_source), std::move(to_other)};
}

std::vector<ModuleMorphism> hom_basis(const Module& m, const Module& n) {
  if (!same_algebra(m, n)) throw Error("hom_basis: algebra mismatch");
  const auto& alg = m.alg;
  const std::uint32_t p = alg->field.p;
  const std::size_t s = m.dim, t = n.dim;
  const std::size_t unknowns = t * s;
  if (unknowns == 0) return {};

  const auto& gens = alg->generator_indices;
  std::vector<std::uint32_t> rows;
  rows.reserve(gens.size() * unknowns * unknowns);
  std::size_t nrows = 0;
  std::vector<std::uint32_t> row(unknowns);
  for (std::size_t g : gens) {
    const Matrix& rs = m.action[g];
    const Matrix& rt = n.action[g];
    for (std::size_t r = 0; r < t; ++r)
      for (std::size_t c = 0; c < s; ++c) {
        std::fill(row.begin(), row.end(), 0);
        // (F * rho_src - rho_tgt * F)[r][c] = 0
        for (std::size_t cp = 0; cp < s; ++cp)
          row[r * s + cp] = fp_add(row[r * s + cp], rs.at(cp, c), p);
        for (std::size_t rp = 0; rp < t; ++rp)
          row[rp * s + c] = fp_sub(row[rp * s + c], rt.at(r, rp), p);
        bool zero = std::all_of(row.begin(), row.end(),
                                [](std::uint32_t e) { return e == 0; });
        if (!zero) {
          rows.insert(rows.end(), row.begin(), row.end());
          ++nrows;
        }
      }
  }
  Matrix sys(p, nrows, unknowns, std::move(rows));
  Matrix k = kernel_basis(sys);
  std::vector<ModuleMorphism> basis;
  basis.reserve(k.cols);
  for (std::size_t j = 0; j < k.cols; ++j) {
    Matrix f(p, t, s);
    for (std::size_t idx = 0; idx < unknowns; ++idx) f.a[idx] = k.at(idx, j);
    basis.emplace_back(m, n, std::move(f));
  }
  return basis;
}

std::size_t hom_dim(const Module& m, const Module& n) { return hom_basis(m, n).size(); }

static Matrix flatten_basis(const std::vector<ModuleMorphism>& basis, std::uint32_t p,
                            std::size_t entries) {
  Matrix h(p, entries, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t idx = 0; idx < entries; ++idx) h.at(idx, j) = basis[j].mat.a[idx];
  return h;
}

std::vector<std::uint32_t> hom_coordinates(const ModuleMorphism& f,
                                           const std::vector<ModuleMorphism>& basis) {
  const std::uint32_t p = f.mat.p;
  const std::size_t entries = f.mat.rows * f.mat.cols;
  Matrix h = flatten_basis(basis, p, entries);
  auto sol = solve(h, vectorize(f.mat));
  if (!sol) throw Error("hom_coordinates: morphism not in the span of the basis");
  std::vector<std::uint32_t> coords(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) coords[j] = sol->at(j, 0);
  return coords;
}

ModuleMorphism from_hom_coordinates(const Module& m, const Module& n,
                                    const std::vector<ModuleMorphism>& basis,
                                    const std::vector<std::uint32_t>& coords) {
  Matrix f(m.alg->field.p, n.dim, m.dim);
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (coords[j] % f.p != 0) f = add(f, scalar_mul(coords[j], basis[j].mat));
  return ModuleMorphism(m, n, std::move(f));
}

Matrix hom_post_matrix(const ModuleMorphism& g,
                       const std::vector<ModuleMorphism>& basis_src,
                       const std::vector<ModuleMorphism>& basis_tgt) {
  const std::uint32_t p = g.mat.p;
  if (basis_tgt.empty()) {
    return Matrix(p, 0, basis_src.size());
  }
  const std::size_t e2 = basis_tgt[0].mat.rows * basis_tgt[0].mat.cols;
  Matrix h = flatten_basis(basis_tgt, p, e2);
  Matrix rhs(p, e2, basis_src.size());
  for (std::size_t j = 0; j < basis_src.size(); ++j) {
    Matrix comp = mul(g.mat, basis_src[j].mat);
    for (std::size_t idx = 0; idx < e2; ++idx) rhs.at(idx, j) = comp.a[idx];
  }
  auto sol = solve(h, rhs);
  if (!sol) throw Error("hom_post_matrix: composite not in target hom space");
  return *sol;
}

Matrix hom_pre_matrix(const ModuleMorphism& i,
                      const std::vector<ModuleMorphism>& basis_src,
                      const std::vector<ModuleMorphism>& basis_tgt) {
  const std::uint32_t p = i.mat.p;
  if (basis_tgt.empty()) return Matrix(p, 0, basis_src.size());
  const std::size_t e2 = basis_tgt[0].mat.rows * basis_tgt[0].mat.cols;
  Matrix h = flatten_basis(basis_tgt, p, e2);
  Matrix rhs(p, e2, basis_src.size());
  for (std::size_t j = 0; j < basis_src.size(); ++j) {
    Matrix comp = mul(basis_src[j].mat, i.mat);
    for (std::size_t idx = 0; idx < e2; ++idx) rhs.at(idx, j) = comp.a[idx];
  }
  auto sol = solve(h, rhs);
  if (!sol) throw Error("hom_pre_matrix: composite not in target hom space");
  return *sol;
}

bool is_conflation(const ShortExactSequence& s, const ExactStructure& e) {
  if (!ses_invariants_hold(s)) return false;
  if (e.is_abelian()) return true;
  for (const auto& g : e.generators) {
    auto basis_b = hom_basis(g, s.deflation.source);
    auto basis_c = hom_basis(g, s.deflation.target);
    Matrix post = hom_post_matrix(s.deflation, basis_b, basis_c);
    if (rank(post) != basis_c.size()) return false;
  }
  return true;
}

bool is_inflation(const ModuleMorphism& f, const ExactStructure& e) {
  if (!is_injective(f)) return false;
  if (e.is_abelian()) return true;
  return is_conflation(conflation_from_inflation(f), e);
}

bool is_deflation(const ModuleMorphism& f, const ExactStructure& e) {
  if (!is_surjective(f)) return false;
  if (e.is_abelian()) return true;
  return is_conflation(conflation_from_deflation(f), e);
}

ShortExactSequence conflation_from_inflation(const ModuleMorphism& f) {
  auto c = cokernel(f);
  return make_ses(f, c.projection);
}

ShortExactSequence conflation_from_deflation(const ModuleMorphism& f) {
  auto k = kernel(f);
  return make_ses(k.inclusion, f);
}

DirectSum direct_sum(const std::vector<Module>& ms, const AlgebraPtr& alg) {
  const std::uint32_t p = alg->field.p;
  std::size_t total = 0;
  for (const auto& m : ms) {
    if (!(*m.alg == *alg)) throw Error("direct_sum: algebra mismatch");
    total += m.dim;
  }
  std::vector<Matrix> act;
  act.reserve(alg->dim);
  for (std::size_t i = 0; i < alg->dim; ++i) {
    std::vector<Matrix> blocks;
    blocks.reserve(ms.size());
    for (const auto& m : ms) blocks.push_back(m.action[i]);
    act.push_back(block_diag(blocks, p));
  }
  Module obj(alg, total, std::move(act));
  DirectSum ds{std::move(obj), {}, {}};
  std::size_t off = 0;
  for (const auto& m : ms) {
    Matrix inj(p, total, m.dim);
    Matrix proj(p, m.dim, total);
    for (std::size_t j = 0; j < m.dim; ++j) {
      inj.at(off + j, j) = 1 % p;
      proj.at(j, off + j) = 1 % p;
    }
    ds.injections.emplace_back(m, ds.object, std::move(inj));
    ds.projections.emplace_back(ds.object, m, std::move(proj));
    off += m.dim;
  }
  return ds;
}

ModuleMorphism direct_sum_morphism(const std::vector<ModuleMorphism>& fs,
                                   const AlgebraPtr& alg) {
  std::vector<Module> srcs, tgts;
  std::vector<Matrix> mats;
  for (const auto& f : fs) {
    srcs.push_back(f.source);
    tgts.push_back(f.target);
    mats.push_back(f.mat);
  }
  auto s = direct_sum(srcs, alg);
  auto t = direct_sum(tgts, alg);
  return ModuleMorphism(s.object, t.object, block_diag(mats, alg->field.p));
}

ModuleMorphism submodule_spanned_by(const Module& m, const Matrix& vectors) {
  const std::uint32_t p = m.alg->field.p;
  SpanTracker span{p, m.dim, {}, {}};
  for (std::size_t j = 0; j < vectors.cols; ++j) {
    std::vector<std::uint32_t> v(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) v[i] = vectors.at(i, j);
    span.add(std::move(v));
  }
  bool grew = true;
  while (grew) {
    grew = false;
    auto snapshot = span.rows;
    for (const auto& v : snapshot) {
      Matrix vc(p, m.dim, 1);
      for (std::size_t i = 0; i < m.dim; ++i) vc.at(i, 0) = v[i];
      for (const auto& act : m.action) {
        Matrix w = mul(act, vc);
        std::vector<std::uint32_t> wv(w.a.begin(), w.a.end());
        if (span.add(std::move(wv))) grew = true;
      }
    }
  }
  Matrix basis(p, m.dim, span.rows.size());
  for (std::size_t j = 0; j < span.rows.size(); ++j)
    for (std::size_t i = 0; i < m.dim; ++i) basis.at(i, j) = span.rows[j][i];
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < m.alg->dim; ++i) {
    auto sol = solve(basis, mul(m.action[i], basis));
    if (!sol) throw Error("submodule_spanned_by: closure is not action-stable");
    act.push_back(std::move(*sol));
  }
  Module sub(m.alg, basis.cols, std::move(act));
  return ModuleMorphism(sub, m, basis);
}

std::optional<ModuleMorphism> find_isomorphism(const Module& m, const Module& n) {
  if (!same_algebra(m, n) || m.dim != n.dim) return std::nullopt;
  if (m.dim == 0) return zero_morphism(m, n);
  auto basis = hom_basis(m, n);
  if (basis.empty()) return std::nullopt;
  const std::uint32_t p = m.alg->field.p;
  const std::size_t h = basis.size();

  auto candidate = [&](const std::vector<std::uint32_t>& coords) -> std::optional<ModuleMorphism> {
    Matrix f(p, n.dim, m.dim);
    for (std::size_t j = 0; j < h; ++j)
      if (coords[j] != 0) f = add(f, scalar_mul(coords[j], basis[j].mat));
    if (rank(f) == m.dim) return ModuleMorphism(m, n, std::move(f));
    return std::nullopt;
  };

  double log_total = h * std::log2(double(p));
  if (log_total <= 16.0) {
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < h; ++j) total *= p;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
      std::vector<std::uint32_t> coords(h);
      std::uint64_t v = idx;
      for (std::size_t j = 0; j < h; ++j) {
        coords[j] = std::uint32_t(v % p);
        v /= p;
      }
      if (auto iso = candidate(coords)) return iso;
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
  for (int attempt = 0; attempt < (1 << 16); ++attempt) {
    std::vector<std::uint32_t> coords(h);
    for (auto& c : coords) c = dist(rng);
    if (auto iso = candidate(coords)) return iso;
  }
  return std::nullopt;
}

std::optional<ModuleMorphism> factor_through_deflation(const ModuleMorphism& f,
                                                       const ModuleMorphism& q) {
  if (!(f.source == q.source)) throw Error("factor_through_deflation: sources differ");
  auto sol = solve(transpose(q.mat), transpose(f.mat));
  if (!sol) return std::nullopt;
  ModuleMorphism g(q.target, f.target, transpose(*sol));
  if (!(mul(g.mat, q.mat) == f.mat)) return std::nullopt;
  return g;
}

std::optional<ModuleMorphism> factor_through_inflation(const ModuleMorphism& f,
                                                       const ModuleMorphism& i) {
  if (!(f.target == i.target)) throw Error("factor_through_inflation: targets differ");
  auto sol = solve(i.mat, f.mat);
  if (!sol) return std::nullopt;
  ModuleMorphism g(f.source, i.source, *sol);
  if (!(mul(i.mat, g.mat) == f.mat)) return std::nullopt;
  return g;
}

ModuleMorphism evaluation_morphism(const std::vector<Module>& sources,
                                   const std::vector<ModuleMorphism>& components,
                                   const Module& m) {
  const std::uint32_t p = m.alg->field.p;
  auto ds = direct_sum(sources, m.alg);
  Matrix ev(p, m.dim, ds.object.dim);
  std::size_t off = 0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const Matrix& cm = components[c].mat;
    for (std::size_t i = 0; i < m.dim; ++i)
      for (std::size_t j = 0; j < cm.cols; ++j) ev.at(i, off + j) = cm.at(i, j);
    off += cm.cols;
  }
  return ModuleMorphism(ds.object, m, std::move(ev));
}

}  // namespace excat
