#pragma once

// Shared fixtures and independent oracles for the test suites.
//
// The standard fixture is F_p[x]/(x^2) ("dual numbers") with the simple
// module k and the regular module A. The oracles here are deliberately
// primitive: exhaustive enumeration of module structures, hom elements,
// commuting squares and extension triples. They share no code path with the
// engine computations they check.

#include "excat/chaincx.hpp"
#include "excat/cotorsion.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace fx {

using namespace excat;

inline AlgebraPtr dual_numbers(std::uint32_t p = 2) {
  // basis {1, x}, x^2 = 0
  std::size_t d = 2;
  std::vector<std::uint32_t> sc(d * d * d, 0);
  auto set = [&](std::size_t i, std::size_t j, std::size_t k, std::uint32_t v) {
    sc[(i * d + j) * d + k] = v;
  };
  set(0, 0, 0, 1);
  set(0, 1, 1, 1);
  set(1, 0, 1, 1);
  return std::make_shared<const Algebra>(FieldPrime(p), d, sc,
                                         std::vector<std::uint32_t>{1, 0});
}

inline Matrix mat(std::uint32_t p, std::size_t r, std::size_t c,
                  std::vector<std::uint32_t> e) {
  return Matrix(p, r, c, std::move(e));
}

// module over the dual numbers from the action of x (1 acts as identity)
inline Module from_x_action(const AlgebraPtr& alg, const Matrix& t) {
  return Module(alg, t.rows, {Matrix::identity(alg->field.p, t.rows), t});
}

inline Module simple(const AlgebraPtr& alg) {
  return from_x_action(alg, Matrix(alg->field.p, 1, 1));
}

inline Module regular(const AlgebraPtr& alg) { return regular_module(alg); }

inline ModuleMorphism socle_inclusion(const AlgebraPtr& alg) {
  return ModuleMorphism(simple(alg), regular(alg),
                        mat(alg->field.p, 2, 1, {0, 1}));
}

inline ModuleMorphism quotient_map(const AlgebraPtr& alg) {
  return ModuleMorphism(regular(alg), simple(alg), mat(alg->field.p, 1, 2, {1, 0}));
}

inline ModuleMorphism x_multiplication(const AlgebraPtr& alg) {
  return ModuleMorphism(regular(alg), regular(alg),
                        mat(alg->field.p, 2, 2, {0, 0, 1, 0}));
}

inline ModuleMorphism free_unit(const AlgebraPtr& alg) {
  return zero_morphism(zero_module(alg), regular(alg));  // 0 >-> A
}

// the standard generating set {socle: k >-> A, 0 >-> A}
inline MorphismSet fixture_set(const AlgebraPtr& alg) {
  return make_morphism_set("fixture",
                           {socle_inclusion(alg), free_unit(alg)},
                           ExactStructure::abelian());
}

// 16 module presentations of dimension <= 3: zero, k, k^2, three copies of A
// in different bases, k^3, and nine rank-one nilpotents on F^3
inline std::vector<Module> fixture_universe(const AlgebraPtr& alg) {
  const std::uint32_t p = alg->field.p;
  std::vector<Module> out;
  out.push_back(zero_module(alg));
  out.push_back(simple(alg));
  out.push_back(from_x_action(alg, Matrix(p, 2, 2)));  // k^2
  const std::vector<Matrix> nil2 = {mat(p, 2, 2, {0, 0, 1, 0}),
                                    mat(p, 2, 2, {0, 1, 0, 0}),
                                    mat(p, 2, 2, {1, 1, 1, 1})};
  for (const auto& t : nil2) out.push_back(from_x_action(alg, t));
  out.push_back(from_x_action(alg, Matrix(p, 3, 3)));  // k^3
  const std::size_t pos[3][2] = {{0, 1}, {1, 2}, {0, 2}};
  for (const auto& t : nil2)
    for (const auto& pr : pos) {
      Matrix t3(p, 3, 3);
      t3.at(pr[0], pr[0]) = t.at(0, 0);
      t3.at(pr[0], pr[1]) = t.at(0, 1);
      t3.at(pr[1], pr[0]) = t.at(1, 0);
      t3.at(pr[1], pr[1]) = t.at(1, 1);
      out.push_back(from_x_action(alg, t3));
    }
  return out;
}

// ---------------------------------------------------------------------------
// enumeration oracles (dual numbers only)

inline void require_dual_numbers(const AlgebraPtr& alg) {
  if (alg->dim != 2 || alg->c(1, 1, 0) != 0 || alg->c(1, 1, 1) != 0)
    throw Error("oracle only implemented for F_p[x]/(x^2)");
}

// every module structure on F_p^n: all T with T^2 = 0
inline std::vector<Module> all_modules_of_dim(const AlgebraPtr& alg, std::size_t n) {
  require_dual_numbers(alg);
  const std::uint32_t p = alg->field.p;
  std::vector<Module> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n * n; ++i) total *= p;
  for (std::uint64_t code = 0; code < total; ++code) {
    Matrix t(p, n, n);
    std::uint64_t v = code;
    for (std::size_t i = 0; i < n * n; ++i) {
      t.a[i] = std::uint32_t(v % p);
      v /= p;
    }
    if (mul(t, t).is_zero()) out.push_back(from_x_action(alg, t));
  }
  return out;
}

// canonical representatives k^a (+) A^b of dimension n
inline std::vector<Module> canonical_modules_of_dim(const AlgebraPtr& alg, std::size_t n) {
  std::vector<Module> out;
  for (std::size_t b = 0; 2 * b <= n; ++b) {
    std::size_t a = n - 2 * b;
    std::vector<Module> parts(a, simple(alg));
    parts.insert(parts.end(), b, regular(alg));
    out.push_back(direct_sum(parts, alg).object);
  }
  return out;
}

// all p^h elements of Hom(m, n); guarded against blowup
inline std::vector<ModuleMorphism> all_homs(const Module& m, const Module& n) {
  auto basis = hom_basis(m, n);
  const std::uint32_t p = m.alg->field.p;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    total *= p;
    if (total > (1u << 16)) throw Error("all_homs: hom space too large to enumerate");
  }
  std::vector<ModuleMorphism> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<std::uint32_t> coords(basis.size());
    std::uint64_t v = code;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      coords[i] = std::uint32_t(v % p);
      v /= p;
    }
    out.push_back(from_hom_coordinates(m, n, basis, coords));
  }
  return out;
}

// number of equivalence classes of extensions n >-> E ->> m, by enumerating
// middles and inflation/deflation pairs; equivalence is the solvability of
// the comparison square (the short five lemma makes any solution an iso)
inline std::size_t count_extension_classes(const Module& n, const Module& m) {
  const std::size_t mid = n.dim + m.dim;
  std::vector<Module> middles = mid <= 4 ? all_modules_of_dim(n.alg, mid)
                                         : canonical_modules_of_dim(n.alg, mid);
  struct Triple {
    std::size_t e;
    ModuleMorphism i, q;
  };
  // equivalence of extensions is an equivalence relation, so classifying
  // against one representative per class suffices
  std::vector<Triple> reps;
  for (std::size_t e = 0; e < middles.size(); ++e) {
    for (const auto& i : all_homs(n, middles[e])) {
      if (!is_injective(i)) continue;
      for (const auto& q : all_homs(middles[e], m)) {
        if (!is_surjective(q)) continue;
        if (!mul(q.mat, i.mat).is_zero()) continue;
        Triple t{e, i, q};
        bool known = false;
        for (const auto& r : reps) {
          auto h = solve_lift(make_lifting_problem(r.i, t.q, t.i, r.q));
          if (h) {
            known = true;
            break;
          }
        }
        if (!known) reps.push_back(std::move(t));
      }
    }
  }
  return reps.size();
}

// exhaustive RLP: every commuting square admits a lift found by enumeration
inline bool rlp_brute_force(const ModuleMorphism& i, const ModuleMorphism& p) {
  auto fs = all_homs(i.source, p.source);
  auto gs = all_homs(i.target, p.target);
  auto hs = all_homs(i.target, p.source);
  for (const auto& f : fs)
    for (const auto& g : gs) {
      if (!(mul(p.mat, f.mat) == mul(g.mat, i.mat))) continue;
      bool lifted = false;
      for (const auto& h : hs)
        if (mul(h.mat, i.mat) == f.mat && mul(p.mat, h.mat) == g.mat) {
          lifted = true;
          break;
        }
      if (!lifted) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// random generators (seeded, any algebra)

inline Module random_module(const AlgebraPtr& alg, std::mt19937_64& rng,
                            std::size_t max_free_rank = 2) {
  std::size_t r = rng() % (max_free_rank + 1);
  if (r == 0) return zero_module(alg);
  std::vector<Module> copies(r, regular_module(alg));
  Module free = direct_sum(copies, alg).object;
  std::size_t nvec = rng() % 3;
  Matrix vs(alg->field.p, free.dim, nvec);
  for (auto& e : vs.a) e = std::uint32_t(rng() % alg->field.p);
  ModuleMorphism sub = submodule_spanned_by(free, vs);
  if (rng() % 2 == 0) return sub.source;
  return cokernel(sub).object;
}

inline ModuleMorphism random_morphism(const Module& m, const Module& n,
                                      std::mt19937_64& rng) {
  auto basis = hom_basis(m, n);
  Matrix f(m.alg->field.p, n.dim, m.dim);
  for (const auto& b : basis)
    if (rng() % 2 == 1) f = add(f, b.mat);
  return ModuleMorphism(m, n, std::move(f));
}

// random short exact sequence: a random submodule inclusion and its cokernel
inline ShortExactSequence random_ses(const AlgebraPtr& alg, std::mt19937_64& rng) {
  Module m = random_module(alg, rng);
  std::size_t nvec = 1 + rng() % 2;
  Matrix vs(alg->field.p, m.dim, nvec);
  for (auto& e : vs.a) e = std::uint32_t(rng() % alg->field.p);
  ModuleMorphism sub = submodule_spanned_by(m, vs);
  return conflation_from_inflation(sub);
}

// random filtration 0 = X_0 >-> X_1 >-> ... with cokernels drawn from the
// pool; each step is a randomly realized extension of the next cokernel by
// the stage built so far
inline Filtration random_filtration(const AlgebraPtr& alg,
                                    const std::vector<Module>& pool,
                                    std::size_t length, std::mt19937_64& rng) {
  std::vector<ShortExactSequence> steps;
  Module x = zero_module(alg);
  for (std::size_t j = 0; j < length; ++j) {
    const Module& c = pool[rng() % pool.size()];
    Resolution res = relative_projective_cover(c, ExactStructure::abelian());
    ModuleMorphism z = random_morphism(res.syzygy(), x, rng);
    ShortExactSequence ses = extension_from_cocycle(z, res);
    steps.push_back(ses);
    x = ses.inflation.target;
  }
  return make_filtration(std::move(steps));
}

}  // namespace fx
