#pragma once

// Computable exact categories: finite-dimensional modules over a
// finite-dimensional associative algebra given by structure constants,
// with the abelian exact structure or a relative structure cut out by a
// generator object G (conflations = sequences kept exact by Hom(G,-)).

#include "excat/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace excat {

/// Associative unital algebra over F_p with a distinguished basis e_0..e_{d-1}.
/// Products are recorded as structure constants: e_i * e_j = sum_k c[i][j][k] e_k.
/// Associativity and the two-sided unit law are verified at construction.
struct Algebra {
  FieldPrime field;
  std::size_t dim;
  // sc[(i*dim + j)*dim + k] = c[i][j][k]
  std::vector<std::uint32_t> sc;
  std::vector<std::uint32_t> unit;  // coordinates of 1
  // a minimal basis subset that generates the algebra together with the unit;
  // commuting with these action matrices implies commuting with all of them
  std::vector<std::size_t> generator_indices;

  Algebra(FieldPrime f, std::size_t d, std::vector<std::uint32_t> structure_constants,
          std::vector<std::uint32_t> unit_coords);

  std::uint32_t c(std::size_t i, std::size_t j, std::size_t k) const {
    return sc[(i * dim + j) * dim + k];
  }
  /// Coordinates of (x * y) for coordinate vectors x, y.
  std::vector<std::uint32_t> multiply(const std::vector<std::uint32_t>& x,
                                      const std::vector<std::uint32_t>& y) const;
  /// Matrix of left multiplication by e_i on the algebra itself.
  Matrix left_mult(std::size_t i) const;

  bool operator==(const Algebra& o) const {
    return field.p == o.field.p && dim == o.dim && sc == o.sc && unit == o.unit;
  }
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Finite module: a d-tuple of action matrices rho_i with
/// rho_i * rho_j = sum_k c[i][j][k] rho_k and unit acting as the identity.
/// Elements are coordinate column vectors; morphisms multiply from the left.
struct Module {
  AlgebraPtr alg;
  std::size_t dim = 0;
  std::vector<Matrix> action;  // alg->dim matrices, each dim x dim

  Module() = default;
  Module(AlgebraPtr a, std::size_t n, std::vector<Matrix> act);

  bool operator==(const Module& o) const {
    return *alg == *o.alg && dim == o.dim && action == o.action;
  }
};

bool same_algebra(const Module& m, const Module& n);

/// Zero module.
Module zero_module(const AlgebraPtr& alg);
/// The algebra as a module over itself (left regular representation).
Module regular_module(const AlgebraPtr& alg);

struct ModuleMorphism {
  Module source;
  Module target;
  Matrix mat;  // target.dim x source.dim

  ModuleMorphism() = default;
  ModuleMorphism(Module src, Module tgt, Matrix m);
};

ModuleMorphism zero_morphism(const Module& src, const Module& tgt);
ModuleMorphism identity_morphism(const Module& m);
/// g after f.
ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f);
ModuleMorphism add(const ModuleMorphism& f, const ModuleMorphism& g);
ModuleMorphism sub(const ModuleMorphism& f, const ModuleMorphism& g);

bool is_injective(const ModuleMorphism& f);
bool is_surjective(const ModuleMorphism& f);

/// Inflation-deflation pair A >-> B ->> C with im(inflation) = ker(deflation);
/// all four invariants are verified by make_ses.
struct ShortExactSequence {
  ModuleMorphism inflation;
  ModuleMorphism deflation;
};

ShortExactSequence make_ses(ModuleMorphism inflation, ModuleMorphism deflation);
/// True iff the pair satisfies the kernel-cokernel invariants.
bool ses_invariants_hold(const ShortExactSequence& s);

/// Exact structure: the abelian one, or the relative one determined by a
/// generator G (and optionally a direct-sum decomposition of G, used to keep
/// covers small; the decomposition never changes any verdict).
struct ExactStructure {
  enum class Kind { abelian, relative };
  Kind kind = Kind::abelian;
  std::vector<Module> generators;  // relative kind: G = direct sum of these

  static ExactStructure abelian() { return {}; }
  static ExactStructure relative(Module g);
  static ExactStructure relative_sum(std::vector<Module> parts);

  bool is_abelian() const { return kind == Kind::abelian; }
  /// The full generator (direct sum of parts).
  Module generator() const;
};

struct KernelResult {
  Module object;
  ModuleMorphism inclusion;  // object -> source(f)
};

struct CokernelResult {
  Module object;
  ModuleMorphism projection;  // target(f) -> object
};

KernelResult kernel(const ModuleMorphism& f);
CokernelResult cokernel(const ModuleMorphism& f);

/// Image factorization f = include . project through im(f).
struct ImageFactorization {
  Module image;
  ModuleMorphism project;  // source ->> image
  ModuleMorphism include;  // image >-> target
};
ImageFactorization image_factorization(const ModuleMorphism& f);

struct PushoutResult {
  Module object;                 // cokernel of (i, -f): A -> B (+) X
  ModuleMorphism from_target;    // B -> Y
  ModuleMorphism from_other;     // X -> Y
};
/// Pushout of the span B <-i- A -f-> X.
PushoutResult pushout(const ModuleMorphism& i, const ModuleMorphism& f);

struct PullbackResult {
  Module object;               // kernel of (p, -g): B (+) X -> C
  ModuleMorphism to_source;    // P -> B
  ModuleMorphism to_other;     // P -> X
};
/// Pullback of the cospan B -p-> C <-g- X.
PullbackResult pullback(const ModuleMorphism& p, const ModuleMorphism& g);

/// Basis of the F_p-space of module morphisms m -> n, in the deterministic
/// order induced by the kernel basis of the commuting-matrix system.
std::vector<ModuleMorphism> hom_basis(const Module& m, const Module& n);
std::size_t hom_dim(const Module& m, const Module& n);

/// Coordinates of f in the given hom basis (throws if f is not in the span).
std::vector<std::uint32_t> hom_coordinates(const ModuleMorphism& f,
                                           const std::vector<ModuleMorphism>& basis);
ModuleMorphism from_hom_coordinates(const Module& m, const Module& n,
                                    const std::vector<ModuleMorphism>& basis,
                                    const std::vector<std::uint32_t>& coords);

/// Matrix of phi |-> g . phi : Hom(w, source g) -> Hom(w, target g)
/// relative to the two hom bases.
Matrix hom_post_matrix(const ModuleMorphism& g,
                       const std::vector<ModuleMorphism>& basis_src,
                       const std::vector<ModuleMorphism>& basis_tgt);
/// Matrix of phi |-> phi . i : Hom(target i, w) -> Hom(source i, w).
Matrix hom_pre_matrix(const ModuleMorphism& i,
                      const std::vector<ModuleMorphism>& basis_src,
                      const std::vector<ModuleMorphism>& basis_tgt);

/// Conflation membership test for the chosen exact structure. Abelian kind
/// accepts every kernel-cokernel pair; relative kind additionally requires
/// Hom(G,-) to keep the sequence exact (a rank test on postcomposition).
bool is_conflation(const ShortExactSequence& s, const ExactStructure& e);

bool is_inflation(const ModuleMorphism& f, const ExactStructure& e);
bool is_deflation(const ModuleMorphism& f, const ExactStructure& e);

/// Completes an injective f (resp. surjective) to a kernel-cokernel pair.
ShortExactSequence conflation_from_inflation(const ModuleMorphism& f);
ShortExactSequence conflation_from_deflation(const ModuleMorphism& f);

struct DirectSum {
  Module object;
  std::vector<ModuleMorphism> injections;
  std::vector<ModuleMorphism> projections;
};
DirectSum direct_sum(const std::vector<Module>& ms, const AlgebraPtr& alg);

/// Direct sum of morphisms, block-diagonal on the summands.
ModuleMorphism direct_sum_morphism(const std::vector<ModuleMorphism>& fs,
                                   const AlgebraPtr& alg);

/// Smallest submodule of m containing the given coordinate vectors
/// (columns of `vectors`); returns its inclusion.
ModuleMorphism submodule_spanned_by(const Module& m, const Matrix& vectors);

/// Explicit isomorphism m -> n if one exists. Searches the hom space
/// deterministically (exhaustively for small spaces, seeded sampling above
/// 2^16 candidates).
std::optional<ModuleMorphism> find_isomorphism(const Module& m, const Module& n);

/// Evaluation deflation (+) G_c ->> m from the listed hom components.
ModuleMorphism evaluation_morphism(const std::vector<Module>& sources,
                                   const std::vector<ModuleMorphism>& components,
                                   const Module& m);

/// For surjective q: S ->> Q and f: S -> T, the unique g: Q -> T with
/// g . q = f, when f kills ker q.
std::optional<ModuleMorphism> factor_through_deflation(const ModuleMorphism& f,
                                                       const ModuleMorphism& q);
/// For injective i: K >-> S and f: T -> S, the unique g: T -> K with
/// i . g = f, when im f lies inside im i.
std::optional<ModuleMorphism> factor_through_inflation(const ModuleMorphism& f,
                                                       const ModuleMorphism& i);

}  // namespace excat
