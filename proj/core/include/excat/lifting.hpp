#pragma once

// Lifting problems, RLP/LLP rank tests, cell attachment, and the budgeted
// factorization engine. A CellTrace is a replayable record of
// pushout-of-coproduct attachment stages; replaying it from its start object
// must reproduce every stored stage bit for bit.

#include "excat/modcat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace excat {

/// A named set of morphisms used as the generating set I. Members are
/// required to be inflations in the active exact structure at build time.
struct MorphismSet {
  std::string label;
  std::vector<ModuleMorphism> members;
};

MorphismSet make_morphism_set(std::string label, std::vector<ModuleMorphism> members,
                              const ExactStructure& e);

/// Commuting square: p . f = g . i, with i: A -> B on the left and
/// p: X -> Y on the right.
struct LiftingProblem {
  ModuleMorphism i;
  ModuleMorphism p;
  ModuleMorphism f;  // A -> X
  ModuleMorphism g;  // B -> Y
};

LiftingProblem make_lifting_problem(ModuleMorphism i, ModuleMorphism p,
                                    ModuleMorphism f, ModuleMorphism g);

/// Diagonal filler h: B -> X with h.i = f and p.h = g, or nullopt.
/// The solution is canonical (free variables of the stacked system are 0).
std::optional<ModuleMorphism> solve_lift(const LiftingProblem& lp);

/// Membership of p in I-inj, decided by the rank test: squares and lifts
/// against each member form F_p-spaces, so p has the RLP iff
/// Hom(B,X) -> {(f,g) : p.f = g.i} is surjective.
bool has_rlp(const ModuleMorphism& p, const MorphismSet& I);

/// Dual rank test of i against each morphism in the sample P. This certifies
/// LLP relative to the finite sample only.
bool has_llp(const ModuleMorphism& i, const std::vector<ModuleMorphism>& P);

/// One cell = one unsolved-square basis vector for one member of I.
struct CellAttachment {
  std::size_t member;  // index into I.members
  Matrix attach;       // source(I.members[member]) -> current object
};

/// One attachment stage: the pushout of the coproduct of the listed members
/// along the combined attaching map. `step` is X_n -> X_{n+1},
/// `coproduct_leg` is (+) targets -> X_{n+1}.
struct CellStage {
  std::vector<CellAttachment> cells;
  Module result;
  Matrix step;
  Matrix coproduct_leg;
};

struct CellTrace {
  Module start;
  std::vector<CellStage> stages;
  Module end;
};

CellTrace empty_trace(const Module& at);

/// Composite start -> end assembled from the stored stage maps.
ModuleMorphism trace_composite(const CellTrace& t);

/// Recompute every stage from the recorded attaching data and compare with
/// the stored pushout data; throws on any mismatch. Returns the composite.
ModuleMorphism replay(const CellTrace& t, const MorphismSet& I);

struct StageResult {
  CellStage stage;
  ModuleMorphism next;  // X_{n+1} -> Y
  bool attached = false;
};

/// Computes a basis of the unsolved-square space of `current` against each
/// member of I (the fiber-product space modulo the image of Hom(B, X_n)) and
/// attaches one cell per basis element. Attaching basis vectors suffices:
/// lifts of linear combinations are the same linear combinations of lifts.
StageResult attach_stage(const ModuleMorphism& current, const MorphismSet& I);

/// Dimensions of the unsolved-square spaces per member of I (diagnostic).
std::vector<std::size_t> unsolved_square_dims(const ModuleMorphism& current,
                                              const MorphismSet& I);

struct Factorization {
  CellTrace trace;          // gamma, a relative I-cell complex by construction
  ModuleMorphism residual;  // delta, with delta . replay(trace) = f
  bool completed = false;   // false = budget exhausted
  std::vector<std::size_t> unsolved_dims;  // per member, when exhausted
};

/// Budgeted finite-stage factorization f = delta . gamma with gamma in
/// I-cell and delta in I-inj. Stops as soon as delta acquires the RLP;
/// reports a partial trace if `budget` stages do not suffice.
Factorization factorize(const ModuleMorphism& f, const MorphismSet& I,
                        std::size_t budget);

/// Concatenation; requires t1.end == t2.start exactly.
CellTrace compose_traces(const CellTrace& t1, const CellTrace& t2);

struct PushedTrace {
  CellTrace trace;     // from target(g)
  ModuleMorphism top;  // t.end -> trace.end closing the pushout square
};

/// Stagewise pushout of a trace along g: t.start -> E, following the
/// square-by-square induction; the replay of the result is the pushout of
/// replay(t) along g.
PushedTrace pushout_trace(const CellTrace& t, const MorphismSet& I,
                          const ModuleMorphism& g);

/// Single trace from 0 to the iterated sum of the ends, built by attaching
/// each summand's trace pushed out along the inclusion of what came before.
CellTrace coproduct_of_cells(const std::vector<CellTrace>& traces,
                             const MorphismSet& I, const AlgebraPtr& alg);

/// Chain of inflations with identified cokernels.
struct Filtration {
  std::vector<ShortExactSequence> steps;
  std::vector<Module> cokernels;
};

Filtration make_filtration(std::vector<ShortExactSequence> steps);

struct TraceFiltration {
  Filtration filtration;
  std::vector<Module> cok_sums;          // direct sum of member cokernels per stage
  std::vector<ModuleMorphism> cok_isos;  // cok_sums[j] -> filtration.cokernels[j]
};

/// Reads a trace from 0 as a filtration whose step cokernels are identified,
/// by explicit isomorphism, with direct sums of members of Cok I.
TraceFiltration trace_to_filtration(const CellTrace& t, const MorphismSet& I);

/// The stagewise lift of Lemma-style cell induction: given p in I-inj and a
/// commuting square (u, v) around replay(t), builds h: t.end -> source(p)
/// with h . replay(t) = u and p . h = v, cell by cell.
std::optional<ModuleMorphism> lift_through_trace(const CellTrace& t, const MorphismSet& I,
                                                 const ModuleMorphism& p,
                                                 const ModuleMorphism& u,
                                                 const ModuleMorphism& v);

}  // namespace excat
