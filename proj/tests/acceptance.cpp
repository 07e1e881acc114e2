// Acceptance suite: one line per criterion, all verified at zero tolerance
// (exact field arithmetic throughout). Exits nonzero if any criterion fails.

#include "fixtures.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace excat;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<bool()>& run) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = run();
  } catch (const std::exception& e) {
    ok = false;
    note = std::string(" [exception: ") + e.what() + "]";
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::printf("%s criterion %d: %s (%lld ms)%s\n", ok ? "PASS" : "FAIL", number,
              label.c_str(), static_cast<long long>(ms), note.c_str());
  if (!ok) ++failures;
}

const AlgebraPtr A2 = fx::dual_numbers(2);
const ExactStructure AB = ExactStructure::abelian();

bool criterion1_factorization_contract() {
  MorphismSet I = fx::fixture_set(A2);
  Module z = zero_module(A2);
  auto universe = fx::fixture_universe(A2);
  if (universe.size() != 16) return false;
  for (const auto& m : universe) {
    if (m.dim > 3) return false;
    for (int dir = 0; dir < 2; ++dir) {
      ModuleMorphism f = dir == 0 ? zero_morphism(m, z) : zero_morphism(z, m);
      Factorization fact = factorize(f, I, 8);
      if (!fact.completed) return false;
      ModuleMorphism gamma = replay(fact.trace, I);
      if (!(mul(fact.residual.mat, gamma.mat) == f.mat)) return false;
      // linear RLP of the residual against every member separately
      for (const auto& i : I.members) {
        MorphismSet single = make_morphism_set("one", {i}, AB);
        if (!has_rlp(fact.residual, single)) return false;
      }
    }
  }
  return true;
}

bool criterion2_rlp_equals_brute_force() {
  Module a = fx::regular(A2), k = fx::simple(A2);
  Module z = zero_module(A2);
  auto ds = direct_sum({a, k}, A2);
  std::vector<ModuleMorphism> pool = {
      fx::socle_inclusion(A2), fx::quotient_map(A2), fx::x_multiplication(A2),
      identity_morphism(k),    identity_morphism(a), fx::free_unit(A2),
      zero_morphism(k, z),     zero_morphism(z, k),  zero_morphism(k, a),
      zero_morphism(a, k),     ds.injections[0],     ds.injections[1],
      ds.projections[0],       ds.projections[1]};
  std::size_t compared = 0;
  for (const auto& i : pool)
    for (const auto& p : pool) {
      std::size_t f_dim = hom_dim(i.source, p.source);
      std::size_t g_dim = hom_dim(i.target, p.target);
      if (f_dim + g_dim > 8) continue;  // square count above 2^8
      ++compared;
      // has_llp runs the same rank test without requiring i to be an
      // inflation, so every fixture pair can be compared
      if (has_llp(i, {p}) != fx::rlp_brute_force(i, p)) return false;
    }
  std::printf("  (criterion 2 compared %zu pairs)\n", compared);
  return compared > 0;
}

bool criterion3_ext_oracle() {
  Module a = fx::regular(A2), k = fx::simple(A2);

  // classification sanity at enumerable dimensions: every module structure
  // is isomorphic to a canonical k^a (+) A^b
  for (std::size_t n = 1; n <= 4; ++n) {
    auto all = fx::all_modules_of_dim(A2, n);
    auto canon = fx::canonical_modules_of_dim(A2, n);
    for (const auto& m : all) {
      bool matched = false;
      for (const auto& c : canon)
        if (find_isomorphism(m, c)) {
          matched = true;
          break;
        }
      if (!matched) return false;
    }
  }

  if (ext1(k, k, AB).dim != 1) return false;
  if (fx::count_extension_classes(k, k) != 2) return false;

  if (ext1(k, a, AB).dim != 0) return false;
  if (fx::count_extension_classes(a, k) != 1) return false;

  for (const auto& m : fx::fixture_universe(A2)) {
    if (ext1(a, m, AB).dim != 0) return false;
    if (fx::count_extension_classes(m, a) != 1) return false;
  }
  return true;
}

bool criterion4_eklof() {
  Module a = fx::regular(A2), k = fx::simple(A2);
  std::mt19937_64 rng(0xe10f);

  auto run_batch = [&](const Module& target, const std::vector<Module>& pool,
                       int count) -> bool {
    for (int trial = 0; trial < count; ++trial) {
      Filtration flt = fx::random_filtration(A2, pool, 1 + rng() % 4, rng);
      for (const auto& c : flt.cokernels)
        if (ext1(c, target, AB).dim != 0) return false;  // pool must be in perp
      Module top = flt.steps.back().inflation.target;
      ExtGroup e = ext1(top, target, AB);
      if (e.dim != 0) return false;
      auto cocycles = hom_basis(e.resolution.syzygy(), target);
      cocycles.push_back(zero_morphism(e.resolution.syzygy(), target));
      for (const auto& c : cocycles) {
        ShortExactSequence cls = extension_from_cocycle(c, e.resolution);
        ModuleMorphism s = eklof_splitting(flt, target, cls, AB);
        if (!mul(cls.deflation.mat, s.mat).is_identity()) return false;
      }
    }
    return true;
  };

  std::vector<Module> mixed = {k, a, direct_sum({k, a}, A2).object,
                               fx::from_x_action(A2, Matrix(2, 2, 2))};
  std::vector<Module> projective = {a, direct_sum({a, a}, A2).object};
  return run_batch(a, mixed, 25) && run_batch(k, projective, 25);
}

bool criterion5_completeness_sequences() {
  MorphismSet I = fx::fixture_set(A2);
  auto coks = cok_members(I);
  for (const auto& m : fx::fixture_universe(A2)) {
    Preenvelope pe = special_preenvelope(m, I, 8, AB);
    if (!is_conflation(pe.seq, AB)) return false;
    if (!pe.target_certified) return false;
    for (const auto& c : coks)
      if (ext1(c, pe.seq.inflation.target, AB).dim != 0) return false;

    Precover pc = special_precover(m, I, 8, AB);
    if (!is_conflation(pc.seq, AB)) return false;
    if (!pc.kernel_certified) return false;
    for (const auto& c : coks)
      if (ext1(c, pc.seq.inflation.source, AB).dim != 0) return false;
  }
  return true;
}

bool criterion6_summand_witness() {
  MorphismSet I = fx::fixture_set(A2);
  auto universe = fx::fixture_universe(A2);
  auto coks = cok_members(I);

  // universe-relative right perp, then left-perp certification against it
  std::vector<Module> right_perp;
  for (const auto& u : universe)
    if (in_right_perp(u, coks, AB)) right_perp.push_back(u);

  std::size_t certified = 0;
  for (const auto& m : universe) {
    bool left = true;
    for (const auto& u : right_perp)
      if (ext1(m, u, AB).dim != 0) {
        left = false;
        break;
      }
    if (!left) continue;
    ++certified;
    SummandWitness w = summand_of_cell_check(m, I, 8, AB);
    if (w.kind != SummandVerdictKind::certified) return false;
    if (!w.decomposition_verified) return false;
    if (!mul(w.precover.seq.deflation.mat, w.section->mat).is_identity())
      return false;
    // explicit decomposition: [section | kernel inclusion] is invertible
    Matrix dec = hstack(w.section->mat, w.complement->mat);
    if (!inverse(dec)) return false;
  }
  std::printf("  (criterion 6 certified %zu left-perp objects)\n", certified);
  return certified > 0;
}

bool criterion7_complex_completeness() {
  Module a = fx::regular(A2), k = fx::simple(A2);
  const int lo = -2, hi = 2;

  std::vector<Complex> universe;
  std::vector<std::string> names;
  auto addc = [&](const Complex& c, const std::string& n) {
    universe.push_back(pad_complex(c, lo, hi));
    names.push_back(n);
  };
  addc(zero_complex(A2, -1, 1), "zero");
  addc(sphere(k, 0, -1, 1), "S0(k)");
  addc(sphere(a, 0, -1, 1), "S0(A)");
  addc(sphere(k, -1, -1, 1), "S-1(k)");
  addc(disk(a, 0, -1, 1), "D0(A)");
  addc(disk(k, 0, -1, 1), "D0(k)");
  addc(disk(a, -1, -1, 1), "D-1(A)");
  addc(make_complex(A2, 0, 1, {a, a}, {fx::x_multiplication(A2)}), "AxA");
  addc(make_complex(A2, -1, 1, {k, a, k},
                    {fx::socle_inclusion(A2), fx::quotient_map(A2)}),
       "kAk");
  addc(sphere(direct_sum({a, k}, A2).object, 1, -1, 1), "S1(A+k)");

  CompletenessReport rep =
      verify_complex_completeness({a, k}, lo, hi, universe, names, 12, 30, 0xc042);
  if (rep.generating_count != 16) return false;
  if (!rep.generators_are_inflations) return false;
  if (!rep.homological.holds) return false;
  for (const auto& item : rep.items) {
    if (item.budget_exhausted) return false;
    if (!item.preenvelope_ok || !item.precover_ok) return false;
    if (!item.preenvelope_degreewise || !item.precover_degreewise) return false;
    if (item.left_perp_member && !(item.summand_ok && item.filtration_ok))
      return false;
  }
  if (rep.bridge_checks_total < 30 * 4) return false;
  if (rep.bridge_checks_passed != rep.bridge_checks_total) return false;
  return rep.all_ok;
}

bool criterion8_g_exactness_discriminator() {
  Module a = fx::regular(A2), k = fx::simple(A2);
  Module g = direct_sum({a, k}, A2).object;

  ShortExactSequence ses = make_ses(fx::socle_inclusion(A2), fx::quotient_map(A2));
  if (is_conflation(ses, ExactStructure::relative(g))) return false;
  if (!is_conflation(ses, AB)) return false;

  Complex ax = make_complex(A2, 0, 1, {a, a}, {fx::x_multiplication(A2)});
  if (is_g_acyclic(ax, g).acyclic) return false;
  return true;
}

}  // namespace

int main() {
  std::printf("acceptance suite: fixture F_2[x]/(x^2), exact arithmetic\n");
  criterion(1, "factorization contract on the fixture universe (budget 8)",
            criterion1_factorization_contract);
  criterion(2, "RLP rank test agrees with brute-force square enumeration",
            criterion2_rlp_equals_brute_force);
  criterion(3, "Ext dimensions match the extension-enumeration oracle",
            criterion3_ext_oracle);
  criterion(4, "50 random filtrations split constructively with exact sections",
            criterion4_eklof);
  criterion(5, "both approximation sequences exist and re-verify for all objects",
            criterion5_completeness_sequences);
  criterion(6, "left-perp objects decompose as summands of cell complexes",
            criterion6_summand_witness);
  criterion(7, "complex-category completeness run over window [-2,2]",
            criterion7_complex_completeness);
  criterion(8, "relative exactness discriminators",
            criterion8_g_exactness_discriminator);
  if (failures == 0)
    std::printf("all 8 criteria passed\n");
  else
    std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
