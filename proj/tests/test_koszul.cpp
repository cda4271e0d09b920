#include <gtest/gtest.h>

#include <thread>

#include "gorlab/homology.hpp"
#include "gorlab/koszul.hpp"

using namespace gorlab;

namespace {

RingPtr r3() { return identity_form_ring(101, 3); }
FiniteModule k_of(const RingPtr& r) { return FiniteModule::residue_field(r); }
FiniteModule m1(const RingPtr& r) { return cyclic_module(r, {RingElement::x(r, 0)}).module; }
FiniteModule r_mod_m2(const RingPtr& r) { return cyclic_module(r, {RingElement::w(r)}).module; }

bool iota_vanishes_against_k(const FiniteModule& m, std::size_t top) {
  auto inc = radical_submodule(m);
  for (auto& r : tor_induced_by_second(inc.map, FiniteModule::residue_field(m.ring()), 0, top))
    if (r.rank) return false;
  return true;
}

}  // namespace

TEST(IsKoszul, SpecExamples) {
  auto r = r3();
  EXPECT_TRUE(is_koszul(m1(r)).koszul);
  EXPECT_TRUE(is_koszul(k_of(r)).koszul);
  auto v = is_koszul(r_mod_m2(r));
  EXPECT_FALSE(v.koszul);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->j, 1u);
  EXPECT_TRUE(witness_valid(r_mod_m2(r), *v.witness));
}

TEST(IsKoszul, FreeModulesAndFreeSummands) {
  auto r = r3();
  auto f = FiniteModule::free(r, 2);
  auto v = is_koszul(f);
  EXPECT_TRUE(v.koszul);
  EXPECT_EQ(v.free_rank, 2u);
  EXPECT_EQ(v.i_max, 0u);
  auto mixed = direct_sum(FiniteModule::free(r, 1), r_mod_m2(r));
  auto w = is_koszul(mixed);
  EXPECT_FALSE(w.koszul);
  EXPECT_EQ(w.free_rank, 1u);
  ASSERT_TRUE(w.witness.has_value());
  EXPECT_TRUE(witness_valid(mixed, *w.witness));
}

TEST(IsKoszul, NegativeSyzygiesAreNotKoszul) {
  auto r = r3();
  for (std::size_t i = 1; i <= 3; ++i) {
    auto m = k_negative(r, i);
    auto v = is_koszul(m);
    EXPECT_FALSE(v.koszul) << "i = " << i;
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.witness->j, i);
    EXPECT_TRUE(witness_valid(m, *v.witness));
  }
}

TEST(IsKoszul, CyclicClassification) {
  for (auto r : {r3(), hyperbolic_form_ring(101, 4)}) {
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto pres = random_presentation(r, 1, 1 + seed % 3, seed);
      std::vector<RingElement> gens;
      for (std::size_t c = 0; c < pres.relations(); ++c) gens.push_back(pres.matrix.element(0, c));
      bool unit = false;
      for (auto& g : gens) unit = unit || g.is_unit();
      if (unit) continue;
      auto cyc = cyclic_module(r, gens).module;
      const bool is_m2 = cyc.dim() == r->dim() - 1;
      EXPECT_EQ(is_koszul(cyc).koszul, !is_m2) << "seed " << seed;
      ++checked;
    }
    EXPECT_GE(checked, 20u);
  }
}

TEST(KNegative, SpecExamples) {
  auto r = r3();
  auto k1 = k_negative(r, 1);
  EXPECT_EQ(k1.dim(), 4u);
  EXPECT_EQ(hilbert_layers(k1), hilbert_layers(r_mod_m2(r)));
  auto b = betti_numbers(k_of(r), 3);
  for (std::size_t i = 1; i <= 4; ++i) EXPECT_EQ(nu(k_negative(r, i)), b[i - 1]);
  EXPECT_EQ(nu(k_negative(r, 2)), 3u);
  EXPECT_THROW(k_negative(r, 0), Error);
}

TEST(KNegative, CacheIsThreadSafe) {
  auto r = hyperbolic_form_ring(103, 3);
  std::vector<FiniteModule> got(4, FiniteModule::zero(r));
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t) ts.emplace_back([&, t] { got[t] = k_negative(r, 3); });
  for (auto& t : ts) t.join();
  for (auto& g : got) EXPECT_EQ(g, got[0]);
}

TEST(KoszulSeries, SpecExamples) {
  auto r = r3();
  auto a = koszul_series_check(m1(r), 8);
  EXPECT_FALSE(a.first_mismatch.has_value());
  EXPECT_TRUE(a.verdict_koszul);
  EXPECT_TRUE(a.consistent);
  auto b = koszul_series_check(r_mod_m2(r), 6);
  ASSERT_TRUE(b.first_mismatch.has_value());
  EXPECT_EQ(*b.first_mismatch, 1u);
  EXPECT_FALSE(b.verdict_koszul);
  EXPECT_TRUE(b.consistent);
  EXPECT_TRUE(koszul_series_check(k_of(r), 8).consistent);
  EXPECT_THROW(koszul_series_check(FiniteModule::free(r, 1), 3), Error);
}

TEST(KoszulSeries, AgreesWithIotaVanishing) {
  auto r = hyperbolic_form_ring(101, 3);
  int koszul = 0, not_koszul = 0;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    auto base = random_module(r, 1 + seed % 3, 1 + seed % 4, seed);
    auto m = seed % 3 == 0 ? direct_sum(syzygy(base, 1), k_negative(r, 1)) : syzygy(base, 1);
    auto v = is_koszul(m);
    EXPECT_EQ(v.koszul, iota_vanishes_against_k(m, 5)) << "seed " << seed;
    auto rep = koszul_series_check(m, 6);
    EXPECT_TRUE(rep.consistent) << "seed " << seed;
    (v.koszul ? koszul : not_koszul)++;
  }
  EXPECT_GT(koszul, 0);
  EXPECT_GT(not_koszul, 0);
}

TEST(IsKoszul, StableUnderSyzygy) {
  auto r = r3();
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto m = syzygy(random_module(r, 2, 1 + seed % 3, seed + 17), 1);
    if (!is_koszul(m).koszul) continue;
    for (std::size_t i = 1; i <= 3; ++i) EXPECT_TRUE(is_koszul(syzygy(m, i)).koszul) << "seed " << seed << " i " << i;
  }
}
