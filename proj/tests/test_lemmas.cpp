#include <gtest/gtest.h>

#include "gorlab/lemmas.hpp"

using namespace gorlab;

namespace {

TrialConfig small(std::size_t e, std::size_t cutoff, std::size_t trials) {
  TrialConfig c;
  c.e = e;
  c.cutoff = cutoff;
  c.trials = trials;
  c.margin = 2;
  c.max_dim = 6;
  return c;
}

const json& sub(const VerificationReport& r, const std::string& name) { return r.summary.at(name); }

}  // namespace

TEST(PrimeLadder, StartsAtConfiguredPrime) {
  EXPECT_EQ(prime_ladder(101), (std::vector<std::uint32_t>{101, 1009, 10007, 65521}));
  EXPECT_EQ(prime_ladder(20011), (std::vector<std::uint32_t>{20011, 65521}));
}

TEST(SpecialGenerator, FoundForResidueFieldSums) {
  auto r = identity_form_ring(101, 3);
  // M = R/(x1) has ann(1) = (x1) + m^2 != m^2; it is not square zero, so use its first syzygy
  auto m = direct_sum(FiniteModule::residue_field(r), syzygy(cyclic_module(r, {RingElement::x(r, 0)}).module, 1));
  auto s = find_special_generator(m, 1);
  ASSERT_TRUE(s.x.has_value());
  EXPECT_GT(split_extension(m, *s.x).annihilator.size(), 1u);
}

TEST(SpecialGenerator, RadicalAndTruncation) {
  for (std::size_t e : {2u, 3u}) {
    auto r = identity_form_ring(103, e);
    // in m, B(c, x) = 0 has a nonzero solution c for every x
    auto s = find_special_generator(radical_submodule(FiniteModule::free(r, 1)).sub, 1);
    EXPECT_TRUE(s.x.has_value());
    // R/m^2 violates nu(M) >= nu(mM): ann(1) = m^2
    auto t = find_special_generator(cyclic_module(r, {RingElement::w(r)}).module, 1);
    EXPECT_TRUE(t.exhaustive);
    EXPECT_FALSE(t.x.has_value());
  }
}

TEST(LemmaSuite, SmallCutoffPasses) {
  auto rep = verify_lemma_suite(small(3, 5, 3));
  EXPECT_TRUE(rep.pass) << rep.to_json()["failures"].dump(1);
  EXPECT_EQ(rep.trials.size(), 8u);
  EXPECT_EQ(sub(rep, "lescot")["instances"], 12);
  EXPECT_EQ(sub(rep, "betti-growth")["instances"], 6);
  EXPECT_EQ(sub(rep, "koszul-classification")["instances"], 24);
  EXPECT_GT(sub(rep, "lescot")["applicable"].get<int>(), 0);
}

TEST(LemmaSuite, BettiGrowthSkippedAtE2) {
  auto c = small(2, 5, 2);
  c.form = FormChoice::Hyperbolic;
  auto rep = verify_lemma_suite(c);
  EXPECT_EQ(sub(rep, "betti-growth")["skipped"], "needs e > 2");
  EXPECT_TRUE(sub(rep, "koszul-classification")["pass"].get<bool>());
}

TEST(LemmaSuite, Deterministic) {
  auto c = small(3, 4, 2);
  auto a = verify_lemma_suite(c).to_json().dump();
  c.threads = 2;
  auto b = verify_lemma_suite(c).to_json();
  b["config"].erase("threads");
  auto a2 = json::parse(a);
  a2["config"].erase("threads");
  EXPECT_EQ(a2.dump(), b.dump());
}
