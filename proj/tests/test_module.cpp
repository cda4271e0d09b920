#include <gtest/gtest.h>

#include "gorlab/module.hpp"

using namespace gorlab;

namespace {

RingPtr r3() { return identity_form_ring(101, 3); }

FiniteModule m1(const RingPtr& r) { return cyclic_module(r, {RingElement::x(r, 0)}).module; }

FiniteModule k_of(const RingPtr& r) { return FiniteModule::residue_field(r); }

// Basis vector of R^1 in the fixed ring basis.
Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

}  // namespace

TEST(FiniteModule, CreateValidatesRelations) {
  auto r = r3();
  const auto& f = r->field();
  // x_1 acting as a full Jordan block forces w != 0, yet x_2^2 = 0 contradicts x_2^2 = w.
  std::vector<FMatrix> bad(3, FMatrix(f, 3, 3));
  bad[0](1, 0) = 1;
  bad[0](2, 1) = 1;
  EXPECT_THROW(FiniteModule::create(r, 3, bad), Error);
  // k[x_1]/(x_1^2) is a module (x_1 nilpotent of order 2, w acts as zero).
  std::vector<FMatrix> good(3, FMatrix(f, 2, 2));
  good[0](1, 0) = 1;
  EXPECT_NO_THROW(FiniteModule::create(r, 2, good));
  auto wrong_count = std::vector<FMatrix>(2, FMatrix(f, 2, 2));
  EXPECT_THROW(FiniteModule::create(r, 2, wrong_count), Error);
  auto free = FiniteModule::free(r, 2);
  EXPECT_NO_THROW(FiniteModule::create(r, free.dim(), free.actions()));
}

TEST(FromPresentation, SpecExamples) {
  auto r = r3();
  auto free = from_presentation({RingMatrix(r, 1, 0)});
  EXPECT_EQ(free.module.dim(), 5u);

  RingMatrix px(r, 1, 1);
  px.set(0, 0, RingElement::x(r, 0));
  auto m = from_presentation({px});
  EXPECT_EQ(m.module.dim(), 3u);
  EXPECT_EQ(m.cover.matrix.rows(), 3u);
  EXPECT_EQ(rank(m.cover.matrix), 3u);

  RingMatrix pk(r, 1, 3);
  for (std::size_t l = 0; l < 3; ++l) pk.set(0, l, RingElement::x(r, l));
  EXPECT_EQ(from_presentation({pk}).module.dim(), 1u);
}

TEST(FromPresentation, CoverIsModuleMap) {
  auto r = hyperbolic_form_ring(101, 3);
  auto pres = random_presentation(r, 2, 3, 7);
  auto pm = from_presentation(pres);
  EXPECT_NO_THROW(ModuleMap::create(pm.cover.source, pm.cover.target, pm.cover.matrix));
  EXPECT_NO_THROW(pm.module.validate());
  EXPECT_EQ(nu(pm.module), 2u);
}

TEST(RadicalSubmodule, SpecExamples) {
  auto r = r3();
  EXPECT_EQ(radical_submodule(k_of(r)).sub.dim(), 0u);
  auto rm1 = radical_submodule(m1(r));
  EXPECT_EQ(rm1.sub.dim(), 2u);
  EXPECT_NO_THROW(ModuleMap::create(rm1.map.source, rm1.map.target, rm1.map.matrix));
  EXPECT_EQ(radical_submodule(FiniteModule::free(r, 1)).sub.dim(), 4u);
}

TEST(MinimalGenerators, SpecExamples) {
  auto r = r3();
  EXPECT_EQ(nu(FiniteModule::free(r, 1)), 1u);
  EXPECT_EQ(nu(m1(r)), 1u);
  EXPECT_EQ(nu(radical_submodule(m1(r)).sub), 2u);
  EXPECT_EQ(nu(radical_submodule(FiniteModule::free(r, 1)).sub), 3u);
  auto g = minimal_generators(m1(r));
  EXPECT_EQ(g.nu, 1u);
  EXPECT_EQ(g.top.quotient.dim(), 1u);
  EXPECT_EQ(rank(g.top.map.matrix), 1u);
}

TEST(Socle, SpecExamples) {
  auto r = r3();
  EXPECT_EQ(socle(k_of(r)).sub.dim(), 1u);
  auto sr = socle(FiniteModule::free(r, 1));
  ASSERT_EQ(sr.sub.dim(), 1u);
  EXPECT_EQ(sr.map.matrix.column(0), unit(5, 4));
  auto sm = socle(m1(r));
  EXPECT_EQ(sm.sub.dim(), 2u);
  // The socle of M1 lies in mM1.
  auto rad = radical_span(m1(r));
  for (std::size_t j = 0; j < sm.sub.dim(); ++j) EXPECT_TRUE(rad.contains(sm.map.matrix.column(j)));
}

TEST(MatlisDual, SpecExamples) {
  auto r = r3();
  auto kd = matlis_dual(k_of(r));
  EXPECT_EQ(kd.dim(), 1u);
  EXPECT_EQ(nu(kd), 1u);
  auto md = matlis_dual(m1(r));
  EXPECT_EQ(md.dim(), 3u);
  EXPECT_EQ(nu(md), 2u);
  auto rd = matlis_dual(FiniteModule::free(r, 1));
  EXPECT_EQ(rd.dim(), 5u);
  EXPECT_EQ(nu(rd), 1u);
  EXPECT_EQ(matlis_dual(md), m1(r));
}

TEST(MatlisDual, FunctorialOnMaps) {
  auto r = r3();
  auto inc = radical_submodule(m1(r)).map;
  auto d = matlis_dual(inc);
  EXPECT_NO_THROW(ModuleMap::create(d.source, d.target, d.matrix));
  EXPECT_EQ(d.matrix.rows(), 2u);
}

TEST(HomSpace, SpecExamples) {
  auto r = r3();
  auto n = m1(r);
  EXPECT_EQ(hom_space(FiniteModule::free(r, 1), n).size(), n.dim());
  EXPECT_EQ(hom_space(k_of(r), FiniteModule::free(r, 1)).size(), 1u);
  EXPECT_EQ(hom_space(n, FiniteModule::free(r, 1)).size(), n.dim());
  for (auto& f : hom_space(n, n)) EXPECT_NO_THROW(ModuleMap::create(f.source, f.target, f.matrix));
}

TEST(HomSpace, AgreesWithMatlisDualOnRandomModules) {
  auto r = hyperbolic_form_ring(101, 3);
  auto free = FiniteModule::free(r, 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto m = random_module(r, 1 + seed % 3, seed % 4, seed);
    auto homs = hom_space(m, free);
    EXPECT_EQ(homs.size(), matlis_dual(m).dim()) << "seed " << seed;
  }
}

TEST(CyclicModule, SpecExamples) {
  auto r = r3();
  auto c = cyclic_module(r, {RingElement::x(r, 0)});
  EXPECT_EQ(c.hilbert, (std::vector<std::size_t>{1, 2}));
  std::vector<RingElement> sq{RingElement::w(r)};
  auto c2 = cyclic_module(r, sq);
  EXPECT_EQ(c2.module.dim(), 4u);
  EXPECT_EQ(c2.hilbert, (std::vector<std::size_t>{1, 3}));
  try {
    cyclic_module(r, {RingElement::from(r, {1, 1, 0, 0, 0})});
    FAIL() << "expected UnitIdeal";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnitIdeal);
  }
  EXPECT_EQ(cyclic_module(r, {}).hilbert, (std::vector<std::size_t>{1, 3, 1}));
}

TEST(SplitExtension, FreeModuleOnOne) {
  auto r = r3();
  auto s = split_extension(FiniteModule::free(r, 1), unit(5, 0));
  EXPECT_EQ(s.sub.dim(), 5u);
  EXPECT_EQ(s.quotient.dim(), 0u);
  EXPECT_TRUE(s.annihilator.empty());
}

TEST(SplitExtension, SumWithResidueField) {
  auto r = r3();
  auto m = direct_sum(m1(r), k_of(r));
  auto s = split_extension(m, unit(4, 3));
  EXPECT_EQ(s.sub.dim(), 1u);
  EXPECT_EQ(s.quotient.dim(), 3u);
  EXPECT_EQ(hilbert_layers(s.quotient), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.annihilator.size(), 4u);
}

TEST(SplitExtension, CyclicGenerator) {
  auto r = r3();
  auto m = m1(r);
  Vec one(m.dim(), 0);
  one[0] = 1;
  auto s = split_extension(m, one);
  EXPECT_EQ(s.sub.dim(), 3u);
  EXPECT_EQ(s.quotient.dim(), 0u);
  ASSERT_EQ(s.annihilator.size(), 2u);
  // ann = (x1) = span{x1, w}
  EchelonForm ann(r->field(), 5);
  for (auto& a : s.annihilator) ann.insert(a.coeffs);
  EXPECT_TRUE(ann.contains(unit(5, 1)));
  EXPECT_TRUE(ann.contains(unit(5, 4)));
}

TEST(SplitExtension, RejectsRadicalElement) {
  auto r = r3();
  auto m = FiniteModule::free(r, 1);
  try {
    split_extension(m, unit(5, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GeneratorInRadical);
  }
}

TEST(SplitExtension, DimensionsAndGeneratorsAdd) {
  auto r = hyperbolic_form_ring(101, 3);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = random_module(r, 2 + seed % 2, 2 + seed % 3, seed);
    auto g = minimal_generators(m);
    auto s = split_extension(m, g.vectors.front());
    EXPECT_EQ(s.sub.dim() + s.quotient.dim(), m.dim());
    EXPECT_EQ(nu(s.sub) + nu(s.quotient), nu(m));
    EXPECT_TRUE((s.psi.matrix * s.phi.matrix).is_zero());
  }
}

TEST(RandomModule, SpecExamples) {
  auto r = r3();
  EXPECT_EQ(random_module(r, 1, 0, 99), FiniteModule::free(r, 1));
  auto a = random_module(r, 2, 3, 7);
  EXPECT_EQ(nu(a), 2u);
  EXPECT_EQ(a, random_module(r, 2, 3, 7));
  EXPECT_EQ(fingerprint(a), fingerprint(random_module(r, 2, 3, 7)));
  EXPECT_NE(fingerprint(a), fingerprint(random_module(r, 2, 3, 8)));
}

TEST(FiniteModule, LayerIdentities) {
  auto r = identity_form_ring(101, 4);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto m = random_module(r, 1 + seed % 3, seed % 5, seed);
    EXPECT_NO_THROW(m.validate());
    auto rad = radical_submodule(m).sub;
    EXPECT_EQ(m.dim(), nu(m) + rad.dim());
    // m^2 M lies in the socle.
    auto soc = socle(m);
    EchelonForm s(m.field(), m.dim());
    for (std::size_t j = 0; j < soc.sub.dim(); ++j) s.insert(soc.map.matrix.column(j));
    for (std::size_t j = 0; j < m.dim(); ++j) EXPECT_TRUE(s.contains(m.w_action().column(j)));
    auto rm = radical_submodule(rad).sub;
    if (rm.dim() == 0) {
      EXPECT_EQ(rad.dim(), nu(rad));
    }
  }
}

TEST(RingMatrix, KMatrixMatchesFreeModuleAction) {
  auto r = r3();
  auto pres = random_presentation(r, 2, 2, 5);
  auto km = k_matrix(pres.matrix);
  auto free2 = FiniteModule::free(r, 2);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(km * free2.action(l), free2.action(l) * km);
  EXPECT_EQ(km.column(0), pres.matrix.column_vector(0));
}
