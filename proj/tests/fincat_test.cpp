#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace fwfs;

TEST(FinSet, SizesMatchOracle)
{
  for (int n = 0; n <= 3; ++n) {
    FinSet S = build_finset(n);
    auto all = oracle::all_maps(n);
    ASSERT_EQ(S.cat->num_morphisms(), all.size());
    EXPECT_EQ(all.size(), frozen::finset_morphisms[n]);
    std::size_t epi = 0, mono = 0;
    for (const auto& f : all) {
      Id m = S.cat->find_morphism(oracle::name(f));
      ASSERT_NE(m, kNone) << oracle::name(f);
      EXPECT_EQ(contains(S.epi, m), oracle::surjective(f));
      EXPECT_EQ(contains(S.mono, m), oracle::injective(f));
      epi += oracle::surjective(f);
      mono += oracle::injective(f);
    }
    EXPECT_EQ(epi, frozen::finset_epis[n]);
    EXPECT_EQ(mono, frozen::finset_monos[n]);
  }
  EXPECT_EQ(build_finset(4).cat->num_morphisms(), frozen::finset_morphisms[4]);
  EXPECT_THROW(build_finset(5), Error);
}

TEST(FinSet, CompositionMatchesOracle)
{
  FinSet S = build_finset(3);
  const FinCategory& C = *S.cat;
  auto all = oracle::all_maps(3);
  for (const auto& f : all)
    for (const auto& g : all)
      if (f.k == g.m)
        ASSERT_EQ(C.morphism_name(C.compose(C.morphism(oracle::name(g)), C.morphism(oracle::name(f)))),
                  oracle::name(oracle::compose(g, f)));
  EXPECT_TRUE(check_category(C).ok()) << support::failures(check_category(C));
}

TEST(FinSet, CategoricalClassesAgreeWithSetTheoretic)
{
  FinSet S = build_finset(3);
  EXPECT_EQ(epi_class(*S.cat), S.epi);
  EXPECT_EQ(mono_class(*S.cat), S.mono);
  EXPECT_EQ(intersect(S.epi, S.mono), iso_class(*S.cat));
  EXPECT_EQ(split_epi_class(*S.cat), S.epi);
}

TEST(Category, StockCategoriesAreLawful)
{
  EXPECT_TRUE(check_category(*terminal_category()).ok());
  EXPECT_TRUE(check_category(*walking_arrow()).ok());
  auto P = poset_category({"a", "b", "c"}, [](std::size_t i, std::size_t j) { return i <= j; });
  EXPECT_TRUE(check_category(*P).ok());
  EXPECT_EQ(P->num_morphisms(), 6u);
  auto M = monoid_category({"1", "a", "b"}, {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}});
  EXPECT_TRUE(check_category(*M).ok());
}

TEST(Category, CorruptedCompositionEntryIsCaught)
{
  auto spec = build_finset(2).cat->to_spec();
  bool changed = false;
  for (auto& e : spec.composition)
    if (e[0] == "2>2:10" && e[1] == "2>2:10") {
      e[2] = "2>2:10";
      changed = true;
    }
  ASSERT_TRUE(changed);
  Report r = check_category(*make_category(spec));
  EXPECT_EQ(r.status(), Status::violation);
  EXPECT_TRUE(support::violated(r, "associativity") || support::violated(r, "identities")) << support::failures(r);
}

TEST(Category, MissingIdentityAndCompositeAreReported)
{
  FinCategory::Spec s;
  s.objects = {"x"};
  s.morphisms = {{"e", "x", "x"}, {"u", "x", "x"}};
  s.identities = {{"x", "e"}};
  s.composition = {{"e", "e", "e"}, {"e", "u", "u"}, {"u", "e", "u"}};
  Report r = check_category(*make_category(s));
  EXPECT_TRUE(support::violated(r, "table"));
  const Check* c = support::find_check(r, "table");
  EXPECT_EQ(c->witnesses.front()["g"], "u");
  EXPECT_EQ(c->witnesses.front()["f"], "u");

  s.identities.clear();
  Report r2 = check_category(*make_category(s));
  EXPECT_TRUE(support::violated(r2, "identities"));
}

TEST(Category, UnknownIdentifiersThrow)
{
  FinCategory::Spec s;
  s.objects = {"x"};
  s.morphisms = {{"e", "x", "y"}};
  EXPECT_THROW(make_category(s), Error);
  s.objects = {"x", "x"};
  EXPECT_THROW(make_category(s), Error);
}

TEST(Category, HomSetsAndSquaresMatchOracle)
{
  FinSet S = build_finset(2);
  const FinCategory& C = *S.cat;
  std::uint64_t total = 0;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f)
    for (Id g = 0; g < static_cast<Id>(C.num_morphisms()); ++g)
      total += C.squares_between(f, g).size();
  EXPECT_EQ(total, frozen::squares_finset2);
  EXPECT_EQ(oracle::count_squares(2, [](auto&) { return true; }, [](auto&) { return true; }), frozen::squares_finset2);
  EXPECT_EQ(C.hom(C.object("2"), C.object("2")).size(), 4u);
  EXPECT_TRUE(C.hom(C.object("1"), C.object("0")).empty());
}

TEST(Functor, WalkingArrowEndofunctors)
{
  auto A = walking_arrow();
  BudgetTracker b;
  bool complete = false;
  auto fs = enumerate_functors(A, A, b, complete);
  EXPECT_TRUE(complete);
  EXPECT_EQ(fs.size(), frozen::walking_arrow_endofunctors);
  for (const auto& F : fs)
    EXPECT_TRUE(check_functor(F).ok());
  EXPECT_EQ(compose_functors(fs[0], fs[1]).source, A);
}

TEST(Functor, BudgetCutsEnumeration)
{
  auto A = build_finset(1).cat;
  BudgetTracker b(Budget{2, 60});
  bool complete = true;
  enumerate_functors(A, A, b, complete);
  EXPECT_FALSE(complete);
  EXPECT_TRUE(b.exhausted());
}

TEST(Functor, CorruptedMorphismMapIsCaught)
{
  auto A = walking_arrow();
  Functor F = identity_functor(A);
  EXPECT_TRUE(check_functor(F).ok());
  F.mor[static_cast<std::size_t>(A->morphism("a"))] = A->morphism("id0");
  Report r = check_functor(F);
  EXPECT_EQ(r.status(), Status::violation);
}

TEST(Functor, NaturalityOfIdentity)
{
  Functor F = identity_functor(build_finset(2).cat);
  EXPECT_TRUE(check_nat(identity_nat(F)).ok());
  NatTransformation t = identity_nat(F);
  t.comp[2] = F.target->morphism("2>2:10");
  EXPECT_EQ(check_nat(t).status(), Status::violation);
}

TEST(Arrow, ArrowCategoryOfFinSet2)
{
  ArrowCategory A = arrow_category(build_finset(2).cat);
  EXPECT_EQ(A.cat->num_objects(), frozen::finset_morphisms[2]);
  EXPECT_EQ(A.cat->num_morphisms(), frozen::squares_finset2);
  EXPECT_TRUE(check_category(*A.cat).ok());
  EXPECT_TRUE(check_functor(A.dom).ok());
  EXPECT_TRUE(check_functor(A.cod).ok());
}
