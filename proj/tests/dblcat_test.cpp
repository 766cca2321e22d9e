#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace fwfs;

namespace {

struct Fixture {
  FinSet S = build_finset(2);
  DblPtr epi = dbl_from_class(S.cat, S.epi, "Epi");
  DblPtr mono = dbl_from_class(S.cat, S.mono, "Mono");
  DblPtr all = sq_concrete(S.cat);
};

} // namespace

TEST(Concrete, SquareCountsMatchOracle)
{
  Fixture f;
  EXPECT_EQ(f.all->count_squares(), frozen::squares_finset2);
  EXPECT_EQ(f.mono->count_squares(), frozen::mono_mono_squares_finset2);
  EXPECT_EQ(f.epi->count_squares(), frozen::epi_epi_squares_finset2);
  EXPECT_EQ(oracle::count_squares(2, oracle::injective, oracle::injective), frozen::mono_mono_squares_finset2);
  EXPECT_EQ(oracle::count_squares(2, oracle::surjective, oracle::surjective), frozen::epi_epi_squares_finset2);
  EXPECT_EQ(oracle::count_squares(2, oracle::surjective, [](auto&) { return true; }), frozen::epi_all_squares_finset2);
}

TEST(Concrete, ClassDoubleCategoriesAreLawful)
{
  Fixture f;
  for (const auto& D : {f.epi, f.mono, f.all}) {
    Report r = check_concrete(*D);
    EXPECT_TRUE(r.ok()) << D->name() << "\n" << support::failures(r);
    EXPECT_TRUE(check_right_connected(*D).ok());
  }
}

TEST(Concrete, NonClosedClassNamesTheOffendingPair)
{
  auto M = monoid_category({"1", "a", "b"}, {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}});
  MorClass E{M->morphism("1"), M->morphism("a")};
  std::sort(E.begin(), E.end());
  try {
    dbl_from_class(M, E);
    FAIL() << "expected a closure error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("(a,a)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(dbl_from_class(M, MorClass{M->morphism("a")}), Error);
}

TEST(Internal, InternalFormPassesDoubleCategoryLaws)
{
  Fixture f;
  InternalForm X = to_internal(*f.mono);
  EXPECT_EQ(X.dbl.cat1->num_objects(), frozen::finset_monos[2]);
  EXPECT_EQ(X.dbl.cat1->num_morphisms(), frozen::mono_mono_squares_finset2);
  Report r = check_double_category(X.dbl);
  EXPECT_TRUE(r.ok()) << support::failures(r);
  InternalForm SqC = to_internal(*f.all);
  DoubleFunctor U = forgetful_functor(X, *f.mono, SqC);
  EXPECT_TRUE(check_double_functor(U, X.dbl, SqC.dbl).ok());
  EXPECT_TRUE(check_concreteness(U, X.dbl).ok());
}

TEST(Internal, CorruptedSquareCompositeIsCaught)
{
  Fixture f;
  InternalForm X = to_internal(*f.mono);
  ASSERT_FALSE(X.dbl.ms.empty());
  auto it = X.dbl.ms.begin();
  const FinCategory& C1 = *X.dbl.cat1;
  Id other = kNone;
  for (Id s : C1.hom(C1.dom(it->second), C1.cod(it->second)))
    if (s != it->second)
      other = s;
  if (other == kNone) {
    for (auto jt = X.dbl.ms.begin(); jt != X.dbl.ms.end(); ++jt) {
      for (Id s : C1.hom(C1.dom(jt->second), C1.cod(jt->second)))
        if (s != jt->second)
          other = s;
      if (other != kNone) {
        it = jt;
        break;
      }
    }
  }
  ASSERT_NE(other, kNone);
  it->second = other;
  Report r = check_double_category(X.dbl);
  EXPECT_EQ(r.status(), Status::violation) << support::failures(r);
}

TEST(Concrete, MissingFOneSquareBreaksRightConnectedness)
{
  Fixture f;
  const FinCategory& C = *f.S.cat;
  const Id target = C.morphism("0>1");
  std::vector<Vertical> vs;
  for (Id m : f.S.mono)
    vs.push_back({C.morphism_name(m), m});
  auto D = std::make_shared<ConcreteDouble>(f.S.cat, "Mono-", vs, [&C, target](int, int, Id top, Id bottom) {
    return !(top == target && bottom == C.identity(C.cod(target)));
  });
  D->auto_identities();
  Report r = check_right_connected(*D);
  ASSERT_TRUE(support::violated(r, "right-connected"));
  EXPECT_EQ(r.checks.front().witnesses.front()["vertical"], "0>1");
  EXPECT_TRUE(check_right_connected(*f.mono).ok());
}

TEST(Concrete, FunctorsBetweenClassDoubles)
{
  Fixture f;
  auto iso = dbl_from_class(f.S.cat, iso_class(*f.S.cat), "Iso");
  ConcreteFunctor a = inclusion_by_id(iso, f.epi), b = inclusion_by_id(f.epi, f.all);
  EXPECT_TRUE(check_concrete_functor(a).ok());
  EXPECT_TRUE(check_concrete_functor(compose_concrete(b, a)).ok());
  EXPECT_THROW(inclusion_by_id(f.all, f.mono), Error);
  ConcreteFunctor bad = inclusion_by_id(iso, f.epi);
  bad.vmap[0] = f.epi->find("2>2:10");
  EXPECT_EQ(check_concrete_functor(bad).status(), Status::violation);
}
