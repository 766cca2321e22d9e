#include "oracles.hpp"
#include "support.hpp"

#include <fwfs/catlib.hpp>

#include <gtest/gtest.h>

using namespace fwfs;
using support::failures;
using support::violated;

namespace {

std::vector<Functor> points_of_two()
{
  BudgetTracker b;
  bool complete = false;
  return enumerate_functors(terminal_category(), walking_arrow(), b, complete);
}

// Objects of B/f: pairs (α: b → f a, a).
std::size_t comma_objects(const Functor& f)
{
  const FinCategory& A = *f.source;
  const FinCategory& B = *f.target;
  std::size_t n = 0;
  for (Id a = 0; a < static_cast<Id>(A.num_objects()); ++a)
    for (Id b = 0; b < static_cast<Id>(B.num_objects()); ++b)
      n += B.hom(b, f.on_obj(a)).size();
  return n;
}

} // namespace

TEST(Comma, IdentityOnTwo)
{
  CommaData K = comma_category(identity_functor(walking_arrow()), "2/2");
  EXPECT_EQ(K.comma->num_objects(), frozen::comma_id2_objects);
  EXPECT_EQ(K.comma->num_morphisms(), frozen::comma_id2_morphisms);
  EXPECT_EQ(K.comma->num_objects(), comma_objects(K.f));
  EXPECT_NE(K.comma->find_object("(a,1)"), kNone);
  Report r = check_comma(K);
  EXPECT_TRUE(r.ok()) << failures(r);
  EXPECT_EQ(compose_functors(K.d(), K.i()), K.f);
  EXPECT_EQ(compose_functors(K.c(), K.i()), identity_functor(K.f.source));
}

TEST(Comma, PointsOfTwo)
{
  auto pts = points_of_two();
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& f : pts) {
    CommaData K = comma_category(f);
    EXPECT_EQ(K.comma->num_objects(), comma_objects(f));
    EXPECT_EQ(K.comma->num_objects(), f.on_obj(0) == walking_arrow()->object("0") ? 1u : 2u);
    Report r = check_comma(K);
    EXPECT_TRUE(r.ok()) << failures(r);
    EXPECT_TRUE(check_split_reflection(K.reflection).ok());
    EXPECT_TRUE(check_split_fibration(K.fibration).ok());
  }
}

TEST(Comma, DotDumpNamesEveryObject)
{
  CommaData K = comma_category(identity_functor(walking_arrow()), "2/2");
  std::string dot = comma_dot(K);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  for (const auto& o : K.comma->object_names())
    EXPECT_NE(dot.find(o), std::string::npos) << o;
}

TEST(Filler, CanonicalFillerOnSelfTestSquare)
{
  for (const auto& f : points_of_two()) {
    CommaData K = comma_category(f);
    Functor k = canonical_filler(K.reflection, K.fibration, K.i(), K.d());
    EXPECT_EQ(compose_functors(k, K.i()), K.i());
    EXPECT_EQ(compose_functors(K.d(), k), K.d());
    BudgetTracker b;
    bool complete = false;
    auto all = functor_fillers(K.i(), K.d(), K.i(), K.d(), b, complete);
    EXPECT_TRUE(complete);
    EXPECT_NE(std::find(all.begin(), all.end(), k), all.end());
  }
}

TEST(Filler, IdentityVerticalsGiveTrivialFillers)
{
  CommaData K = comma_category(identity_functor(walking_arrow()), "2/2");
  auto one = terminal_category();
  BudgetTracker b;
  bool complete = false;
  auto pts = enumerate_functors(one, K.comma, b, complete);
  ASSERT_FALSE(pts.empty());
  SplitReflection idr = identity_reflection(one, "1");
  // (r, s) from the identity reflection on 1 to the fibration d.
  for (const auto& r : pts) {
    Functor s = compose_functors(K.d(), r);
    Functor k = canonical_filler(idr, K.fibration, r, s);
    EXPECT_EQ(k, r);
  }
}

TEST(Universal, FreeAndCofree)
{
  auto S = stock_roster();
  BudgetTracker b;
  CatPtr one = terminal_category(), two = walking_arrow();
  for (const auto& f : points_of_two()) {
    CommaData K = comma_category(f);
    Report fr = check_free_split_fibration(K, {K.fibration, identity_fibration(one, "1"), identity_fibration(two, "2")}, b);
    Report co = check_cofree_split_reflection(K, {K.reflection, identity_reflection(one, "1"), identity_reflection(two, "2")}, b);
    EXPECT_TRUE(fr.ok()) << failures(fr);
    EXPECT_TRUE(co.ok()) << failures(co);
  }
}

TEST(Mutation, CorruptedCleavage)
{
  CommaData K = comma_category(identity_functor(walking_arrow()), "2/2");
  const FinCategory& A = *K.comma;
  const FinCategory& B = *K.f.target;
  SplitFibration F = K.fibration;
  Id top = A.object("(id1,1)");
  auto it = F.theta.find({top, B.morphism("a")});
  ASSERT_NE(it, F.theta.end());
  EXPECT_EQ(A.morphism_name(it->second), "[a,id1]:(a,1)->(id1,1)");
  it->second = A.morphism("[a,a]:(id0,0)->(id1,1)");
  Report r = check_split_fibration(F);
  EXPECT_TRUE(violated(r, "cartesian")) << failures(r);
  BudgetTracker b;
  CommaData bad = K;
  bad.fibration = F;
  EXPECT_EQ(check_free_split_fibration(bad, {K.fibration}, b).status(), Status::violation);
}

TEST(Mutation, CorruptedReflectionUnit)
{
  CommaData K = comma_category(identity_functor(walking_arrow()), "2/2");
  SplitReflection R = K.reflection;
  for (auto& e : R.eta)
    if (!K.comma->is_identity(e)) {
      e = K.comma->identity(K.comma->cod(e));
      break;
    }
  Report r = check_split_reflection(R);
  EXPECT_TRUE(support::any_witness(r)) << failures(r);
}

TEST(Roster, StockInstance)
{
  auto S = stock_roster();
  BudgetTracker b;
  auto R = make_cat_roster(S.categories, b);
  EXPECT_EQ(R->base->num_morphisms(), frozen::stock_roster_functors);
  EXPECT_TRUE(check_category(*R->base).ok());
  CatInstance I = make_cat_instance(R, S.reflections, S.fibrations, S.composites);
  Report r = check_cat_instance(I, &b);
  EXPECT_TRUE(r.ok()) << failures(r);
  EXPECT_TRUE(check_concrete(*I.splref).ok());
  EXPECT_TRUE(check_concrete(*I.splfib).ok());
  EXPECT_NE(I.splref->find("i.t"), -1);
  EXPECT_NE(I.splref->find("id:1"), -1);
  EXPECT_NE(I.splfib->find("!.d"), -1);
}

TEST(Mutation, CorruptedRosterFibration)
{
  auto S = stock_roster();
  BudgetTracker b;
  auto R = make_cat_roster(S.categories, b);
  auto fibs = S.fibrations;
  for (auto& f : fibs)
    if (f.name == "d") {
      const FinCategory& A = *S.comma.comma;
      f.theta[{A.object("(id1,1)"), S.comma.f.target->morphism("a")}] = A.morphism("[a,a]:(id0,0)->(id1,1)");
    }
  CatInstance I = make_cat_instance(R, S.reflections, fibs, S.composites);
  Report r = check_cat_instance(I, &b);
  EXPECT_TRUE(support::any_witness(r)) << failures(r);
}
