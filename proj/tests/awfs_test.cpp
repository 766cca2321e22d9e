#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace fwfs;
using support::epi_mono;
using support::failures;

namespace {

std::shared_ptr<const Awfs> image2()
{
  static auto A = std::make_shared<const Awfs>(image_awfs(build_finset(2)));
  return A;
}

bool same_awfs(const Awfs& a, const Awfs& b)
{
  if (a.ff.mid != b.ff.mid || a.ff.lambda != b.ff.lambda || a.ff.rho != b.ff.rho || a.delta != b.delta || a.mu != b.mu)
    return false;
  if (a.ff.E.size() != b.ff.E.size())
    return false;
  for (const auto& [k, e] : a.ff.E)
    if (b.ff.E_of(k[0], k[1], k[2], k[3]) != e)
      return false;
  return true;
}

} // namespace

TEST(Awfs, ImageAwfsIsLawful)
{
  Report r = check_awfs(*image2());
  EXPECT_TRUE(r.ok()) << failures(r);
  for (const char* name : {"comonad/coassociativity", "monad/associativity", "distributive/square", "distributive/comultiplication"})
    EXPECT_NE(support::find_check(r, name), nullptr) << name;
}

TEST(Awfs, TrivialAwfsAreLawful)
{
  auto S = build_finset(2);
  for (bool left : {true, false}) {
    Report r = check_awfs(trivial_awfs(S.cat, left));
    EXPECT_TRUE(r.ok()) << failures(r);
  }
  EXPECT_TRUE(check_awfs(trivial_awfs(walking_arrow(), true)).ok());
}

TEST(Awfs, ReconstructionFromEpiMono)
{
  auto s = epi_mono(2);
  BudgetTracker b;
  Reconstruction rec = awfs_from_lifting(s.op, s.fa, &b);
  ASSERT_TRUE(rec.report.ok()) << failures(rec.report);
  ASSERT_TRUE(rec.awfs.has_value());
  Report r = check_awfs(*rec.awfs);
  EXPECT_TRUE(r.ok()) << failures(r);
  EXPECT_TRUE(same_awfs(*rec.awfs, *image2()));
}

TEST(Awfs, AlgebrasAreTheInjections)
{
  auto A = image2();
  auto S = build_finset(2);
  const FinCategory& C = *S.cat;
  auto algs = enumerate_algebras(*A);
  std::multiset<std::string> got, want;
  for (const auto& a : algs)
    got.insert(C.morphism_name(a.f));
  for (const auto& f : oracle::all_maps(2))
    if (oracle::injective(f))
      want.insert(oracle::name(f));
  EXPECT_EQ(got, want);
  std::multiset<std::string> co, surj;
  for (const auto& a : enumerate_coalgebras(*A))
    co.insert(C.morphism_name(a.f));
  for (const auto& f : oracle::all_maps(2))
    if (oracle::surjective(f))
      surj.insert(oracle::name(f));
  EXPECT_EQ(co, surj);
}

TEST(Awfs, TrivialStructureCounts)
{
  auto S = build_finset(3);
  Awfs T = trivial_awfs(S.cat, true);
  EXPECT_EQ(enumerate_coalgebras(T).size(), frozen::left_trivial_coalgebras_finset3);
  EXPECT_EQ(enumerate_algebras(T).size(), frozen::left_trivial_algebras_finset3);
  EXPECT_EQ(frozen::left_trivial_coalgebras_finset3, iso_class(*S.cat).size());
}

TEST(Semantics, StructureDoublesAreConcreteAndRightConnected)
{
  SemStructure sm = sem(image2());
  for (const auto* D : {&sm.coalg, &sm.alg}) {
    EXPECT_TRUE(check_concrete(*D->dbl).ok()) << failures(check_concrete(*D->dbl));
    EXPECT_TRUE(check_right_connected(*D->dbl).ok());
  }
  Report e = check_essential_image(sm.alg.dbl);
  EXPECT_TRUE(e.ok()) << failures(e);
}

TEST(Semantics, LiftingIsTheUniqueFiller)
{
  SemStructure sm = sem(image2());
  const FinCategory& C = *image2()->ff.base;
  for (int j = 0; j < sm.coalg.dbl->size(); ++j)
    for (int k = 0; k < sm.alg.dbl->size(); ++k)
      for (const auto& p : C.squares_between(sm.coalg.dbl->over(j), sm.alg.dbl->over(k))) {
        auto fs = enumerate_fillers(C, sm.coalg.dbl->over(j), sm.alg.dbl->over(k), p.top, p.bottom);
        ASSERT_EQ(fs.size(), 1u);
        EXPECT_EQ(sm.op.fill(j, k, p.top, p.bottom), fs[0]);
      }
  BudgetTracker b;
  Report r = check_lifting_awfs(sm.op, sm.fa, FactorisationSide::both, b);
  EXPECT_TRUE(r.ok()) << failures(r);
}

TEST(RoundTrip, LiftingTablesAreByteEqual)
{
  auto s = epi_mono(2);
  BudgetTracker b;
  LiftingRoundTrip rt = roundtrip_lifting(s.op, s.fa, &b);
  EXPECT_TRUE(rt.report.ok()) << failures(rt.report);
  EXPECT_EQ(rt.original.dump(), rt.rebuilt.dump());
  EXPECT_FALSE(rt.original["fillers"].empty());
}

TEST(RoundTrip, AwfsTables)
{
  EXPECT_TRUE(roundtrip_awfs(image2()).ok());
  auto T = std::make_shared<const Awfs>(trivial_awfs(build_finset(2).cat, false));
  EXPECT_TRUE(roundtrip_awfs(T).ok());
}

TEST(Mutation, CorruptedFunctorialFactorisation)
{
  Awfs A = *image2();
  const FinCategory& C = *A.ff.base;
  bool done = false;
  for (auto& [key, e] : A.ff.E) {
    if (done || C.is_identity(key[2]))
      continue;
    for (Id other : C.hom(C.dom(e), C.cod(e)))
      if (other != e) {
        e = other;
        done = true;
        break;
      }
  }
  ASSERT_TRUE(done);
  Report r = check_functorial_factorisation(A.ff);
  EXPECT_TRUE(support::any_witness(r)) << failures(r);
  EXPECT_TRUE(support::violated_prefix(r, "ff/"));
}

TEST(Mutation, CorruptedComultiplication)
{
  Awfs A = *image2();
  const FinCategory& C = *A.ff.base;
  Id target = kNone;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()) && target == kNone; ++f) {
    Id d = A.delta[static_cast<std::size_t>(f)];
    for (Id other : C.hom(C.dom(d), C.cod(d)))
      if (other != d) {
        A.delta[static_cast<std::size_t>(f)] = other;
        target = f;
        break;
      }
  }
  ASSERT_NE(target, kNone);
  Report r = check_awfs(A);
  EXPECT_TRUE(support::any_witness(r)) << failures(r);
  EXPECT_TRUE(support::violated_prefix(r, "comonad/"));
}

TEST(Mutation, CorruptedMultiplication)
{
  Awfs A = *image2();
  const FinCategory& C = *A.ff.base;
  bool done = false;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()) && !done; ++f) {
    Id m = A.mu[static_cast<std::size_t>(f)];
    for (Id other : C.hom(C.dom(m), C.cod(m)))
      if (other != m) {
        A.mu[static_cast<std::size_t>(f)] = other;
        done = true;
        break;
      }
  }
  ASSERT_TRUE(done);
  Report r = check_awfs(A);
  EXPECT_TRUE(support::violated_prefix(r, "monad/")) << failures(r);
}

TEST(Morphisms, IdentityAndTrivialMorphisms)
{
  auto A = image2();
  const FinCategory& C = *A->ff.base;
  std::vector<Id> K;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f)
    K.push_back(C.identity(A->ff.mid[static_cast<std::size_t>(f)]));
  EXPECT_TRUE(check_awfs_morphism(*A, *A, K).ok());
  BudgetTracker b;
  bool complete = false;
  auto left = trivial_awfs(A->ff.base, true), right = trivial_awfs(A->ff.base, false);
  EXPECT_EQ(find_awfs_morphisms(left, *A, b, complete).size(), 1u);
  EXPECT_TRUE(complete);
  EXPECT_EQ(find_awfs_morphisms(right, *A, b, complete).size(), 0u);
  EXPECT_TRUE(complete);
}

TEST(Mutation, CorruptedAwfsMorphism)
{
  auto A = image2();
  const FinCategory& C = *A->ff.base;
  std::vector<Id> K;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f)
    K.push_back(C.identity(A->ff.mid[static_cast<std::size_t>(f)]));
  const Id f = C.morphism("2>2:10");
  K[static_cast<std::size_t>(f)] = C.morphism("2>2:10");
  Report r = check_awfs_morphism(*A, *A, K);
  EXPECT_TRUE(support::violated(r, "morphism/triangles")) << failures(r);
}
