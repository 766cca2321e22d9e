// Acceptance run: one PASS/FAIL line per criterion.

#include "../mutants.hpp"
#include "../oracles.hpp"
#include "../support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

using namespace fwfs;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream why;
  void require(bool ok, const std::string& what)
  {
    if (!ok && pass) {
      pass = false;
      why << what;
    }
  }
  void require(const Report& r, const std::string& what) { require(r.ok(), what + ": " + support::failures(r)); }
};

oracle::Map to_map(const FinSet& S, Id m)
{
  const FinCategory& C = *S.cat;
  return {std::stoi(C.object_name(C.dom(m))), std::stoi(C.object_name(C.cod(m))), S.values[static_cast<std::size_t>(m)]};
}

void orthogonal(Verdict& v, std::ostringstream& info)
{
  auto s = support::epi_mono(3);
  const FinCategory& C = *s.set.cat;
  std::uint64_t squares = 0;
  for (int j = 0; j < s.L->size(); ++j)
    for (int k = 0; k < s.R->size(); ++k)
      for (const auto& p : C.squares_between(s.L->over(j), s.R->over(k))) {
        ++squares;
        auto lib = enumerate_fillers(C, s.L->over(j), s.R->over(k), p.top, p.bottom);
        auto ora = oracle::fillers({to_map(s.set, s.L->over(j)), to_map(s.set, s.R->over(k)), to_map(s.set, p.top), to_map(s.set, p.bottom)});
        v.require(lib.size() == 1 && ora.size() == 1 && C.morphism_name(lib[0]) == oracle::name(ora[0]), "filler count or value");
      }
  v.require(squares == frozen::epi_mono_squares_finset3, "square count");
  v.require(oracle::count_squares(3, oracle::surjective, oracle::injective) == squares, "oracle square count");
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    auto m = to_map(s.set, f);
    auto im = oracle::surjective(m) ? oracle::Image{m, oracle::identity(m.k)} : oracle::image(m);
    const auto& e = s.fa[static_cast<std::size_t>(f)];
    v.require(C.morphism_name(s.L->over(e.left)) == oracle::name(im.e) && C.morphism_name(s.R->over(e.right)) == oracle::name(im.m),
              "factorisation differs from the image");
  }
  BudgetTracker b(Budget{100'000'000, 600});
  v.require(check_lifting_operation(s.op, &b), "check_lifting_operation");
  v.require(check_pre_awfs(s.op, b), "check_pre_awfs");
  v.require(check_factorisation_axiom(s.op, s.fa, FactorisationSide::both, &b), "check_factorisation_axiom");
  info << squares << " squares, one filler each";
}

void comma(Verdict& v, std::ostringstream& info)
{
  auto one = terminal_category();
  auto two = walking_arrow();
  BudgetTracker b;
  bool complete = false;
  std::vector<Functor> fs{identity_functor(two)};
  for (auto& f : enumerate_functors(one, two, b, complete))
    fs.push_back(f);
  v.require(fs.size() == 3, "two points of 2");
  std::size_t fillers = 0;
  for (const auto& f : fs) {
    CommaData K = comma_category(f);
    v.require(compose_functors(K.d(), K.i()) == f, "d_f i_f = f");
    v.require(compose_functors(K.c(), K.i()) == identity_functor(f.source), "c_f i_f = 1");
    v.require(check_split_reflection(K.reflection), "check_split_reflection");
    v.require(check_split_fibration(K.fibration), "check_split_fibration");
    Functor k = canonical_filler(K.reflection, K.fibration, K.i(), K.d());
    v.require(compose_functors(k, K.i()) == K.i() && compose_functors(K.d(), k) == K.d(), "filler triangles");
    auto all = functor_fillers(K.i(), K.d(), K.i(), K.d(), b, complete);
    v.require(complete && std::find(all.begin(), all.end(), k) != all.end(), "canonical filler among brute-force fillers");
    fillers += all.size();
  }
  info << fs.size() << " functors, " << fillers << " brute-force fillers";
}

void awfs_axioms(Verdict& v, std::ostringstream& info)
{
  auto s = support::epi_mono(2);
  BudgetTracker b;
  Reconstruction rec = awfs_from_lifting(s.op, s.fa, &b);
  v.require(rec.report, "awfs_from_lifting");
  if (!rec.awfs)
    return;
  v.require(rec.awfs->delta.size() == 11, "11 morphisms");
  Report r = check_awfs(*rec.awfs, &b);
  v.require(r, "check_awfs");
  std::uint64_t cases = 0;
  for (const auto& c : r.checks)
    cases += c.cases_examined;
  info << r.checks.size() << " checks, " << cases << " cases";
}

void round_trip(Verdict& v, std::ostringstream& info)
{
  auto s = support::epi_mono(2);
  BudgetTracker b;
  LiftingRoundTrip rt = roundtrip_lifting(s.op, s.fa, &b);
  v.require(rt.report, "roundtrip_lifting");
  for (const char* part : {"left", "right", "left_squares", "right_squares", "fillers"})
    v.require(rt.original[part].dump() == rt.rebuilt[part].dump(), std::string(part) + " differ");
  v.require(rt.original.dump() == rt.rebuilt.dump(), "tables differ");
  info << rt.original["fillers"].size() << " filler entries, " << rt.original.dump().size() << " bytes";
}

void algebras(Verdict& v, std::ostringstream& info)
{
  FinSet S = build_finset(2);
  auto A = std::make_shared<const Awfs>(image_awfs(S));
  auto algs = enumerate_algebras(*A);
  std::multiset<std::string> got, want;
  for (const auto& a : algs)
    got.insert(S.cat->morphism_name(a.f));
  for (const auto& f : oracle::all_maps(2))
    if (oracle::injective(f))
      want.insert(oracle::name(f));
  v.require(got == want, "algebra carriers are not the injections, one each");
  StructureDouble alg = alg_double_category(A);
  auto mono = dbl_from_class(S.cat, S.mono, "Mono");
  ConcreteFunctor F{alg.dbl, mono, {}};
  for (int x = 0; x < alg.dbl->size(); ++x) {
    const auto& over = mono->over_morphism(alg.dbl->over(x));
    F.vmap.push_back(over.empty() ? -1 : over.front());
  }
  v.require(check_bijective(F), "Alg(R) against D(Mono)");
  info << algs.size() << " algebras";
}

void right_connected(Verdict& v, std::ostringstream& info)
{
  auto s = support::epi_mono(2);
  auto A = std::make_shared<const Awfs>(image_awfs(s.set));
  StructureDouble alg = alg_double_category(A);
  BudgetTracker b;
  auto rlp = rlp_double_category(s.L, b);
  v.require(rlp.complete, "RLP enumeration incomplete");
  Report a = check_right_connected(*alg.dbl), r = check_right_connected(*rlp.dbl);
  v.require(a, "Alg(R)");
  v.require(r, "RLP(Epi)");
  info << alg.dbl->size() << " + " << rlp.dbl->size() << " verticals";
}

void mutation(Verdict& v, std::ostringstream& info)
{
  std::set<std::string> families;
  std::size_t caught = 0;
  auto ms = mutants::all();
  for (const auto& m : ms) {
    Report r = m.run();
    const bool ok = support::any_witness(r);
    v.require(ok, m.family + " (" + m.corruption + ") not caught");
    caught += ok;
    families.insert(m.family);
  }
  v.require(families.size() >= 6, "fewer than 6 families");
  info << caught << "/" << ms.size() << " mutants caught across " << families.size() << " families";
}

void redundancy(Verdict& v, std::ostringstream& info)
{
  auto s = support::epi_mono(2);
  v.require(check_factorisation_axiom(s.op, s.fa, FactorisationSide::left_only), "left-only");
  v.require(check_factorisation_axiom(s.op, s.fa, FactorisationSide::right_only), "right-only");
  BudgetTracker b;
  Status both = check_lifting_awfs(s.op, s.fa, FactorisationSide::both, b).status();
  Status left = check_lifting_awfs(s.op, s.fa, FactorisationSide::left_only, b).status();
  Status right = check_lifting_awfs(s.op, s.fa, FactorisationSide::right_only, b).status();
  v.require(both == Status::ok && left == both && right == both, "verdict changed");
  info << "verdict " << to_string(both) << " in all three modes";
}

} // namespace

int main()
{
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<void(Verdict&, std::ostringstream&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "orthogonal (Epi, Mono) on FinSet<=3", 30, orthogonal},
      {2, "comma categories over 2", 10, comma},
      {3, "awfs axioms of the reconstructed FinSet<=2 awfs", 10, awfs_axioms},
      {4, "round trip of the FinSet<=2 lifting awfs", 0, round_trip},
      {5, "algebras of the image awfs are the injections", 0, algebras},
      {6, "right-connectedness of Alg(R) and RLP(Epi)", 0, right_connected},
      {7, "mutation sensitivity", 0, mutation},
      {8, "one-sided factorisation axiom", 0, redundancy},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    std::ostringstream info;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v, info);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0 && secs >= c.limit)
      v.require(false, "over the " + std::to_string(static_cast<int>(c.limit)) + " s limit");
    std::printf("%s %d %s (%.2f s; %s)%s%s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, info.str().c_str(), v.pass ? "" : ": ",
                v.why.str().c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
