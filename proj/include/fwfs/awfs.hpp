#pragma once

// Functorial factorisations, awfs (comonad L, monad R, distributive law),
// coalgebra and algebra double categories, the semantics construction, and
// the reconstruction of an awfs from a lifting awfs.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lifting.hpp"

namespace fwfs {

/// f ↦ (Ef, λf: dom f → Ef, ρf: Ef → cod f) and E on commuting squares.
struct FunctorialFactorisation {
  CatPtr base;
  std::vector<Id> mid, lambda, rho;
  FillerTable E; // (f, g, h, k) → E(h,k): Ef → Eg

  Id lam(Id f) const { return f == kNone ? kNone : lambda[static_cast<std::size_t>(f)]; }
  Id rh(Id f) const { return f == kNone ? kNone : rho[static_cast<std::size_t>(f)]; }
  Id E_of(Id f, Id g, Id h, Id k) const
  {
    if (f == kNone || g == kNone || h == kNone || k == kNone)
      return kNone;
    auto it = E.find({f, g, h, k});
    return it == E.end() ? kNone : it->second;
  }
};

struct Awfs {
  FunctorialFactorisation ff;
  std::vector<Id> delta; // Δf: Ef → E(λf)
  std::vector<Id> mu;    // μf: E(ρf) → Ef
};

inline Report check_functorial_factorisation(const FunctorialFactorisation& ff, BudgetTracker* budget = nullptr)
{
  Report r;
  const FinCategory& C = *ff.base;
  const Id n = static_cast<Id>(C.num_morphisms());
  auto nm = [&](Id m) { return name_or_none(C, m); };
  Check& sec = r.add("ff/section");
  for (Id f = 0; f < n; ++f) {
    ++sec.cases_examined;
    Id M = ff.mid[static_cast<std::size_t>(f)], l = ff.lam(f), p = ff.rh(f);
    bool ok = M != kNone && l != kNone && p != kNone && C.dom(l) == C.dom(f) && C.cod(l) == M && C.dom(p) == M &&
              C.cod(p) == C.cod(f) && C.compose(p, l) == f;
    if (!ok)
      sec.fail(Json{{"f", C.morphism_name(f)}, {"lambda", nm(l)}, {"rho", nm(p)}});
  }
  if (!sec.ok())
    return r;
  Check& bnd = r.add("ff/E-boundaries");
  Check& lnat = r.add("ff/lambda-natural");
  Check& rnat = r.add("ff/rho-natural");
  for (Id f = 0; f < n; ++f)
    for (Id g = 0; g < n; ++g)
      for (const auto& s : C.squares_between(f, g)) {
        ++bnd.cases_examined;
        Id e = ff.E_of(f, g, s.top, s.bottom);
        Json w{{"f", C.morphism_name(f)}, {"g", C.morphism_name(g)}, {"square", Json::array({nm(s.top), nm(s.bottom)})}};
        if (e == kNone || C.dom(e) != ff.mid[static_cast<std::size_t>(f)] || C.cod(e) != ff.mid[static_cast<std::size_t>(g)]) {
          bnd.fail(std::move(w));
          continue;
        }
        ++lnat.cases_examined;
        ++rnat.cases_examined;
        if (C.compose(e, ff.lam(f)) != C.compose(ff.lam(g), s.top))
          lnat.fail(w);
        if (C.compose(ff.rh(g), e) != C.compose(s.bottom, ff.rh(f)))
          rnat.fail(w);
      }
  if (!bnd.ok())
    return r;
  Check& ids = r.add("ff/E-identities");
  for (Id f = 0; f < n; ++f) {
    ++ids.cases_examined;
    Id e = ff.E_of(f, f, C.identity(C.dom(f)), C.identity(C.cod(f)));
    if (e != C.identity(ff.mid[static_cast<std::size_t>(f)]))
      ids.fail(Json{{"f", C.morphism_name(f)}, {"E(1,1)", nm(e)}});
  }
  Check& comp = r.add("ff/E-composition");
  for (Id g = 0; g < n; ++g) {
    for (Id f = 0; f < n; ++f)
      for (const auto& s : C.squares_between(f, g))
        for (Id g2 = 0; g2 < n; ++g2)
          for (const auto& t : C.squares_between(g, g2)) {
            ++comp.cases_examined;
            Id lhs = ff.E_of(f, g2, C.compose(t.top, s.top), C.compose(t.bottom, s.bottom));
            Id rhs = C.compose(ff.E_of(g, g2, t.top, t.bottom), ff.E_of(f, g, s.top, s.bottom));
            if (lhs == kNone || lhs != rhs)
              comp.fail(Json{{"morphisms", Json::array({C.morphism_name(f), C.morphism_name(g), C.morphism_name(g2)})},
                             {"first", Json::array({nm(s.top), nm(s.bottom)})},
                             {"second", Json::array({nm(t.top), nm(t.bottom)})}});
          }
    if (detail::out_of_time(budget, comp))
      break;
  }
  return r;
}

namespace detail {

/// A commuting square of C seen as a morphism of C^2: src → tgt.
struct Arrow2 {
  Id src = kNone, tgt = kNone, top = kNone, bottom = kNone;
  bool valid() const { return src != kNone && tgt != kNone && top != kNone && bottom != kNone; }
  friend bool operator==(const Arrow2&, const Arrow2&) = default;
};

/// The natural transformations of an awfs as squares, composed in C^2.
class AwfsAlgebra {
public:
  explicit AwfsAlgebra(const Awfs& A) : A_(A), C_(*A.ff.base) {}

  Id lam(Id f) const { return A_.ff.lam(f); }
  Id rho(Id f) const { return A_.ff.rh(f); }
  Id one(Id o) const { return o == kNone ? kNone : C_.identity(o); }
  Id dom(Id f) const { return f == kNone ? kNone : C_.dom(f); }
  Id cod(Id f) const { return f == kNone ? kNone : C_.cod(f); }
  Id delta(Id f) const { return f == kNone ? kNone : A_.delta[static_cast<std::size_t>(f)]; }
  Id mu(Id f) const { return f == kNone ? kNone : A_.mu[static_cast<std::size_t>(f)]; }

  Arrow2 id(Id f) const { return {f, f, one(dom(f)), one(cod(f))}; }
  Arrow2 comp(const Arrow2& q, const Arrow2& p) const
  {
    if (!p.valid() || !q.valid() || p.tgt != q.src)
      return {};
    return {p.src, q.tgt, C_.compose(q.top, p.top), C_.compose(q.bottom, p.bottom)};
  }
  Arrow2 L(const Arrow2& s) const
  {
    if (!s.valid())
      return {};
    return {lam(s.src), lam(s.tgt), s.top, A_.ff.E_of(s.src, s.tgt, s.top, s.bottom)};
  }
  Arrow2 R(const Arrow2& s) const
  {
    if (!s.valid())
      return {};
    return {rho(s.src), rho(s.tgt), A_.ff.E_of(s.src, s.tgt, s.top, s.bottom), s.bottom};
  }
  Arrow2 eta(Id f) const { return {f, rho(f), lam(f), one(cod(f))}; }
  Arrow2 eps(Id f) const { return {lam(f), f, one(dom(f)), rho(f)}; }
  Arrow2 Delta(Id f) const { return {lam(f), lam(lam(f)), one(dom(f)), delta(f)}; }
  Arrow2 Mu(Id f) const { return {rho(rho(f)), rho(f), mu(f), one(cod(f))}; }
  Arrow2 dist(Id f) const { return {lam(rho(f)), rho(lam(f)), delta(f), mu(f)}; }

  bool is_square(const Arrow2& s) const { return s.valid() && C_.commutes(s.src, s.tgt, s.top, s.bottom); }

  Json json(const Arrow2& s) const
  {
    return Json::array({name_or_none(C_, s.src), name_or_none(C_, s.tgt), name_or_none(C_, s.top), name_or_none(C_, s.bottom)});
  }

private:
  const Awfs& A_;
  const FinCategory& C_;
};

} // namespace detail

inline Report check_awfs(const Awfs& A, BudgetTracker* budget = nullptr)
{
  Report r = check_functorial_factorisation(A.ff, budget);
  if (!r.ok())
    return r;
  const FinCategory& C = *A.ff.base;
  const Id n = static_cast<Id>(C.num_morphisms());
  detail::AwfsAlgebra T(A);
  using detail::Arrow2;
  auto eq = [&](Check& c, Id f, const Arrow2& lhs, const Arrow2& rhs) {
    ++c.cases_examined;
    if (!lhs.valid() || !(lhs == rhs))
      c.fail(Json{{"f", C.morphism_name(f)}, {"lhs", T.json(lhs)}, {"rhs", T.json(rhs)}});
  };

  Check& db = r.add("comonad/Delta-boundary");
  Check& mb = r.add("monad/mu-boundary");
  for (Id f = 0; f < n; ++f) {
    ++db.cases_examined;
    ++mb.cases_examined;
    const Id d = T.delta(f), m = T.mu(f);
    const Id Ef = A.ff.mid[static_cast<std::size_t>(f)];
    if (d == kNone || C.dom(d) != Ef || C.cod(d) != A.ff.mid[static_cast<std::size_t>(T.lam(f))] || !T.is_square(T.Delta(f)))
      db.fail(Json{{"f", C.morphism_name(f)}, {"Delta", name_or_none(C, d)}});
    if (m == kNone || C.cod(m) != Ef || C.dom(m) != A.ff.mid[static_cast<std::size_t>(T.rho(f))] || !T.is_square(T.Mu(f)))
      mb.fail(Json{{"f", C.morphism_name(f)}, {"mu", name_or_none(C, m)}});
  }
  if (!db.ok() || !mb.ok())
    return r;

  Check& cl = r.add("comonad/counit-left");
  Check& cr = r.add("comonad/counit-right");
  Check& ca = r.add("comonad/coassociativity");
  Check& ml = r.add("monad/unit-left");
  Check& mr = r.add("monad/unit-right");
  Check& ma = r.add("monad/associativity");
  for (Id f = 0; f < n; ++f) {
    eq(cl, f, T.comp(T.eps(T.lam(f)), T.Delta(f)), T.id(T.lam(f)));
    eq(cr, f, T.comp(T.L(T.eps(f)), T.Delta(f)), T.id(T.lam(f)));
    eq(ca, f, T.comp(T.Delta(T.lam(f)), T.Delta(f)), T.comp(T.L(T.Delta(f)), T.Delta(f)));
    eq(ml, f, T.comp(T.Mu(f), T.eta(T.rho(f))), T.id(T.rho(f)));
    eq(mr, f, T.comp(T.Mu(f), T.R(T.eta(f))), T.id(T.rho(f)));
    eq(ma, f, T.comp(T.Mu(f), T.Mu(T.rho(f))), T.comp(T.Mu(f), T.R(T.Mu(f))));
  }

  Check& dn = r.add("comonad/Delta-natural");
  Check& mn = r.add("monad/mu-natural");
  for (Id f = 0; f < n; ++f) {
    for (Id g = 0; g < n; ++g)
      for (const auto& s : C.squares_between(f, g)) {
        Arrow2 sq{f, g, s.top, s.bottom};
        eq(dn, f, T.comp(T.Delta(g), T.L(sq)), T.comp(T.L(T.L(sq)), T.Delta(f)));
        eq(mn, f, T.comp(T.Mu(g), T.R(T.R(sq))), T.comp(T.R(sq), T.Mu(f)));
      }
    if (detail::out_of_time(budget, mn))
      break;
  }

  // δ_f = (Δf, μf): λρf → ρλf.
  Check& ds = r.add("distributive/square");
  Check& d1 = r.add("distributive/unit");
  Check& d2 = r.add("distributive/counit");
  Check& d3 = r.add("distributive/multiplication");
  Check& d4 = r.add("distributive/comultiplication");
  for (Id f = 0; f < n; ++f) {
    ++ds.cases_examined;
    if (!T.is_square(T.dist(f)))
      ds.fail(Json{{"f", C.morphism_name(f)}, {"delta", T.json(T.dist(f))}});
    eq(d1, f, T.comp(T.dist(f), T.L(T.eta(f))), T.eta(T.lam(f)));
    eq(d2, f, T.comp(T.R(T.eps(f)), T.dist(f)), T.eps(T.rho(f)));
    eq(d3, f, T.comp(T.dist(f), T.L(T.Mu(f))), T.comp(T.Mu(T.lam(f)), T.comp(T.R(T.dist(f)), T.dist(T.rho(f)))));
    eq(d4, f, T.comp(T.R(T.Delta(f)), T.dist(f)), T.comp(T.dist(T.lam(f)), T.comp(T.L(T.dist(f)), T.Delta(T.rho(f)))));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Coalgebras and algebras

/// An L-coalgebra (f, s: cod f → Ef) or an R-algebra (f, s: Ef → dom f).
struct Structure {
  Id f = kNone;
  Id s = kNone;
  friend auto operator<=>(const Structure&, const Structure&) = default;
};

inline bool is_coalgebra(const Awfs& A, Id f, Id s)
{
  const FinCategory& C = *A.ff.base;
  const auto& ff = A.ff;
  if (C.dom(s) != C.cod(f) || C.cod(s) != ff.mid[static_cast<std::size_t>(f)])
    return false;
  if (C.compose(s, f) != ff.lam(f) || C.compose(ff.rh(f), s) != C.identity(C.cod(f)))
    return false;
  // (1, s): f → λf
  Id Es = ff.E_of(f, ff.lam(f), C.identity(C.dom(f)), s);
  Id lhs = C.compose(A.delta[static_cast<std::size_t>(f)], s);
  return lhs != kNone && lhs == C.compose(Es, s);
}

inline bool is_algebra(const Awfs& A, Id g, Id p)
{
  const FinCategory& C = *A.ff.base;
  const auto& ff = A.ff;
  if (C.dom(p) != ff.mid[static_cast<std::size_t>(g)] || C.cod(p) != C.dom(g))
    return false;
  if (C.compose(g, p) != ff.rh(g) || C.compose(p, ff.lam(g)) != C.identity(C.dom(g)))
    return false;
  // (p, 1): ρg → g
  Id Ep = ff.E_of(ff.rh(g), g, p, C.identity(C.cod(g)));
  Id lhs = C.compose(p, A.mu[static_cast<std::size_t>(g)]);
  return lhs != kNone && lhs == C.compose(p, Ep);
}

inline std::vector<Structure> enumerate_coalgebras(const Awfs& A)
{
  const FinCategory& C = *A.ff.base;
  std::vector<Structure> out;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f)
    for (Id s : C.hom(C.cod(f), A.ff.mid[static_cast<std::size_t>(f)]))
      if (is_coalgebra(A, f, s))
        out.push_back({f, s});
  return out;
}

inline std::vector<Structure> enumerate_algebras(const Awfs& A)
{
  const FinCategory& C = *A.ff.base;
  std::vector<Structure> out;
  for (Id g = 0; g < static_cast<Id>(C.num_morphisms()); ++g)
    for (Id p : C.hom(A.ff.mid[static_cast<std::size_t>(g)], C.dom(g)))
      if (is_algebra(A, g, p))
        out.push_back({g, p});
  return out;
}

/// (g, t) after (f, s): μ_{gf} ∘ E(E(1,g)∘s, 1) ∘ t.
inline Id coalgebra_composite(const Awfs& A, const Structure& g, const Structure& f)
{
  const FinCategory& C = *A.ff.base;
  const auto& ff = A.ff;
  const Id gf = C.compose(g.f, f.f);
  if (gf == kNone)
    return kNone;
  Id inner = ff.E_of(f.f, gf, C.identity(C.dom(f.f)), g.f);
  Id top = C.compose(inner, f.s);
  Id outer = ff.E_of(g.f, ff.rh(gf), top, C.identity(C.cod(g.f)));
  return C.compose({A.mu[static_cast<std::size_t>(gf)], outer, g.s});
}

/// (h, q) after (g, p): p ∘ E(1, q∘E(g,1)) ∘ Δ_{hg}.
inline Id algebra_composite(const Awfs& A, const Structure& h, const Structure& g)
{
  const FinCategory& C = *A.ff.base;
  const auto& ff = A.ff;
  const Id hg = C.compose(h.f, g.f);
  if (hg == kNone)
    return kNone;
  Id inner = ff.E_of(hg, h.f, g.f, C.identity(C.cod(h.f)));
  Id bottom = C.compose(h.s, inner);
  Id outer = ff.E_of(ff.lam(hg), g.f, C.identity(C.dom(g.f)), bottom);
  return C.compose({g.s, outer, A.delta[static_cast<std::size_t>(hg)]});
}

inline std::string structure_id(const FinCategory& C, const Structure& s)
{
  return C.morphism_name(s.f) + "@" + C.morphism_name(s.s);
}

struct StructureDouble {
  DblPtr dbl;
  std::shared_ptr<const std::vector<Structure>> data; // indexed by vertical
  int find(const FinCategory& C, const Structure& s) const { return s.s == kNone ? -1 : dbl->find(structure_id(C, s)); }
};

namespace detail {

inline StructureDouble structure_double(const std::shared_ptr<const Awfs>& A, bool coalgebras)
{
  const FinCategory& C = *A->ff.base;
  auto found = coalgebras ? enumerate_coalgebras(*A) : enumerate_algebras(*A);
  std::sort(found.begin(), found.end(), [&](const Structure& a, const Structure& b) { return structure_id(C, a) < structure_id(C, b); });
  auto data = std::make_shared<std::vector<Structure>>(found);
  std::vector<Vertical> vs;
  for (const auto& s : found)
    vs.push_back({structure_id(C, s), s.f});
  SquarePredicate pred;
  if (coalgebras)
    pred = [A, data](int a, int b, Id h, Id k) {
      const FinCategory& C = *A->ff.base;
      const auto& x = (*data)[static_cast<std::size_t>(a)];
      const auto& y = (*data)[static_cast<std::size_t>(b)];
      Id lhs = C.compose(A->ff.E_of(x.f, y.f, h, k), x.s);
      return lhs != kNone && lhs == C.compose(y.s, k);
    };
  else
    pred = [A, data](int a, int b, Id h, Id k) {
      const FinCategory& C = *A->ff.base;
      const auto& x = (*data)[static_cast<std::size_t>(a)];
      const auto& y = (*data)[static_cast<std::size_t>(b)];
      Id lhs = C.compose(h, x.s);
      return lhs != kNone && lhs == C.compose(y.s, A->ff.E_of(x.f, y.f, h, k));
    };
  auto D = std::make_shared<ConcreteDouble>(A->ff.base, coalgebras ? "Coalg" : "Alg", std::move(vs), pred);
  StructureDouble out{D, data};
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o) {
    Id i = C.identity(o);
    Structure s{i, coalgebras ? A->ff.lam(i) : A->ff.rh(i)};
    D->set_identity(o, out.find(C, s));
  }
  for (int a = 0; a < D->size(); ++a)
    for (int b = 0; b < D->size(); ++b) {
      if (D->cod(a) != D->dom(b))
        continue;
      const auto& x = (*data)[static_cast<std::size_t>(a)];
      const auto& y = (*data)[static_cast<std::size_t>(b)];
      Id gf = C.compose(y.f, x.f);
      Id s = coalgebras ? coalgebra_composite(*A, y, x) : algebra_composite(*A, y, x);
      D->set_composite(b, a, out.find(C, Structure{gf, s}));
    }
  return out;
}

} // namespace detail

inline StructureDouble coalg_double_category(const std::shared_ptr<const Awfs>& A) { return detail::structure_double(A, true); }
inline StructureDouble alg_double_category(const std::shared_ptr<const Awfs>& A) { return detail::structure_double(A, false); }

// ---------------------------------------------------------------------------
// Semantics

struct SemStructure {
  LiftingStructure op;
  StructureDouble coalg, alg;
  FactorisationAssignment fa;
};

/// (Coalg(L), Φ, Alg(R)) with Φ(u, v) = p∘E(u,v)∘s, and the factorisation
/// f = ρf∘λf with λf carrying Δf and ρf carrying μf.
inline SemStructure sem(const std::shared_ptr<const Awfs>& A)
{
  SemStructure out{{}, coalg_double_category(A), alg_double_category(A), {}};
  auto cd = out.coalg.data;
  auto ad = out.alg.data;
  out.op = LiftingOperation{out.coalg.dbl, out.alg.dbl, "awfs", [A, cd, ad](int j, int k, Id u, Id v) {
                              const FinCategory& C = *A->ff.base;
                              const auto& x = (*cd)[static_cast<std::size_t>(j)];
                              const auto& y = (*ad)[static_cast<std::size_t>(k)];
                              return C.compose({y.s, A->ff.E_of(x.f, y.f, u, v), x.s});
                            }};
  const FinCategory& C = *A->ff.base;
  out.fa.resize(C.num_morphisms());
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    Id l = A->ff.lam(f), p = A->ff.rh(f);
    out.fa[static_cast<std::size_t>(f)] = FactorisationEntry{
        out.coalg.find(C, Structure{l, A->delta[static_cast<std::size_t>(f)]}), A->ff.mid[static_cast<std::size_t>(f)],
        out.alg.find(C, Structure{p, A->mu[static_cast<std::size_t>(f)]})};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction

struct Reconstruction {
  Report report;
  std::optional<Awfs> awfs;
};

/// The awfs of a lifting awfs: E(h,k) from the universal property of the
/// right factor applied to (λg∘h, k); Δf from the couniversal property of the
/// left factor of λf applied to the identity square on λf; μf dually.
inline Reconstruction awfs_from_lifting(const LiftingStructure& S, const FactorisationAssignment& fa, BudgetTracker* budget = nullptr)
{
  Reconstruction out;
  const FinCategory& C = *S.left->base();
  const Id n = static_cast<Id>(C.num_morphisms());
  Check& tot = out.report.add("reconstruct/assignment");
  for (Id f = 0; f < n; ++f) {
    ++tot.cases_examined;
    if (!has_entry(fa, f))
      tot.fail(Json{{"f", C.morphism_name(f)}, {"kind", "missing"}});
  }
  if (!tot.ok())
    return out;
  Awfs A;
  A.ff.base = S.left->base();
  for (Id f = 0; f < n; ++f) {
    const auto& e = fa[static_cast<std::size_t>(f)];
    A.ff.mid.push_back(e.mid);
    A.ff.lambda.push_back(S.left->over(e.left));
    A.ff.rho.push_back(S.right->over(e.right));
  }
  auto unique = [&](Check& c, const std::vector<Id>& cands, Json w) {
    ++c.cases_examined;
    if (cands.size() == 1)
      return cands.front();
    w["kind"] = cands.empty() ? "no factorising square" : "non-unique factorising square";
    c.fail(std::move(w));
    return kNone;
  };
  Check& ec = out.report.add("reconstruct/E");
  for (Id f = 0; f < n; ++f) {
    for (Id g = 0; g < n; ++g)
      for (const auto& s : C.squares_between(f, g)) {
        const auto& eg = fa[static_cast<std::size_t>(g)];
        Id a = C.compose(A.ff.lam(g), s.top);
        Id e = unique(ec, universal_candidates(S, fa[static_cast<std::size_t>(f)], eg.right, a, s.bottom),
                      Json{{"f", C.morphism_name(f)}, {"g", C.morphism_name(g)},
                           {"square", Json::array({C.morphism_name(s.top), C.morphism_name(s.bottom)})}});
        if (e != kNone)
          A.ff.E[{f, g, s.top, s.bottom}] = e;
      }
    if (detail::out_of_time(budget, ec))
      return out;
  }
  Check& dc = out.report.add("reconstruct/Delta");
  Check& mc = out.report.add("reconstruct/mu");
  for (Id f = 0; f < n; ++f) {
    const auto& e = fa[static_cast<std::size_t>(f)];
    const Id l = A.ff.lam(f), p = A.ff.rh(f);
    A.delta.push_back(unique(dc, couniversal_candidates(S, fa[static_cast<std::size_t>(l)], e.left, C.identity(C.dom(f)), C.identity(e.mid)),
                             Json{{"f", C.morphism_name(f)}}));
    A.mu.push_back(unique(mc, universal_candidates(S, fa[static_cast<std::size_t>(p)], e.right, C.identity(e.mid), C.identity(C.cod(f))),
                          Json{{"f", C.morphism_name(f)}}));
  }
  if (out.report.ok())
    out.awfs = std::move(A);
  return out;
}

/// The coalgebra carried by a left vertical j over f: the couniversal factor
/// of the identity square on f.
inline Structure coalgebra_of(const LiftingStructure& S, const FactorisationAssignment& fa, int j)
{
  const FinCategory& C = *S.left->base();
  const Id f = S.left->over(j);
  auto c = couniversal_candidates(S, fa[static_cast<std::size_t>(f)], j, C.identity(C.dom(f)), C.identity(C.cod(f)));
  return {f, c.size() == 1 ? c.front() : kNone};
}

/// The algebra carried by a right vertical k over g: the universal factor of
/// the identity square on g.
inline Structure algebra_of(const LiftingStructure& S, const FactorisationAssignment& fa, int k)
{
  const FinCategory& C = *S.left->base();
  const Id g = S.right->over(k);
  auto c = universal_candidates(S, fa[static_cast<std::size_t>(g)], k, C.identity(C.dom(g)), C.identity(C.cod(g)));
  return {g, c.size() == 1 ? c.front() : kNone};
}

/// Verticals, squares and fillers of a lifting structure in canonical order,
/// with verticals renamed through the given maps.
inline Json canonical_tables(const LiftingStructure& S, const std::vector<std::string>& left_names,
                             const std::vector<std::string>& right_names)
{
  const FinCategory& C = *S.left->base();
  auto verts = [&](const ConcreteDouble& D, const std::vector<std::string>& names) {
    std::vector<std::pair<std::string, std::string>> v;
    for (int i = 0; i < D.size(); ++i)
      v.emplace_back(names[static_cast<std::size_t>(i)], C.morphism_name(D.over(i)));
    std::sort(v.begin(), v.end());
    Json arr = Json::array();
    for (const auto& [a, b] : v)
      arr.push_back(Json::array({a, b}));
    return arr;
  };
  auto squares = [&](const ConcreteDouble& D, const std::vector<std::string>& names) {
    std::vector<std::array<std::string, 4>> v;
    for (int a = 0; a < D.size(); ++a)
      for (int b = 0; b < D.size(); ++b)
        for (const auto& p : D.squares(a, b))
          v.push_back({names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)], C.morphism_name(p.top), C.morphism_name(p.bottom)});
    std::sort(v.begin(), v.end());
    Json arr = Json::array();
    for (const auto& e : v)
      arr.push_back(Json::array({e[0], e[1], e[2], e[3]}));
    return arr;
  };
  std::vector<std::array<std::string, 5>> fills;
  for (const auto& e : filler_entries(S))
    fills.push_back({left_names[static_cast<std::size_t>(e.j)], right_names[static_cast<std::size_t>(e.k)], C.morphism_name(e.u),
                     C.morphism_name(e.v), name_or_none(C, e.d)});
  std::sort(fills.begin(), fills.end());
  Json fa = Json::array();
  for (const auto& e : fills)
    fa.push_back(Json::array({e[0], e[1], e[2], e[3], e[4]}));
  return Json{{"left", verts(*S.left, left_names)},
              {"right", verts(*S.right, right_names)},
              {"left_squares", squares(*S.left, left_names)},
              {"right_squares", squares(*S.right, right_names)},
              {"fillers", fa}};
}

inline std::vector<std::string> vertical_names(const ConcreteDouble& D)
{
  std::vector<std::string> out;
  for (int v = 0; v < D.size(); ++v)
    out.push_back(D.vid(v));
  return out;
}

struct LiftingRoundTrip {
  Report report;
  std::shared_ptr<const Awfs> awfs;
  Json original, rebuilt;
};

/// S against sem(awfs_from_lifting(S)) under the identification of each
/// vertical with the (co)algebra it carries.
inline LiftingRoundTrip roundtrip_lifting(const LiftingStructure& S, const FactorisationAssignment& fa, BudgetTracker* budget = nullptr)
{
  LiftingRoundTrip out;
  auto rec = awfs_from_lifting(S, fa, budget);
  out.report.absorb(std::move(rec.report));
  if (!rec.awfs)
    return out;
  out.awfs = std::make_shared<const Awfs>(std::move(*rec.awfs));
  out.report.absorb(check_awfs(*out.awfs, budget));
  const FinCategory& C = *S.left->base();
  SemStructure T = sem(out.awfs);
  std::vector<std::string> ln, rn;
  Check& id = out.report.add("roundtrip/identification");
  for (int j = 0; j < S.left->size(); ++j) {
    ++id.cases_examined;
    Structure s = coalgebra_of(S, fa, j);
    int v = T.coalg.find(C, s);
    if (v < 0)
      id.fail(Json{{"left", S.left->vid(j)}});
    ln.push_back(v < 0 ? "?" + S.left->vid(j) : T.coalg.dbl->vid(v));
  }
  for (int k = 0; k < S.right->size(); ++k) {
    ++id.cases_examined;
    Structure p = algebra_of(S, fa, k);
    int v = T.alg.find(C, p);
    if (v < 0)
      id.fail(Json{{"right", S.right->vid(k)}});
    rn.push_back(v < 0 ? "?" + S.right->vid(k) : T.alg.dbl->vid(v));
  }
  out.original = canonical_tables(S, ln, rn);
  out.rebuilt = canonical_tables(T.op, vertical_names(*T.coalg.dbl), vertical_names(*T.alg.dbl));
  for (const char* part : {"left", "right", "left_squares", "right_squares", "fillers"}) {
    Check& c = out.report.add(std::string("roundtrip/") + part);
    ++c.cases_examined;
    const Json& a = out.original[part];
    const Json& b = out.rebuilt[part];
    if (a.dump() != b.dump()) {
      Json w{{"table", part}, {"original_size", a.size()}, {"rebuilt_size", b.size()}};
      for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        Json x = i < a.size() ? a[i] : Json();
        Json y = i < b.size() ? b[i] : Json();
        if (x != y) {
          w["first_difference"] = Json{{"original", x}, {"rebuilt", y}};
          break;
        }
      }
      c.fail(std::move(w));
    }
  }
  return out;
}

/// awfs_from_lifting(sem(A)) against A, table by table.
inline Report roundtrip_awfs(const std::shared_ptr<const Awfs>& A, BudgetTracker* budget = nullptr)
{
  Report r;
  SemStructure T = sem(A);
  auto rec = awfs_from_lifting(T.op, T.fa, budget);
  r.absorb(std::move(rec.report));
  if (!rec.awfs)
    return r;
  const Awfs& B = *rec.awfs;
  const FinCategory& C = *A->ff.base;
  Check& c = r.add("roundtrip/awfs-tables");
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    ++c.cases_examined;
    const auto i = static_cast<std::size_t>(f);
    if (A->ff.mid[i] != B.ff.mid[i] || A->ff.lambda[i] != B.ff.lambda[i] || A->ff.rho[i] != B.ff.rho[i] || A->delta[i] != B.delta[i] ||
        A->mu[i] != B.mu[i])
      c.fail(Json{{"f", C.morphism_name(f)}});
  }
  for (const auto& [key, e] : A->ff.E) {
    ++c.cases_examined;
    if (B.ff.E_of(key[0], key[1], key[2], key[3]) != e)
      c.fail(Json{{"E", Json::array({C.morphism_name(key[2]), C.morphism_name(key[3]), C.morphism_name(key[0]), C.morphism_name(key[1])})}});
  }
  if (A->ff.E.size() != B.ff.E.size())
    c.fail(Json{{"kind", "E table sizes differ"}});
  return r;
}

// ---------------------------------------------------------------------------
// Morphisms of awfs

/// K_f: Ef → E'f. (1, K) must be a comonad morphism L → L' and (K, 1) a
/// monad morphism R → R'.
inline Report check_awfs_morphism(const Awfs& A, const Awfs& B, const std::vector<Id>& K)
{
  Report r;
  const FinCategory& C = *A.ff.base;
  const Id n = static_cast<Id>(C.num_morphisms());
  auto nm = [&](Id m) { return name_or_none(C, m); };
  auto k = [&](Id f) { return f == kNone || static_cast<std::size_t>(f) >= K.size() ? kNone : K[static_cast<std::size_t>(f)]; };
  Check& tri = r.add("morphism/triangles");
  for (Id f = 0; f < n; ++f) {
    ++tri.cases_examined;
    Id Kf = k(f);
    bool typed = Kf != kNone && C.dom(Kf) == A.ff.mid[static_cast<std::size_t>(f)] && C.cod(Kf) == B.ff.mid[static_cast<std::size_t>(f)];
    if (!typed || C.compose(Kf, A.ff.lam(f)) != B.ff.lam(f) || C.compose(B.ff.rh(f), Kf) != A.ff.rh(f))
      tri.fail(Json{{"f", C.morphism_name(f)}, {"K", nm(Kf)}});
  }
  if (!tri.ok())
    return r;
  Check& nat = r.add("morphism/natural");
  for (Id f = 0; f < n; ++f)
    for (Id g = 0; g < n; ++g)
      for (const auto& s : C.squares_between(f, g)) {
        ++nat.cases_examined;
        Id lhs = C.compose(k(g), A.ff.E_of(f, g, s.top, s.bottom));
        Id rhs = C.compose(B.ff.E_of(f, g, s.top, s.bottom), k(f));
        if (lhs == kNone || lhs != rhs)
          nat.fail(Json{{"f", C.morphism_name(f)}, {"g", C.morphism_name(g)}, {"square", Json::array({nm(s.top), nm(s.bottom)})}});
      }
  Check& com = r.add("morphism/comonad (1,K)");
  Check& mon = r.add("morphism/monad (K,1)");
  for (Id f = 0; f < n; ++f) {
    const Id A0 = C.dom(f), B0 = C.cod(f);
    const Id l = A.ff.lam(f), p = A.ff.rh(f);
    ++com.cases_examined;
    // Δ'f∘K_f = E'(1,K_f)∘K_{λf}∘Δf, with (1,K_f): λf → λ'f.
    Id lhs = C.compose(B.delta[static_cast<std::size_t>(f)], k(f));
    Id rhs = C.compose({B.ff.E_of(l, B.ff.lam(f), C.identity(A0), k(f)), k(l), A.delta[static_cast<std::size_t>(f)]});
    if (lhs == kNone || lhs != rhs)
      com.fail(Json{{"f", C.morphism_name(f)}, {"lhs", nm(lhs)}, {"rhs", nm(rhs)}});
    ++mon.cases_examined;
    // K_f∘μf = μ'f∘E'(K_f,1)∘K_{ρf}, with (K_f,1): ρf → ρ'f.
    lhs = C.compose(k(f), A.mu[static_cast<std::size_t>(f)]);
    rhs = C.compose({B.mu[static_cast<std::size_t>(f)], B.ff.E_of(p, B.ff.rh(f), k(f), C.identity(B0)), k(p)});
    if (lhs == kNone || lhs != rhs)
      mon.fail(Json{{"f", C.morphism_name(f)}, {"lhs", nm(lhs)}, {"rhs", nm(rhs)}});
  }
  return r;
}

/// Every awfs morphism A → B, by search over the maps Ef → E'f that make
/// both triangles commute.
inline std::vector<std::vector<Id>> find_awfs_morphisms(const Awfs& A, const Awfs& B, BudgetTracker& budget, bool& complete)
{
  complete = true;
  const FinCategory& C = *A.ff.base;
  const Id n = static_cast<Id>(C.num_morphisms());
  std::vector<std::vector<Id>> choices;
  for (Id f = 0; f < n; ++f) {
    std::vector<Id> cs;
    for (Id Kf : C.hom(A.ff.mid[static_cast<std::size_t>(f)], B.ff.mid[static_cast<std::size_t>(f)]))
      if (C.compose(Kf, A.ff.lam(f)) == B.ff.lam(f) && C.compose(B.ff.rh(f), Kf) == A.ff.rh(f))
        cs.push_back(Kf);
    if (cs.empty())
      return {};
    choices.push_back(std::move(cs));
  }
  std::vector<std::vector<Id>> out;
  std::vector<std::size_t> at(choices.size(), 0);
  std::vector<Id> K(choices.size());
  while (true) {
    if (!budget.consume()) {
      complete = false;
      return out;
    }
    for (std::size_t i = 0; i < at.size(); ++i)
      K[i] = choices[i][at[i]];
    if (check_awfs_morphism(A, B, K).ok())
      out.push_back(K);
    bool done = true;
    for (std::size_t i = at.size(); i > 0; --i) {
      if (++at[i - 1] < choices[i - 1].size()) {
        done = false;
        break;
      }
      at[i - 1] = 0;
    }
    if (done)
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Necessary conditions for lying in the image of the semantics

/// A free structure on f: a vertical v and a unit square (top, 1): f → Vv.
struct FreeStructure {
  int vertical = -1;
  Id unit_top = kNone;
};

inline Report check_essential_image(const DblPtr& U, const std::vector<FreeStructure>& free = {}, BudgetTracker* budget = nullptr)
{
  Report r;
  const ConcreteDouble& D = *U;
  const FinCategory& C = *D.base();
  InternalForm X = to_internal(D);
  InternalForm S = to_internal(*sq_concrete(D.base()));
  r.absorb(check_concreteness(forgetful_functor(X, D, S), X.dbl));
  r.absorb(check_double_category(X.dbl, budget), "double");
  r.absorb(check_right_connected(D));
  if (!free.empty()) {
    Check& c = r.add("free-structures");
    for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
      ++c.cases_examined;
      const auto& fs = free[static_cast<std::size_t>(f)];
      bool ok = fs.vertical >= 0 && fs.unit_top != kNone && D.cod(fs.vertical) == C.cod(f) &&
                C.commutes(f, D.over(fs.vertical), fs.unit_top, C.identity(C.cod(f)));
      if (!ok)
        c.fail(Json{{"f", C.morphism_name(f)}});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Stock awfs

/// Image factorisation on finite sets: f itself followed by the identity when
/// f is onto; otherwise the image labelled in order of first appearance.
inline FunctorialFactorisation image_factorisation(const FinSet& S)
{
  const FinCategory& C = *S.cat;
  FunctorialFactorisation ff;
  ff.base = S.cat;
  const Id n = static_cast<Id>(C.num_morphisms());
  std::vector<std::vector<int>> image(static_cast<std::size_t>(n)); // ρf as a list of values
  auto by_values = [&](int m, int k, const std::vector<int>& vals) { return C.morphism(finset_morphism_name(m, k, vals)); };
  for (Id f = 0; f < n; ++f) {
    const auto& vals = S.values[static_cast<std::size_t>(f)];
    const int k = std::stoi(C.object_name(C.cod(f)));
    std::vector<int> order, lab(vals.size());
    for (std::size_t x = 0; x < vals.size(); ++x) {
      auto it = std::find(order.begin(), order.end(), vals[x]);
      lab[x] = static_cast<int>(it - order.begin());
      if (it == order.end())
        order.push_back(vals[x]);
    }
    const int m = static_cast<int>(vals.size());
    if (contains(S.epi, f)) {
      std::vector<int> id(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i)
        id[static_cast<std::size_t>(i)] = i;
      order = id;
      lab = vals;
    }
    const int e = static_cast<int>(order.size());
    ff.mid.push_back(C.object(std::to_string(e)));
    ff.lambda.push_back(by_values(m, e, lab));
    ff.rho.push_back(by_values(e, k, order));
    image[static_cast<std::size_t>(f)] = order;
  }
  for (Id f = 0; f < n; ++f)
    for (Id g = 0; g < n; ++g)
      for (const auto& s : C.squares_between(f, g)) {
        const auto& kv = S.values[static_cast<std::size_t>(s.bottom)];
        const auto& imf = image[static_cast<std::size_t>(f)];
        const auto& img = image[static_cast<std::size_t>(g)];
        std::vector<int> vals;
        for (int y : imf)
          vals.push_back(static_cast<int>(std::find(img.begin(), img.end(), kv[static_cast<std::size_t>(y)]) - img.begin()));
        ff.E[{f, g, s.top, s.bottom}] = by_values(static_cast<int>(imf.size()), static_cast<int>(img.size()), vals);
      }
  return ff;
}

/// The image factorisation with identity comultiplication and multiplication.
inline Awfs image_awfs(const FinSet& S)
{
  Awfs A;
  A.ff = image_factorisation(S);
  const FinCategory& C = *S.cat;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    A.delta.push_back(C.identity(A.ff.mid[static_cast<std::size_t>(f)]));
    A.mu.push_back(C.identity(A.ff.mid[static_cast<std::size_t>(f)]));
  }
  return A;
}

/// Ef = dom f with λf = 1 (left) or Ef = cod f with ρf = 1 (right).
inline Awfs trivial_awfs(const CatPtr& Cp, bool left)
{
  const FinCategory& C = *Cp;
  Awfs A;
  A.ff.base = Cp;
  const Id n = static_cast<Id>(C.num_morphisms());
  for (Id f = 0; f < n; ++f) {
    Id o = left ? C.dom(f) : C.cod(f);
    A.ff.mid.push_back(o);
    A.ff.lambda.push_back(left ? C.identity(o) : f);
    A.ff.rho.push_back(left ? f : C.identity(o));
    A.delta.push_back(C.identity(o));
    A.mu.push_back(C.identity(o));
  }
  for (Id f = 0; f < n; ++f)
    for (Id g = 0; g < n; ++g)
      for (const auto& s : C.squares_between(f, g))
        A.ff.E[{f, g, s.top, s.bottom}] = left ? s.top : s.bottom;
  return A;
}

} // namespace fwfs
