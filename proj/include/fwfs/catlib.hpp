#pragma once

// Split reflections, split fibrations, comma categories and the canonical
// filler, assembled into a lifting operation over a finite fragment of Cat.

#include <array>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lifting.hpp"

namespace fwfs {

/// u: A → B with left adjoint f: B → A, f∘u = 1, and unit η: 1 ⇒ u∘f.
struct SplitReflection {
  std::string name;
  Functor u, f;
  std::vector<Id> eta; // indexed by object of B
};

/// p: A → B with chosen lifts θ(a, β): a*β → a for β: b → p a.
struct SplitFibration {
  std::string name;
  Functor p;
  std::map<std::pair<Id, Id>, Id> theta;

  Id lift(Id a, Id beta) const
  {
    auto it = theta.find({a, beta});
    return it == theta.end() ? kNone : it->second;
  }
};

inline SplitReflection identity_reflection(const CatPtr& A, std::string name)
{
  SplitReflection s{std::move(name), identity_functor(A), identity_functor(A), {}};
  for (Id o = 0; o < static_cast<Id>(A->num_objects()); ++o)
    s.eta.push_back(A->identity(o));
  return s;
}

inline SplitFibration identity_fibration(const CatPtr& A, std::string name)
{
  SplitFibration s{std::move(name), identity_functor(A), {}};
  for (Id m = 0; m < static_cast<Id>(A->num_morphisms()); ++m)
    s.theta[{A->cod(m), m}] = m;
  return s;
}

/// (u', f', η') after (u, f, η): u'u with left adjoint f f' and unit
/// u'(η_{f'c}) ∘ η'_c.
inline SplitReflection compose_reflections(const SplitReflection& second, const SplitReflection& first, std::string name)
{
  SplitReflection s{std::move(name), compose_functors(second.u, first.u), compose_functors(first.f, second.f), {}};
  const FinCategory& C = *second.u.target;
  for (Id c = 0; c < static_cast<Id>(C.num_objects()); ++c) {
    Id inner = first.eta[static_cast<std::size_t>(second.f.on_obj(c))];
    s.eta.push_back(C.compose(second.u.on_mor(inner), second.eta[static_cast<std::size_t>(c)]));
  }
  return s;
}

/// (q, θ') after (p, θ): q p with θ''(x, β) = θ(x, θ'(p x, β)).
inline SplitFibration compose_fibrations(const SplitFibration& second, const SplitFibration& first, std::string name)
{
  SplitFibration s{std::move(name), compose_functors(second.p, first.p), {}};
  const FinCategory& A = *first.p.source;
  const FinCategory& C = *second.p.target;
  for (Id x = 0; x < static_cast<Id>(A.num_objects()); ++x) {
    const Id px = first.p.on_obj(x);
    const Id qpx = second.p.on_obj(px);
    for (Id b = 0; b < static_cast<Id>(C.num_objects()); ++b)
      for (Id beta : C.hom(b, qpx)) {
        Id mid = second.lift(px, beta);
        s.theta[{x, beta}] = mid == kNone ? kNone : first.lift(x, mid);
      }
  }
  return s;
}

inline Report check_split_reflection(const SplitReflection& S)
{
  Report r;
  r.absorb(check_functor(S.u), "u");
  r.absorb(check_functor(S.f), "f");
  if (!r.ok())
    return r;
  const FinCategory& A = *S.u.source;
  const FinCategory& B = *S.u.target;
  Check& fu = r.add("fu=1");
  ++fu.cases_examined;
  if (S.f.source.get() != S.u.target.get() || S.f.target.get() != S.u.source.get())
    fu.fail(Json{{"kind", "categories"}});
  else if (!(compose_functors(S.f, S.u) == identity_functor(S.u.source)))
    fu.fail(Json{{"kind", "f u differs from the identity"}});
  if (!fu.ok())
    return r;
  NatTransformation eta{identity_functor(S.u.target), compose_functors(S.u, S.f), S.eta};
  r.absorb(check_nat(eta, "eta"));
  if (!r.ok())
    return r;
  Check& t1 = r.add("eta-on-u");
  for (Id a = 0; a < static_cast<Id>(A.num_objects()); ++a) {
    ++t1.cases_examined;
    Id e = S.eta[static_cast<std::size_t>(S.u.on_obj(a))];
    if (!B.is_identity(e))
      t1.fail(Json{{"object", A.object_name(a)}, {"eta", B.morphism_name(e)}});
  }
  Check& t2 = r.add("f-on-eta");
  for (Id b = 0; b < static_cast<Id>(B.num_objects()); ++b) {
    ++t2.cases_examined;
    Id e = S.f.on_mor(S.eta[static_cast<std::size_t>(b)]);
    if (!A.is_identity(e))
      t2.fail(Json{{"object", B.object_name(b)}, {"f(eta)", A.morphism_name(e)}});
  }
  return r;
}

/// (entry a, entry β, g, γ) → the unique χ with p χ = γ and θ(a,β)∘χ = g.
using CartesianIndex = std::map<std::array<Id, 4>, Id>;

namespace detail {

inline void cartesian_search(const SplitFibration& F, Check* c, CartesianIndex* index)
{
  const FinCategory& A = *F.p.source;
  const FinCategory& B = *F.p.target;
  for (const auto& [key, t] : F.theta) {
    if (t == kNone)
      continue;
    const auto [a, beta] = key;
    const Id x = A.dom(t);
    for (Id y = 0; y < static_cast<Id>(A.num_objects()); ++y)
      for (Id g : A.hom(y, a))
        for (Id gamma : B.hom(F.p.on_obj(y), B.dom(beta))) {
          if (B.compose(beta, gamma) != F.p.on_mor(g))
            continue;
          if (c)
            ++c->cases_examined;
          Id found = kNone;
          int count = 0;
          for (Id chi : A.hom(y, x))
            if (F.p.on_mor(chi) == gamma && A.compose(t, chi) == g) {
              found = chi;
              ++count;
            }
          if (count == 1) {
            if (index)
              (*index)[{a, beta, g, gamma}] = found;
          } else if (c) {
            c->fail(Json{{"object", A.object_name(a)},
                         {"beta", B.morphism_name(beta)},
                         {"g", A.morphism_name(g)},
                         {"gamma", B.morphism_name(gamma)},
                         {"factorisations", count}});
          }
        }
  }
}

} // namespace detail

inline CartesianIndex cartesian_index(const SplitFibration& F)
{
  CartesianIndex idx;
  detail::cartesian_search(F, nullptr, &idx);
  return idx;
}

inline Report check_split_fibration(const SplitFibration& F)
{
  Report r;
  r.absorb(check_functor(F.p), "p");
  if (!r.ok())
    return r;
  const FinCategory& A = *F.p.source;
  const FinCategory& B = *F.p.target;
  Check& tot = r.add("cleavage/lifts");
  for (Id a = 0; a < static_cast<Id>(A.num_objects()); ++a)
    for (Id b = 0; b < static_cast<Id>(B.num_objects()); ++b)
      for (Id beta : B.hom(b, F.p.on_obj(a))) {
        ++tot.cases_examined;
        Id t = F.lift(a, beta);
        if (t == kNone || A.cod(t) != a || F.p.on_mor(t) != beta)
          tot.fail(Json{{"object", A.object_name(a)}, {"beta", B.morphism_name(beta)}, {"lift", name_or_none(A, t)}});
      }
  Check& extra = r.add("cleavage/domain");
  for (const auto& [key, t] : F.theta) {
    ++extra.cases_examined;
    const auto [a, beta] = key;
    if (a < 0 || a >= static_cast<Id>(A.num_objects()) || beta < 0 || beta >= static_cast<Id>(B.num_morphisms()) ||
        B.cod(beta) != F.p.on_obj(a))
      extra.fail(Json{{"entry", Json::array({a, beta})}});
  }
  if (!tot.ok() || !extra.ok())
    return r;
  Check& ids = r.add("split/identities");
  for (Id a = 0; a < static_cast<Id>(A.num_objects()); ++a) {
    ++ids.cases_examined;
    Id t = F.lift(a, B.identity(F.p.on_obj(a)));
    if (t != A.identity(a))
      ids.fail(Json{{"object", A.object_name(a)}, {"lift", A.morphism_name(t)}});
  }
  Check& comp = r.add("split/composition");
  for (const auto& [key, t] : F.theta) {
    const auto [a, beta] = key;
    const Id x = A.dom(t);
    for (Id c = 0; c < static_cast<Id>(B.num_objects()); ++c)
      for (Id beta2 : B.hom(c, B.dom(beta))) {
        ++comp.cases_examined;
        Id lhs = F.lift(a, B.compose(beta, beta2));
        Id rhs = A.compose(t, F.lift(x, beta2));
        if (lhs != rhs)
          comp.fail(Json{{"object", A.object_name(a)}, {"beta", B.morphism_name(beta)}, {"beta'", B.morphism_name(beta2)},
                         {"lift", A.morphism_name(lhs)}, {"composite", name_or_none(A, rhs)}});
      }
  }
  Check& cart = r.add("cartesian");
  detail::cartesian_search(F, &cart, nullptr);
  return r;
}

// ---------------------------------------------------------------------------
// Canonical filler

namespace detail {

inline Id cartesian_factor(const SplitFibration& F, const CartesianIndex* idx, Id a, Id beta, Id g, Id gamma)
{
  if (idx) {
    auto it = idx->find({a, beta, g, gamma});
    return it == idx->end() ? kNone : it->second;
  }
  const FinCategory& A = *F.p.source;
  const Id t = F.lift(a, beta);
  if (t == kNone)
    return kNone;
  Id found = kNone;
  int count = 0;
  for (Id chi : A.hom(A.dom(g), A.dom(t)))
    if (F.p.on_mor(chi) == gamma && A.compose(t, chi) == g) {
      found = chi;
      ++count;
    }
  return count == 1 ? found : kNone;
}

} // namespace detail

/// The diagonal k of a commuting square (r, s): u → g with u a split
/// reflection and g a split fibration: k b = dom θ(r f b, s η_b), and k α the
/// unique morphism over s α with θ_{b'}∘k α = r f α∘θ_b.
inline Functor canonical_filler(const SplitReflection& S, const SplitFibration& F, const Functor& r, const Functor& s,
                                const CartesianIndex* idx = nullptr)
{
  const FinCategory& B = *S.u.target;
  const FinCategory& C = *F.p.source;
  if (!(compose_functors(F.p, r) == compose_functors(s, S.u)))
    throw Error("square does not commute");
  Functor k{S.u.target, F.p.source, std::vector<Id>(B.num_objects(), kNone), std::vector<Id>(B.num_morphisms(), kNone)};
  std::vector<Id> th(B.num_objects(), kNone);
  for (Id b = 0; b < static_cast<Id>(B.num_objects()); ++b) {
    Id t = F.lift(r.on_obj(S.f.on_obj(b)), s.on_mor(S.eta[static_cast<std::size_t>(b)]));
    if (t == kNone)
      throw Error("not a split fibration: missing lift at '" + B.object_name(b) + "'");
    th[static_cast<std::size_t>(b)] = t;
    k.obj[static_cast<std::size_t>(b)] = C.dom(t);
  }
  for (Id al = 0; al < static_cast<Id>(B.num_morphisms()); ++al) {
    const Id b = B.dom(al), b2 = B.cod(al);
    Id g = C.compose(r.on_mor(S.f.on_mor(al)), th[static_cast<std::size_t>(b)]);
    Id chi = detail::cartesian_factor(F, idx, r.on_obj(S.f.on_obj(b2)), s.on_mor(S.eta[static_cast<std::size_t>(b2)]), g, s.on_mor(al));
    if (chi == kNone)
      throw Error("not a split fibration: no unique factorisation for '" + B.morphism_name(al) + "'");
    k.mor[static_cast<std::size_t>(al)] = chi;
  }
  if (!check_functor(k).ok())
    throw Error("canonical filler is not a functor");
  if (!(compose_functors(k, S.u) == r) || !(compose_functors(F.p, k) == s))
    throw Error("canonical filler violates a triangle");
  return k;
}

/// Every functor k with k∘u = r and g∘k = s.
inline std::vector<Functor> functor_fillers(const Functor& u, const Functor& g, const Functor& r, const Functor& s, BudgetTracker& budget,
                                            bool& complete)
{
  std::vector<Functor> out;
  for (auto& k : enumerate_functors(u.target, g.source, budget, complete))
    if (compose_functors(k, u) == r && compose_functors(g, k) == s)
      out.push_back(std::move(k));
  return out;
}

// ---------------------------------------------------------------------------
// Comma categories

/// B/f for f: A → B, with i_f ⊣-adjoint c_f (identity counit) and the split
/// fibration d_f, so that f = d_f ∘ i_f.
struct CommaData {
  CatPtr comma;
  Functor f;
  SplitReflection reflection; // u = i_f, f = c_f
  SplitFibration fibration;   // p = d_f
  const Functor& i() const { return reflection.u; }
  const Functor& c() const { return reflection.f; }
  const Functor& d() const { return fibration.p; }
};

inline std::string comma_object_name(const FinCategory& A, const FinCategory& B, Id alpha, Id a)
{
  return "(" + B.morphism_name(alpha) + "," + A.object_name(a) + ")";
}

inline CommaData comma_category(const Functor& f, const std::string& name = "B/f")
{
  if (!check_functor(f).ok())
    throw Error("comma_category: not a functor");
  const FinCategory& A = *f.source;
  const FinCategory& B = *f.target;
  struct Obj {
    Id alpha, a;
  };
  struct Mor {
    Id beta, gamma;
    int src, tgt;
  };
  std::vector<Obj> objs;
  for (Id a = 0; a < static_cast<Id>(A.num_objects()); ++a)
    for (Id b = 0; b < static_cast<Id>(B.num_objects()); ++b)
      for (Id alpha : B.hom(b, f.on_obj(a)))
        objs.push_back({alpha, a});
  auto oname = [&](int i) { return comma_object_name(A, B, objs[static_cast<std::size_t>(i)].alpha, objs[static_cast<std::size_t>(i)].a); };
  std::vector<Mor> mors;
  for (int x = 0; x < static_cast<int>(objs.size()); ++x)
    for (int y = 0; y < static_cast<int>(objs.size()); ++y) {
      const auto& X = objs[static_cast<std::size_t>(x)];
      const auto& Y = objs[static_cast<std::size_t>(y)];
      for (Id beta : B.hom(B.dom(X.alpha), B.dom(Y.alpha)))
        for (Id gamma : A.hom(X.a, Y.a))
          if (B.compose(Y.alpha, beta) == B.compose(f.on_mor(gamma), X.alpha))
            mors.push_back({beta, gamma, x, y});
    }
  auto mname = [&](const Mor& m) { return "[" + B.morphism_name(m.beta) + "," + A.morphism_name(m.gamma) + "]:" + oname(m.src) + "->" + oname(m.tgt); };
  std::map<std::tuple<Id, Id, int, int>, std::size_t> mindex;
  for (std::size_t i = 0; i < mors.size(); ++i)
    mindex[{mors[i].beta, mors[i].gamma, mors[i].src, mors[i].tgt}] = i;

  FinCategory::Spec spec;
  for (int x = 0; x < static_cast<int>(objs.size()); ++x)
    spec.objects.push_back(oname(x));
  for (const auto& m : mors)
    spec.morphisms.push_back({mname(m), oname(m.src), oname(m.tgt)});
  for (int x = 0; x < static_cast<int>(objs.size()); ++x) {
    const auto& X = objs[static_cast<std::size_t>(x)];
    spec.identities.emplace_back(oname(x), mname(mors[mindex.at({B.identity(B.dom(X.alpha)), A.identity(X.a), x, x})]));
  }
  for (const auto& m1 : mors)
    for (const auto& m2 : mors)
      if (m1.tgt == m2.src) {
        const Mor& c = mors[mindex.at({B.compose(m2.beta, m1.beta), A.compose(m2.gamma, m1.gamma), m1.src, m2.tgt})];
        spec.composition.push_back({mname(m2), mname(m1), mname(c)});
      }
  CatPtr K = make_category(spec);

  auto obj_id = [&](Id alpha, Id a) { return K->object(comma_object_name(A, B, alpha, a)); };
  auto mor_id = [&](Id beta, Id gamma, Id x_alpha, Id x_a, Id y_alpha, Id y_a) {
    return K->morphism("[" + B.morphism_name(beta) + "," + A.morphism_name(gamma) + "]:" + comma_object_name(A, B, x_alpha, x_a) + "->" +
                       comma_object_name(A, B, y_alpha, y_a));
  };

  CommaData out{K, f, {name + ":i", {}, {}, {}}, {name + ":d", {}, {}}};
  Functor i{f.source, K, {}, {}};
  for (Id a = 0; a < static_cast<Id>(A.num_objects()); ++a)
    i.obj.push_back(obj_id(B.identity(f.on_obj(a)), a));
  for (Id g = 0; g < static_cast<Id>(A.num_morphisms()); ++g)
    i.mor.push_back(mor_id(f.on_mor(g), g, B.identity(f.on_obj(A.dom(g))), A.dom(g), B.identity(f.on_obj(A.cod(g))), A.cod(g)));
  Functor c{K, f.source, std::vector<Id>(K->num_objects()), std::vector<Id>(K->num_morphisms())};
  Functor d{K, f.target, std::vector<Id>(K->num_objects()), std::vector<Id>(K->num_morphisms())};
  std::vector<Id> eta(K->num_objects());
  for (int x = 0; x < static_cast<int>(objs.size()); ++x) {
    const auto& X = objs[static_cast<std::size_t>(x)];
    const Id o = obj_id(X.alpha, X.a);
    c.obj[static_cast<std::size_t>(o)] = X.a;
    d.obj[static_cast<std::size_t>(o)] = B.dom(X.alpha);
    eta[static_cast<std::size_t>(o)] = mor_id(X.alpha, A.identity(X.a), X.alpha, X.a, B.identity(f.on_obj(X.a)), X.a);
  }
  for (const auto& m : mors) {
    const auto& X = objs[static_cast<std::size_t>(m.src)];
    const auto& Y = objs[static_cast<std::size_t>(m.tgt)];
    const Id id = mor_id(m.beta, m.gamma, X.alpha, X.a, Y.alpha, Y.a);
    c.mor[static_cast<std::size_t>(id)] = m.gamma;
    d.mor[static_cast<std::size_t>(id)] = m.beta;
  }
  // θ((α,a), β) = [β, 1_a]: (αβ, a) → (α, a).
  for (int x = 0; x < static_cast<int>(objs.size()); ++x) {
    const auto& X = objs[static_cast<std::size_t>(x)];
    for (Id b = 0; b < static_cast<Id>(B.num_objects()); ++b)
      for (Id beta : B.hom(b, B.dom(X.alpha))) {
        const Id ab = B.compose(X.alpha, beta);
        out.fibration.theta[{obj_id(X.alpha, X.a), beta}] = mor_id(beta, A.identity(X.a), ab, X.a, X.alpha, X.a);
      }
  }
  out.reflection.u = std::move(i);
  out.reflection.f = std::move(c);
  out.reflection.eta = std::move(eta);
  out.fibration.p = std::move(d);
  return out;
}

inline Report check_comma(const CommaData& K)
{
  Report r;
  Check& di = r.add("d∘i=f");
  ++di.cases_examined;
  if (!(compose_functors(K.d(), K.i()) == K.f))
    di.fail(Json{{"kind", "d_f i_f differs from f"}});
  Check& ci = r.add("c∘i=1");
  ++ci.cases_examined;
  if (!(compose_functors(K.c(), K.i()) == identity_functor(K.f.source)))
    ci.fail(Json{{"kind", "c_f i_f differs from the identity"}});
  r.absorb(check_category(*K.comma), "comma");
  r.absorb(check_split_reflection(K.reflection), "reflection");
  r.absorb(check_split_fibration(K.fibration), "fibration");
  return r;
}

inline std::string comma_dot(const CommaData& K)
{
  const FinCategory& C = *K.comma;
  std::ostringstream os;
  os << "digraph comma {\n";
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o)
    os << "  n" << o << " [label=" << Json(C.object_name(o)).dump() << "];\n";
  for (Id m = 0; m < static_cast<Id>(C.num_morphisms()); ++m) {
    if (C.is_identity(m))
      continue;
    const std::string& s = C.morphism_name(m);
    os << "  n" << C.dom(m) << " -> n" << C.cod(m) << " [label=" << Json(s.substr(0, s.find(']') + 1)).dump() << "];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// A finite fragment of Cat

/// The full subcategory of Cat on finitely many finite categories: every
/// functor between them, found by enumeration.
struct CatRoster {
  std::vector<std::string> names; // sorted
  std::vector<CatPtr> cats;
  CatPtr base;
  std::vector<Functor> functors; // indexed by morphism of base
  std::map<std::tuple<const FinCategory*, const FinCategory*, std::vector<Id>>, Id> index;

  int cat_index(const CatPtr& c) const
  {
    for (std::size_t i = 0; i < cats.size(); ++i)
      if (cats[i].get() == c.get())
        return static_cast<int>(i);
    return -1;
  }
  Id functor_id(const Functor& F) const
  {
    auto it = index.find({F.source.get(), F.target.get(), F.mor});
    return it == index.end() ? kNone : it->second;
  }
  Id require(const Functor& F, const std::string& what) const
  {
    Id m = functor_id(F);
    if (m == kNone)
      throw Error(what + ": functor between categories outside the roster");
    return m;
  }
};

inline std::shared_ptr<const CatRoster> make_cat_roster(std::vector<std::pair<std::string, CatPtr>> cats, BudgetTracker& budget)
{
  std::sort(cats.begin(), cats.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  auto R = std::make_shared<CatRoster>();
  for (auto& [n, c] : cats) {
    if (!R->names.empty() && R->names.back() == n)
      throw Error("duplicate category '" + n + "'");
    R->names.push_back(n);
    R->cats.push_back(c);
  }
  FinCategory::Spec spec;
  spec.objects = R->names;
  std::vector<std::string> ids;
  for (std::size_t a = 0; a < R->cats.size(); ++a)
    for (std::size_t b = 0; b < R->cats.size(); ++b) {
      bool complete = true;
      auto fs = enumerate_functors(R->cats[a], R->cats[b], budget, complete);
      if (!complete)
        throw Error("budget exhausted enumerating functors " + R->names[a] + " -> " + R->names[b]);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%03zu", i);
        std::string id = R->names[a] + ">" + R->names[b] + buf;
        spec.morphisms.push_back({id, R->names[a], R->names[b]});
        if (fs[i] == identity_functor(R->cats[a]))
          spec.identities.emplace_back(R->names[a], id);
        ids.push_back(id);
        R->functors.push_back(std::move(fs[i]));
      }
    }
  // Morphism ids sort as enumerated, so positions match.
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ids[x] < ids[y]; });
  std::vector<Functor> sorted;
  std::vector<std::string> sids;
  for (std::size_t i : order) {
    sorted.push_back(R->functors[i]);
    sids.push_back(ids[i]);
  }
  R->functors = std::move(sorted);
  for (std::size_t i = 0; i < R->functors.size(); ++i)
    R->index[{R->functors[i].source.get(), R->functors[i].target.get(), R->functors[i].mor}] = static_cast<Id>(i);
  for (std::size_t f = 0; f < R->functors.size(); ++f)
    for (std::size_t g = 0; g < R->functors.size(); ++g)
      if (R->functors[f].target.get() == R->functors[g].source.get()) {
        Id gf = R->functor_id(compose_functors(R->functors[g], R->functors[f]));
        spec.composition.push_back({sids[g], sids[f], sids[static_cast<std::size_t>(gf)]});
      }
  R->base = make_category(spec);
  return R;
}

/// The Cat instance: SplRef and SplFib verticals from a roster, identity
/// verticals added, requested composites computed, and the canonical filler
/// as lifting operation.
struct CatInstance {
  std::shared_ptr<const CatRoster> roster;
  std::shared_ptr<const std::vector<SplitReflection>> reflections; // indexed by vertical
  std::shared_ptr<const std::vector<SplitFibration>> fibrations;
  std::shared_ptr<const std::vector<CartesianIndex>> cartesian;
  DblPtr splref, splfib;
  LiftingOperation op;
  Report validity;
};

namespace detail {

inline bool same_reflection(const SplitReflection& a, const SplitReflection& b) { return a.u == b.u && a.f == b.f && a.eta == b.eta; }
inline bool same_fibration(const SplitFibration& a, const SplitFibration& b) { return a.p == b.p && a.theta == b.theta; }

template <class T, class Same, class Compose>
void close_composites(std::vector<T>& items, const std::vector<std::pair<std::string, std::string>>& requested,
                                                  Same same, Compose compose, const char* kind, std::vector<std::array<std::string, 3>>& named)
{
  auto find = [&](const std::string& n) {
    for (std::size_t i = 0; i < items.size(); ++i)
      if (items[i].name == n)
        return static_cast<int>(i);
    return -1;
  };
  for (const auto& [g, f] : requested) {
    int gi = find(g), fi = find(f);
    if (gi < 0 || fi < 0)
      continue;
    T c = compose(items[static_cast<std::size_t>(gi)], items[static_cast<std::size_t>(fi)], g + "." + f);
    int existing = -1;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (same(items[i], c))
        existing = static_cast<int>(i);
    if (existing < 0) {
      if (find(c.name) >= 0)
        throw Error(std::string(kind) + ": composite name '" + c.name + "' is taken");
      items.push_back(std::move(c));
      existing = static_cast<int>(items.size()) - 1;
    }
    named.push_back({g, f, items[static_cast<std::size_t>(existing)].name});
  }
}

} // namespace detail

/// `composites` lists pairs (g, f) meaning g after f, resolved among the
/// reflections or among the fibrations.
inline CatInstance make_cat_instance(std::shared_ptr<const CatRoster> roster, std::vector<SplitReflection> refl,
                                     std::vector<SplitFibration> fib, const std::vector<std::pair<std::string, std::string>>& composites)
{
  CatInstance out;
  out.roster = roster;
  const CatRoster& R = *roster;
  const FinCategory& C = *R.base;
  {
    Report given;
    for (const auto& s : refl)
      given.absorb(check_split_reflection(s), "reflection " + s.name);
    for (const auto& s : fib)
      given.absorb(check_split_fibration(s), "fibration " + s.name);
    if (!given.ok()) {
      out.validity = std::move(given);
      return out;
    }
  }

  for (std::size_t i = 0; i < R.cats.size(); ++i) {
    auto ir = identity_reflection(R.cats[i], "id:" + R.names[i]);
    if (std::none_of(refl.begin(), refl.end(), [&](const auto& s) { return detail::same_reflection(s, ir); }))
      refl.push_back(std::move(ir));
    auto ifb = identity_fibration(R.cats[i], "id:" + R.names[i]);
    if (std::none_of(fib.begin(), fib.end(), [&](const auto& s) { return detail::same_fibration(s, ifb); }))
      fib.push_back(std::move(ifb));
  }
  std::vector<std::array<std::string, 3>> rc, fc;
  for (const auto& [g, f] : composites) {
    auto in = [&](const auto& v, const std::string& n) { return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.name == n; }); };
    if (!(in(refl, g) && in(refl, f)) && !(in(fib, g) && in(fib, f)))
      throw Error("roster not closed: composite (" + g + "," + f + ") names no composable pair");
  }
  detail::close_composites(refl, composites, detail::same_reflection, compose_reflections, "reflection", rc);
  detail::close_composites(fib, composites, detail::same_fibration, compose_fibrations, "fibration", fc);
  for (const auto& s : refl)
    out.validity.absorb(check_split_reflection(s), "reflection " + s.name);
  for (const auto& s : fib)
    out.validity.absorb(check_split_fibration(s), "fibration " + s.name);

  std::sort(refl.begin(), refl.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(fib.begin(), fib.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::vector<Vertical> lv, rv;
  for (const auto& s : refl)
    lv.push_back({s.name, R.require(s.u, "reflection " + s.name)});
  for (const auto& s : fib)
    rv.push_back({s.name, R.require(s.p, "fibration " + s.name)});
  auto rl = std::make_shared<const std::vector<SplitReflection>>(std::move(refl));
  auto fb = std::make_shared<const std::vector<SplitFibration>>(std::move(fib));
  auto cart = std::make_shared<std::vector<CartesianIndex>>();
  for (const auto& s : *fb)
    cart->push_back(cartesian_index(s));
  auto rp = roster;

  // Squares of split reflections preserve the left adjoint and the unit.
  auto L = std::make_shared<ConcreteDouble>(R.base, "SplRef", lv, [rp, rl](int a, int b, Id top, Id bottom) {
    const auto& x = (*rl)[static_cast<std::size_t>(a)];
    const auto& y = (*rl)[static_cast<std::size_t>(b)];
    const Functor& r = rp->functors[static_cast<std::size_t>(top)];
    const Functor& s = rp->functors[static_cast<std::size_t>(bottom)];
    if (!(compose_functors(y.f, s) == compose_functors(r, x.f)))
      return false;
    for (Id o = 0; o < static_cast<Id>(x.u.target->num_objects()); ++o)
      if (y.eta[static_cast<std::size_t>(s.on_obj(o))] != s.on_mor(x.eta[static_cast<std::size_t>(o)]))
        return false;
    return true;
  });
  // Squares of split fibrations preserve the chosen lifts.
  auto Rt = std::make_shared<ConcreteDouble>(R.base, "SplFib", rv, [rp, fb](int a, int b, Id top, Id bottom) {
    const auto& x = (*fb)[static_cast<std::size_t>(a)];
    const auto& y = (*fb)[static_cast<std::size_t>(b)];
    const Functor& r = rp->functors[static_cast<std::size_t>(top)];
    const Functor& s = rp->functors[static_cast<std::size_t>(bottom)];
    for (const auto& [key, t] : x.theta)
      if (r.on_mor(t) != y.lift(r.on_obj(key.first), s.on_mor(key.second)))
        return false;
    return true;
  });
  auto wire = [&](ConcreteDouble& D, const std::vector<std::array<std::string, 3>>& named, auto same_identity) {
    for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o)
      for (int v : D.over_morphism(C.identity(o)))
        if (same_identity(v, o))
          D.set_identity(o, v);
    for (int v = 0; v < D.size(); ++v) {
      if (D.identity(D.dom(v)) >= 0)
        D.set_composite(v, D.identity(D.dom(v)), v);
      if (D.identity(D.cod(v)) >= 0)
        D.set_composite(D.identity(D.cod(v)), v, v);
    }
    for (const auto& [g, f, gf] : named)
      D.set_composite(D.require(g), D.require(f), D.require(gf));
  };
  wire(*L, rc, [&](int v, Id o) { return detail::same_reflection((*rl)[static_cast<std::size_t>(v)], identity_reflection(R.cats[static_cast<std::size_t>(o)], "")); });
  wire(*Rt, fc, [&](int v, Id o) { return detail::same_fibration((*fb)[static_cast<std::size_t>(v)], identity_fibration(R.cats[static_cast<std::size_t>(o)], "")); });

  out.reflections = rl;
  out.fibrations = fb;
  out.cartesian = cart;
  out.splref = L;
  out.splfib = Rt;
  out.op = LiftingOperation{L, Rt, "cat", [rp, rl, fb, cart](int j, int k, Id u, Id v) -> Id {
                              try {
                                Functor kf = canonical_filler((*rl)[static_cast<std::size_t>(j)], (*fb)[static_cast<std::size_t>(k)],
                                                              rp->functors[static_cast<std::size_t>(u)], rp->functors[static_cast<std::size_t>(v)],
                                                              &(*cart)[static_cast<std::size_t>(k)]);
                                return rp->functor_id(kf);
                              } catch (const Error&) {
                                return kNone;
                              }
                            }};
  return out;
}

inline Report check_cat_instance(const CatInstance& I, BudgetTracker* budget = nullptr)
{
  Report r;
  r.absorb(I.validity, "verticals");
  if (!I.validity.ok() || !I.splref)
    return r;
  r.absorb(check_lifting_operation(I.op, budget));
  return r;
}

// ---------------------------------------------------------------------------
// Universal properties of f = d_f ∘ i_f against test verticals

namespace detail {

inline bool preserves_lifts(const SplitFibration& x, const SplitFibration& y, const Functor& r, const Functor& s)
{
  for (const auto& [key, t] : x.theta)
    if (r.on_mor(t) != y.lift(r.on_obj(key.first), s.on_mor(key.second)))
      return false;
  return true;
}

inline bool preserves_reflection(const SplitReflection& x, const SplitReflection& y, const Functor& r, const Functor& s)
{
  if (!(compose_functors(y.f, s) == compose_functors(r, x.f)))
    return false;
  for (Id o = 0; o < static_cast<Id>(x.u.target->num_objects()); ++o)
    if (y.eta[static_cast<std::size_t>(s.on_obj(o))] != s.on_mor(x.eta[static_cast<std::size_t>(o)]))
      return false;
  return true;
}

inline Json functor_json(const Functor& F)
{
  Json m = Json::object();
  for (Id x = 0; x < static_cast<Id>(F.source->num_morphisms()); ++x)
    m[F.source->morphism_name(x)] = F.target->morphism_name(F.on_mor(x));
  return m;
}

} // namespace detail

/// For each test fibration y and each commuting square (a, b): f → y, exactly
/// one a': B/f → dom y with a'∘i_f = a and (a', b): d_f → y preserving lifts.
inline Report check_free_split_fibration(const CommaData& K, const std::vector<SplitFibration>& tests, BudgetTracker& budget)
{
  Report r;
  Check& c = r.add("free-split-fibration");
  for (const auto& y : tests) {
    bool ca = true, cb = true, ck = true;
    auto as = enumerate_functors(K.f.source, y.p.source, budget, ca);
    auto bs = enumerate_functors(K.f.target, y.p.target, budget, cb);
    auto ks = enumerate_functors(K.comma, y.p.source, budget, ck);
    if (!ca || !cb || !ck) {
      c.give_up(budget.reason());
      return r;
    }
    for (const auto& a : as)
      for (const auto& b : bs) {
        if (!(compose_functors(y.p, a) == compose_functors(b, K.f)))
          continue;
        ++c.cases_examined;
        int count = 0;
        for (const auto& k : ks)
          if (compose_functors(k, K.i()) == a && compose_functors(y.p, k) == compose_functors(b, K.d()) &&
              detail::preserves_lifts(K.fibration, y, k, b))
            ++count;
        if (count != 1)
          c.fail(Json{{"test", y.name}, {"a", detail::functor_json(a)}, {"b", detail::functor_json(b)}, {"factorisations", count}});
      }
  }
  return r;
}

/// For each test reflection x and each commuting square (a, b): x → f,
/// exactly one b': cod x → B/f with b'∘x = i_f∘a, d_f∘b' = b and (a, b'):
/// x → i_f preserving the reflection.
inline Report check_cofree_split_reflection(const CommaData& K, const std::vector<SplitReflection>& tests, BudgetTracker& budget)
{
  Report r;
  Check& c = r.add("cofree-split-reflection");
  for (const auto& x : tests) {
    bool ca = true, cb = true, ck = true;
    auto as = enumerate_functors(x.u.source, K.f.source, budget, ca);
    auto bs = enumerate_functors(x.u.target, K.f.target, budget, cb);
    auto ks = enumerate_functors(x.u.target, K.comma, budget, ck);
    if (!ca || !cb || !ck) {
      c.give_up(budget.reason());
      return r;
    }
    for (const auto& a : as)
      for (const auto& b : bs) {
        if (!(compose_functors(K.f, a) == compose_functors(b, x.u)))
          continue;
        ++c.cases_examined;
        int count = 0;
        for (const auto& k : ks)
          if (compose_functors(k, x.u) == compose_functors(K.i(), a) && compose_functors(K.d(), k) == b &&
              detail::preserves_reflection(x, K.reflection, a, k))
            ++count;
        if (count != 1)
          c.fail(Json{{"test", x.name}, {"a", detail::functor_json(a)}, {"b", detail::functor_json(b)}, {"factorisations", count}});
      }
  }
  return r;
}

// ---------------------------------------------------------------------------
// A stock roster: 1, the walking arrow 2, and the comma category 2/2 of the
// identity on 2, with t: 1 → 2 picking 1 (left adjoint !), i_f ⊣ c_f, the
// fibrations d_f and !: 2 → 1, and one composite on each side.

struct StockRoster {
  std::vector<std::pair<std::string, CatPtr>> categories;
  std::vector<SplitReflection> reflections;
  std::vector<SplitFibration> fibrations;
  std::vector<std::pair<std::string, std::string>> composites;
  CommaData comma;

  std::map<const FinCategory*, std::string> names() const
  {
    std::map<const FinCategory*, std::string> out;
    for (const auto& [n, c] : categories)
      out[c.get()] = n;
    return out;
  }
};

inline StockRoster stock_roster()
{
  CatPtr one = terminal_category();
  CatPtr two = walking_arrow();
  StockRoster R{{}, {}, {}, {}, comma_category(identity_functor(two), "2/2")};
  R.categories = {{"1", one}, {"2", two}, {"2/2", R.comma.comma}};
  Functor t{one, two, {two->object("1")}, {two->morphism("id1")}};
  Functor bang{two, one, {0, 0}, {0, 0, 0}};
  R.reflections.push_back(SplitReflection{"t", t, bang, {two->morphism("a"), two->morphism("id1")}});
  SplitReflection i = R.comma.reflection;
  i.name = "i";
  R.reflections.push_back(std::move(i));
  SplitFibration bf{"!", bang, {}};
  for (Id a = 0; a < static_cast<Id>(two->num_objects()); ++a)
    bf.theta[{a, one->identity(0)}] = two->identity(a);
  R.fibrations.push_back(std::move(bf));
  SplitFibration d = R.comma.fibration;
  d.name = "d";
  R.fibrations.push_back(std::move(d));
  R.composites = {{"i", "t"}, {"!", "d"}};
  return R;
}

} // namespace fwfs
