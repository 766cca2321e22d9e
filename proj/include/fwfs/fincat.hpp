#pragma once

// Extensional finite categories, functors, natural transformations and the
// stock builders (finite sets, walking arrow, monoids, posets).

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "report.hpp"

namespace fwfs {

using Id = int;
inline constexpr Id kNone = -1;

class FinCategory;
using CatPtr = std::shared_ptr<const FinCategory>;

/// A pair (top, bottom) of morphisms closing a commuting square between two
/// given morphisms; the vertical sides are implied by context.
struct Boundary {
  Id top = kNone;
  Id bottom = kNone;
  friend bool operator==(const Boundary&, const Boundary&) = default;
  friend auto operator<=>(const Boundary&, const Boundary&) = default;
};

struct Square {
  Id left = kNone;
  Id right = kNone;
  Id top = kNone;
  Id bottom = kNone;
  friend bool operator==(const Square&, const Square&) = default;
  friend auto operator<=>(const Square&, const Square&) = default;
};

class FinCategory {
public:
  struct MorphismSpec {
    std::string id, dom, cod;
  };

  struct Spec {
    std::vector<std::string> objects;
    std::vector<MorphismSpec> morphisms;
    std::vector<std::pair<std::string, std::string>> identities;
    std::vector<std::array<std::string, 3>> composition; // g, f, g∘f
  };

  // Table defects that do not prevent loading; check_category reports them.
  struct Issue {
    std::string kind;
    Json witness;
  };

  explicit FinCategory(const Spec& spec)
  {
    std::vector<std::string> objs = spec.objects;
    std::sort(objs.begin(), objs.end());
    for (std::size_t i = 1; i < objs.size(); ++i)
      if (objs[i] == objs[i - 1])
        throw Error("duplicate object id '" + objs[i] + "'");
    obj_names_ = objs;
    for (std::size_t i = 0; i < objs.size(); ++i)
      obj_index_.emplace(objs[i], static_cast<Id>(i));

    std::vector<MorphismSpec> mors = spec.morphisms;
    std::sort(mors.begin(), mors.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < mors.size(); ++i)
      if (mors[i].id == mors[i - 1].id)
        throw Error("duplicate morphism id '" + mors[i].id + "'");
    const std::size_t n = mors.size();
    mor_names_.reserve(n);
    dom_.reserve(n);
    cod_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      mor_names_.push_back(mors[i].id);
      mor_index_.emplace(mors[i].id, static_cast<Id>(i));
      dom_.push_back(require_object(mors[i].dom, "morphism '" + mors[i].id + "' dom"));
      cod_.push_back(require_object(mors[i].cod, "morphism '" + mors[i].id + "' cod"));
    }

    const std::size_t no = obj_names_.size();
    homs_.assign(no * no, {});
    for (std::size_t i = 0; i < n; ++i)
      homs_[static_cast<std::size_t>(dom_[i]) * no + static_cast<std::size_t>(cod_[i])].push_back(static_cast<Id>(i));

    ident_.assign(no, kNone);
    for (const auto& [o, m] : spec.identities) {
      Id oi = require_object(o, "identities key");
      Id mi = require_morphism(m, "identities['" + o + "']");
      if (ident_[oi] != kNone && ident_[oi] != mi)
        issues_.push_back({"conflicting-identity", Json{{"object", o}}});
      if (dom_[mi] != oi || cod_[mi] != oi) {
        issues_.push_back({"identity-not-endomorphism", Json{{"object", o}, {"morphism", m}}});
        continue;
      }
      ident_[oi] = mi;
    }
    for (std::size_t o = 0; o < no; ++o)
      if (ident_[o] == kNone)
        issues_.push_back({"missing-identity", Json{{"object", obj_names_[o]}}});

    dense_ = n <= kDenseLimit;
    if (dense_)
      table_.assign(n * n, kNone);
    for (const auto& e : spec.composition) {
      Id g = require_morphism(e[0], "composition entry");
      Id f = require_morphism(e[1], "composition entry");
      Id gf = require_morphism(e[2], "composition entry");
      if (cod_[f] != dom_[g]) {
        issues_.push_back({"non-composable-entry", Json{{"g", e[0]}, {"f", e[1]}, {"gf", e[2]}}});
        continue;
      }
      Id prev = raw_compose(g, f);
      if (prev != kNone) {
        if (prev != gf)
          issues_.push_back({"conflicting-entry", Json{{"g", e[0]}, {"f", e[1]}, {"gf", Json::array({mor_names_[prev], e[2]})}}});
        continue;
      }
      set_compose(g, f, gf);
    }
    cache_ = std::make_shared<Cache>();
  }

  std::size_t num_objects() const { return obj_names_.size(); }
  std::size_t num_morphisms() const { return mor_names_.size(); }
  const std::string& object_name(Id o) const { return obj_names_.at(static_cast<std::size_t>(o)); }
  const std::string& morphism_name(Id m) const { return mor_names_.at(static_cast<std::size_t>(m)); }
  const std::vector<std::string>& object_names() const { return obj_names_; }
  const std::vector<std::string>& morphism_names() const { return mor_names_; }

  Id find_object(const std::string& s) const
  {
    auto it = obj_index_.find(s);
    return it == obj_index_.end() ? kNone : it->second;
  }
  Id find_morphism(const std::string& s) const
  {
    auto it = mor_index_.find(s);
    return it == mor_index_.end() ? kNone : it->second;
  }
  Id object(const std::string& s) const { return require_object(s, "object"); }
  Id morphism(const std::string& s) const { return require_morphism(s, "morphism"); }

  Id dom(Id m) const { return dom_[static_cast<std::size_t>(m)]; }
  Id cod(Id m) const { return cod_[static_cast<std::size_t>(m)]; }
  Id identity(Id o) const { return ident_[static_cast<std::size_t>(o)]; }
  bool is_identity(Id m) const { return dom(m) == cod(m) && ident_[static_cast<std::size_t>(dom(m))] == m; }

  /// g∘f, or kNone when the pair is not composable or the table has no entry.
  Id compose(Id g, Id f) const
  {
    if (g == kNone || f == kNone || cod_[static_cast<std::size_t>(f)] != dom_[static_cast<std::size_t>(g)])
      return kNone;
    return raw_compose(g, f);
  }
  Id compose(std::initializer_list<Id> chain) const
  {
    // Leftmost is applied last, as in g∘f∘e.
    Id acc = kNone;
    bool first = true;
    for (auto it = std::rbegin(chain); it != std::rend(chain); ++it) {
      acc = first ? *it : compose(*it, acc);
      first = false;
      if (acc == kNone)
        return kNone;
    }
    return acc;
  }

  const std::vector<Id>& hom(Id a, Id b) const
  {
    return homs_[static_cast<std::size_t>(a) * obj_names_.size() + static_cast<std::size_t>(b)];
  }

  const std::vector<Issue>& issues() const { return issues_; }

  bool commutes(Id left, Id right, Id top, Id bottom) const
  {
    Id a = compose(right, top);
    return a != kNone && a == compose(bottom, left);
  }
  bool commutes(const Square& s) const { return commutes(s.left, s.right, s.top, s.bottom); }

  /// All commuting squares from f to g, ordered by (top, bottom).
  const std::vector<Boundary>& squares_between(Id f, Id g) const
  {
    const std::uint64_t key = static_cast<std::uint64_t>(f) * num_morphisms() + static_cast<std::uint64_t>(g);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->squares.find(key);
    if (it != cache_->squares.end())
      return it->second;
    std::vector<Boundary> out;
    for (Id h : hom(dom(f), dom(g))) {
      Id gh = compose(g, h);
      for (Id k : hom(cod(f), cod(g)))
        if (gh != kNone && compose(k, f) == gh)
          out.push_back({h, k});
    }
    return cache_->squares.emplace(key, std::move(out)).first->second;
  }

  Spec to_spec() const
  {
    Spec s;
    s.objects = obj_names_;
    for (std::size_t i = 0; i < num_morphisms(); ++i)
      s.morphisms.push_back({mor_names_[i], obj_names_[dom_[i]], obj_names_[cod_[i]]});
    for (std::size_t o = 0; o < num_objects(); ++o)
      if (ident_[o] != kNone)
        s.identities.emplace_back(obj_names_[o], mor_names_[ident_[o]]);
    for (std::size_t f = 0; f < num_morphisms(); ++f)
      for (Id g = 0; g < static_cast<Id>(num_morphisms()); ++g) {
        Id gf = compose(g, static_cast<Id>(f));
        if (gf != kNone)
          s.composition.push_back({mor_names_[g], mor_names_[f], mor_names_[gf]});
      }
    std::sort(s.composition.begin(), s.composition.end());
    return s;
  }

private:
  static constexpr std::size_t kDenseLimit = 2048;

  struct Cache {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, std::vector<Boundary>> squares;
  };

  Id require_object(const std::string& s, const std::string& where) const
  {
    auto it = obj_index_.find(s);
    if (it == obj_index_.end())
      throw Error(where + ": unknown object '" + s + "'");
    return it->second;
  }
  Id require_morphism(const std::string& s, const std::string& where) const
  {
    auto it = mor_index_.find(s);
    if (it == mor_index_.end())
      throw Error(where + ": unknown morphism '" + s + "'");
    return it->second;
  }

  Id raw_compose(Id g, Id f) const
  {
    const auto n = static_cast<std::uint64_t>(num_morphisms());
    const std::uint64_t key = static_cast<std::uint64_t>(g) * n + static_cast<std::uint64_t>(f);
    if (dense_)
      return table_[key];
    auto it = sparse_.find(key);
    return it == sparse_.end() ? kNone : it->second;
  }
  void set_compose(Id g, Id f, Id gf)
  {
    const auto n = static_cast<std::uint64_t>(num_morphisms());
    const std::uint64_t key = static_cast<std::uint64_t>(g) * n + static_cast<std::uint64_t>(f);
    if (dense_)
      table_[key] = gf;
    else
      sparse_[key] = gf;
  }

  std::vector<std::string> obj_names_, mor_names_;
  std::unordered_map<std::string, Id> obj_index_, mor_index_;
  std::vector<Id> dom_, cod_, ident_;
  std::vector<std::vector<Id>> homs_;
  bool dense_ = true;
  std::vector<Id> table_;
  std::unordered_map<std::uint64_t, Id> sparse_;
  std::vector<Issue> issues_;
  std::shared_ptr<Cache> cache_;
};

inline CatPtr make_category(const FinCategory::Spec& spec) { return std::make_shared<const FinCategory>(spec); }

inline Json square_json(const FinCategory& C, const Square& s)
{
  return Json{{"left", C.morphism_name(s.left)}, {"right", C.morphism_name(s.right)},
              {"top", C.morphism_name(s.top)}, {"bottom", C.morphism_name(s.bottom)}};
}

inline std::string name_or_none(const FinCategory& C, Id m) { return m == kNone ? std::string("<none>") : C.morphism_name(m); }

inline Report check_category(const FinCategory& C)
{
  Report r;
  const Id n = static_cast<Id>(C.num_morphisms());

  Check& table = r.add("table");
  for (const auto& issue : C.issues()) {
    if (issue.kind == "missing-identity" || issue.kind == "identity-not-endomorphism" || issue.kind == "conflicting-identity")
      continue;
    Json w = issue.witness;
    w["kind"] = issue.kind;
    table.fail(std::move(w));
  }
  for (Id f = 0; f < n; ++f) {
    for (Id b = 0; b < static_cast<Id>(C.num_objects()); ++b)
      for (Id g : C.hom(C.cod(f), b)) {
        ++table.cases_examined;
        if (C.compose(g, f) == kNone)
          table.fail(Json{{"kind", "missing-composite"}, {"g", C.morphism_name(g)}, {"f", C.morphism_name(f)}});
      }
  }

  Check& domcod = r.add("dom-cod");
  for (Id f = 0; f < n; ++f)
    for (Id b = 0; b < static_cast<Id>(C.num_objects()); ++b)
      for (Id g : C.hom(C.cod(f), b)) {
        Id gf = C.compose(g, f);
        if (gf == kNone)
          continue;
        ++domcod.cases_examined;
        if (C.dom(gf) != C.dom(f) || C.cod(gf) != C.cod(g))
          domcod.fail(Json{{"g", C.morphism_name(g)}, {"f", C.morphism_name(f)}, {"gf", C.morphism_name(gf)}});
      }

  Check& ident = r.add("identities");
  for (const auto& issue : C.issues()) {
    if (issue.kind != "missing-identity" && issue.kind != "identity-not-endomorphism" && issue.kind != "conflicting-identity")
      continue;
    Json w = issue.witness;
    w["kind"] = issue.kind;
    ident.fail(std::move(w));
  }
  for (Id f = 0; f < n; ++f) {
    ++ident.cases_examined;
    Id i0 = C.identity(C.dom(f)), i1 = C.identity(C.cod(f));
    if (i0 != kNone && C.compose(f, i0) != f)
      ident.fail(Json{{"kind", "right-unit"}, {"f", C.morphism_name(f)}, {"got", name_or_none(C, C.compose(f, i0))}});
    if (i1 != kNone && C.compose(i1, f) != f)
      ident.fail(Json{{"kind", "left-unit"}, {"f", C.morphism_name(f)}, {"got", name_or_none(C, C.compose(i1, f))}});
  }

  Check& assoc = r.add("associativity");
  for (Id f = 0; f < n; ++f)
    for (Id b = 0; b < static_cast<Id>(C.num_objects()); ++b)
      for (Id g : C.hom(C.cod(f), b)) {
        Id gf = C.compose(g, f);
        if (gf == kNone)
          continue;
        for (Id c = 0; c < static_cast<Id>(C.num_objects()); ++c)
          for (Id h : C.hom(b, c)) {
            ++assoc.cases_examined;
            Id hg = C.compose(h, g);
            Id lhs = C.compose(h, gf);
            Id rhs = hg == kNone ? kNone : C.compose(hg, f);
            if (lhs == kNone || rhs == kNone)
              continue;
            if (lhs != rhs)
              assoc.fail(Json{{"h", C.morphism_name(h)}, {"g", C.morphism_name(g)}, {"f", C.morphism_name(f)},
                              {"h(gf)", C.morphism_name(lhs)}, {"(hg)f", C.morphism_name(rhs)}});
          }
      }
  return r;
}

// ---------------------------------------------------------------------------
// Functors and natural transformations

struct Functor {
  CatPtr source, target;
  std::vector<Id> obj; // indexed by source object
  std::vector<Id> mor; // indexed by source morphism

  Id on_obj(Id o) const { return obj[static_cast<std::size_t>(o)]; }
  Id on_mor(Id m) const { return mor[static_cast<std::size_t>(m)]; }

  friend bool operator==(const Functor& a, const Functor& b)
  {
    return a.source == b.source && a.target == b.target && a.obj == b.obj && a.mor == b.mor;
  }
};

inline Functor identity_functor(const CatPtr& C)
{
  Functor F{C, C, {}, {}};
  for (Id o = 0; o < static_cast<Id>(C->num_objects()); ++o)
    F.obj.push_back(o);
  for (Id m = 0; m < static_cast<Id>(C->num_morphisms()); ++m)
    F.mor.push_back(m);
  return F;
}

/// G∘F.
inline Functor compose_functors(const Functor& G, const Functor& F)
{
  if (F.target.get() != G.source.get() && !(F.target && G.source &&
                                             F.target->object_names() == G.source->object_names() &&
                                             F.target->morphism_names() == G.source->morphism_names()))
    throw Error("functors are not composable");
  Functor H{F.source, G.target, {}, {}};
  for (Id o : F.obj)
    H.obj.push_back(o == kNone ? kNone : G.on_obj(o));
  for (Id m : F.mor)
    H.mor.push_back(m == kNone ? kNone : G.on_mor(m));
  return H;
}

inline Report check_functor(const Functor& F)
{
  Report r;
  const FinCategory& A = *F.source;
  const FinCategory& B = *F.target;
  Check& total = r.add("total");
  if (F.obj.size() != A.num_objects() || F.mor.size() != A.num_morphisms()) {
    total.fail(Json{{"kind", "size-mismatch"}});
    return r;
  }
  for (Id o = 0; o < static_cast<Id>(A.num_objects()); ++o) {
    ++total.cases_examined;
    if (F.on_obj(o) == kNone)
      total.fail(Json{{"object", A.object_name(o)}});
  }
  for (Id m = 0; m < static_cast<Id>(A.num_morphisms()); ++m) {
    ++total.cases_examined;
    if (F.on_mor(m) == kNone)
      total.fail(Json{{"morphism", A.morphism_name(m)}});
  }
  if (!total.ok())
    return r;

  Check& dc = r.add("dom-cod");
  for (Id m = 0; m < static_cast<Id>(A.num_morphisms()); ++m) {
    ++dc.cases_examined;
    Id fm = F.on_mor(m);
    if (B.dom(fm) != F.on_obj(A.dom(m)) || B.cod(fm) != F.on_obj(A.cod(m)))
      dc.fail(Json{{"morphism", A.morphism_name(m)}, {"image", B.morphism_name(fm)}});
  }
  Check& id = r.add("identities");
  for (Id o = 0; o < static_cast<Id>(A.num_objects()); ++o) {
    ++id.cases_examined;
    Id i = A.identity(o);
    if (i != kNone && F.on_mor(i) != B.identity(F.on_obj(o)))
      id.fail(Json{{"object", A.object_name(o)}, {"image", B.morphism_name(F.on_mor(i))}});
  }
  Check& comp = r.add("composition");
  for (Id f = 0; f < static_cast<Id>(A.num_morphisms()); ++f)
    for (Id c = 0; c < static_cast<Id>(A.num_objects()); ++c)
      for (Id g : A.hom(A.cod(f), c)) {
        Id gf = A.compose(g, f);
        if (gf == kNone)
          continue;
        ++comp.cases_examined;
        Id lhs = F.on_mor(gf);
        Id rhs = B.compose(F.on_mor(g), F.on_mor(f));
        if (lhs != rhs)
          comp.fail(Json{{"g", A.morphism_name(g)}, {"f", A.morphism_name(f)}, {"F(gf)", B.morphism_name(lhs)},
                         {"F(g)F(f)", name_or_none(B, rhs)}});
      }
  return r;
}

struct NatTransformation {
  Functor source, target;
  std::vector<Id> comp; // indexed by source-category object
};

inline Report check_nat(const NatTransformation& t, const std::string& name = "natural")
{
  Report r;
  const FinCategory& A = *t.source.source;
  const FinCategory& B = *t.source.target;
  Check& typ = r.add(name + "/components");
  for (Id o = 0; o < static_cast<Id>(A.num_objects()); ++o) {
    ++typ.cases_examined;
    Id c = t.comp.size() > static_cast<std::size_t>(o) ? t.comp[o] : kNone;
    if (c == kNone || B.dom(c) != t.source.on_obj(o) || B.cod(c) != t.target.on_obj(o))
      typ.fail(Json{{"object", A.object_name(o)}, {"component", name_or_none(B, c)}});
  }
  if (!typ.ok())
    return r;
  Check& nat = r.add(name + "/naturality");
  for (Id m = 0; m < static_cast<Id>(A.num_morphisms()); ++m) {
    ++nat.cases_examined;
    Id lhs = B.compose(t.target.on_mor(m), t.comp[A.dom(m)]);
    Id rhs = B.compose(t.comp[A.cod(m)], t.source.on_mor(m));
    if (lhs == kNone || lhs != rhs)
      nat.fail(Json{{"morphism", A.morphism_name(m)}, {"G(m)t", name_or_none(B, lhs)}, {"tF(m)", name_or_none(B, rhs)}});
  }
  return r;
}

inline NatTransformation identity_nat(const Functor& F)
{
  NatTransformation t{F, F, {}};
  for (Id o : F.obj)
    t.comp.push_back(F.target->identity(o));
  return t;
}

/// left: X → Y, right: Y → X, unit: 1_X ⇒ right∘left, counit: left∘right ⇒ 1_Y.
struct Adjunction {
  Functor left, right;
  NatTransformation unit, counit;
};

inline Report check_adjunction(const Adjunction& adj)
{
  Report r;
  r.absorb(check_functor(adj.left), "left");
  r.absorb(check_functor(adj.right), "right");
  if (!r.ok())
    return r;
  r.absorb(check_nat(adj.unit, "unit"));
  r.absorb(check_nat(adj.counit, "counit"));
  if (!r.ok())
    return r;
  const FinCategory& X = *adj.left.source;
  const FinCategory& Y = *adj.left.target;
  Check& t1 = r.add("triangle-left");
  for (Id x = 0; x < static_cast<Id>(X.num_objects()); ++x) {
    ++t1.cases_examined;
    Id Fx = adj.left.on_obj(x);
    Id v = Y.compose(adj.counit.comp[Fx], adj.left.on_mor(adj.unit.comp[x]));
    if (v != Y.identity(Fx))
      t1.fail(Json{{"object", X.object_name(x)}, {"got", name_or_none(Y, v)}});
  }
  Check& t2 = r.add("triangle-right");
  for (Id y = 0; y < static_cast<Id>(Y.num_objects()); ++y) {
    ++t2.cases_examined;
    Id Uy = adj.right.on_obj(y);
    Id v = X.compose(adj.right.on_mor(adj.counit.comp[y]), adj.unit.comp[Uy]);
    if (v != X.identity(Uy))
      t2.fail(Json{{"object", Y.object_name(y)}, {"got", name_or_none(X, v)}});
  }
  return r;
}

/// Every functor A → B, in lexicographic order of (object images, morphism
/// images). Each search node costs one budget unit; `complete` turns false
/// when the budget runs out first.
inline std::vector<Functor> enumerate_functors(const CatPtr& A, const CatPtr& B, BudgetTracker& budget, bool& complete,
                                               std::size_t limit = SIZE_MAX)
{
  complete = true;
  std::vector<Functor> out;
  const Id na = static_cast<Id>(A->num_objects());
  const Id ma = static_cast<Id>(A->num_morphisms());
  const Id nb = static_cast<Id>(B->num_objects());
  if (na > 0 && nb == 0)
    return out;

  // For each morphism, the composable triples (g, f, g∘f) that mention it.
  std::vector<std::vector<std::array<Id, 3>>> touching(static_cast<std::size_t>(ma));
  for (Id f = 0; f < ma; ++f)
    for (Id c = 0; c < na; ++c)
      for (Id g : A->hom(A->cod(f), c)) {
        Id gf = A->compose(g, f);
        if (gf == kNone)
          continue;
        std::array<Id, 3> t{g, f, gf};
        Id last = std::max({g, f, gf});
        touching[static_cast<std::size_t>(last)].push_back(t);
      }

  Functor F{A, B, std::vector<Id>(static_cast<std::size_t>(na), 0), std::vector<Id>(static_cast<std::size_t>(ma), kNone)};
  std::function<bool(Id)> assign_mor = [&](Id m) -> bool {
    if (m == ma) {
      out.push_back(F);
      return out.size() < limit;
    }
    Id a = F.on_obj(A->dom(m)), b = F.on_obj(A->cod(m));
    const bool ident = A->is_identity(m);
    for (Id cand : B->hom(a, b)) {
      if (ident && cand != B->identity(a))
        continue;
      if (!budget.consume()) {
        complete = false;
        return false;
      }
      F.mor[static_cast<std::size_t>(m)] = cand;
      bool good = true;
      for (const auto& t : touching[static_cast<std::size_t>(m)])
        if (B->compose(F.on_mor(t[0]), F.on_mor(t[1])) != F.on_mor(t[2])) {
          good = false;
          break;
        }
      if (good && !assign_mor(m + 1))
        return false;
    }
    F.mor[static_cast<std::size_t>(m)] = kNone;
    return true;
  };
  std::function<bool(Id)> assign_obj = [&](Id o) -> bool {
    if (o == na)
      return assign_mor(0);
    for (Id b = 0; b < nb; ++b) {
      F.obj[static_cast<std::size_t>(o)] = b;
      if (!assign_obj(o + 1))
        return false;
    }
    return true;
  };
  assign_obj(0);
  return out;
}

// ---------------------------------------------------------------------------
// Morphism classes (sorted vectors of morphism ids)

using MorClass = std::vector<Id>;

inline bool contains(const MorClass& cls, Id m) { return std::binary_search(cls.begin(), cls.end(), m); }

inline MorClass all_morphisms(const FinCategory& C)
{
  MorClass out;
  for (Id m = 0; m < static_cast<Id>(C.num_morphisms()); ++m)
    out.push_back(m);
  return out;
}

inline MorClass identity_class(const FinCategory& C)
{
  MorClass out;
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o)
    if (C.identity(o) != kNone)
      out.push_back(C.identity(o));
  std::sort(out.begin(), out.end());
  return out;
}

inline MorClass iso_class(const FinCategory& C)
{
  MorClass out;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f)
    for (Id g : C.hom(C.cod(f), C.dom(f)))
      if (C.compose(g, f) == C.identity(C.dom(f)) && C.compose(f, g) == C.identity(C.cod(f))) {
        out.push_back(f);
        break;
      }
  return out;
}

inline MorClass split_epi_class(const FinCategory& C)
{
  MorClass out;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f)
    for (Id s : C.hom(C.cod(f), C.dom(f)))
      if (C.compose(f, s) == C.identity(C.cod(f))) {
        out.push_back(f);
        break;
      }
  return out;
}

/// Categorical epimorphisms: right-cancellable morphisms.
inline MorClass epi_class(const FinCategory& C)
{
  MorClass out;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    bool epi = true;
    for (Id c = 0; c < static_cast<Id>(C.num_objects()) && epi; ++c) {
      const auto& hs = C.hom(C.cod(f), c);
      for (std::size_t i = 0; i < hs.size() && epi; ++i)
        for (std::size_t j = i + 1; j < hs.size() && epi; ++j)
          if (C.compose(hs[i], f) == C.compose(hs[j], f))
            epi = false;
    }
    if (epi)
      out.push_back(f);
  }
  return out;
}

/// Categorical monomorphisms: left-cancellable morphisms.
inline MorClass mono_class(const FinCategory& C)
{
  MorClass out;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    bool mono = true;
    for (Id c = 0; c < static_cast<Id>(C.num_objects()) && mono; ++c) {
      const auto& hs = C.hom(c, C.dom(f));
      for (std::size_t i = 0; i < hs.size() && mono; ++i)
        for (std::size_t j = i + 1; j < hs.size() && mono; ++j)
          if (C.compose(f, hs[i]) == C.compose(f, hs[j]))
            mono = false;
    }
    if (mono)
      out.push_back(f);
  }
  return out;
}

inline MorClass intersect(const MorClass& a, const MorClass& b)
{
  MorClass out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------------------
// Stock categories

inline CatPtr terminal_category()
{
  FinCategory::Spec s;
  s.objects = {"*"};
  s.morphisms = {{"id*", "*", "*"}};
  s.identities = {{"*", "id*"}};
  s.composition = {{"id*", "id*", "id*"}};
  return make_category(s);
}

/// The walking arrow 0 → 1, with morphisms id0, id1 and a.
inline CatPtr walking_arrow()
{
  FinCategory::Spec s;
  s.objects = {"0", "1"};
  s.morphisms = {{"id0", "0", "0"}, {"id1", "1", "1"}, {"a", "0", "1"}};
  s.identities = {{"0", "id0"}, {"1", "id1"}};
  s.composition = {{"id0", "id0", "id0"}, {"id1", "id1", "id1"}, {"a", "id0", "a"}, {"id1", "a", "a"}};
  return make_category(s);
}

/// One-object category from a multiplication table mul[x][y] = x·y (x after
/// y). Element 0 is the unit.
inline CatPtr monoid_category(const std::vector<std::string>& elements, const std::vector<std::vector<std::size_t>>& mul)
{
  FinCategory::Spec s;
  s.objects = {"*"};
  for (const auto& e : elements)
    s.morphisms.push_back({e, "*", "*"});
  s.identities = {{"*", elements.at(0)}};
  for (std::size_t x = 0; x < elements.size(); ++x)
    for (std::size_t y = 0; y < elements.size(); ++y)
      s.composition.push_back({elements[x], elements[y], elements.at(mul.at(x).at(y))});
  return make_category(s);
}

/// A finite poset as a category; leq(i, j) decides i ≤ j. Morphisms are named
/// "i<=j".
inline CatPtr poset_category(const std::vector<std::string>& elements, const std::function<bool(std::size_t, std::size_t)>& leq)
{
  FinCategory::Spec s;
  s.objects = elements;
  const std::size_t n = elements.size();
  auto name = [&](std::size_t i, std::size_t j) { return elements[i] + "<=" + elements[j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (leq(i, j))
        s.morphisms.push_back({name(i, j), elements[i], elements[j]});
  for (std::size_t i = 0; i < n; ++i)
    s.identities.emplace_back(elements[i], name(i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (leq(i, j) && leq(j, k))
          s.composition.push_back({name(j, k), name(i, j), name(i, k)});
  return make_category(s);
}

struct FinSet {
  CatPtr cat;
  MorClass epi, mono;
  std::vector<std::vector<int>> values; // values[m][x] = image of x under morphism m
};

inline std::string finset_morphism_name(int m, int k, const std::vector<int>& vals)
{
  std::string s = std::to_string(m) + ">" + std::to_string(k);
  if (m > 0) {
    s += ':';
    for (int v : vals)
      s += static_cast<char>('0' + v);
  }
  return s;
}

/// Finite sets {0,…,n} (object k has k elements) and all functions.
inline FinSet build_finset(int n)
{
  if (n < 0 || n > 4)
    throw Error("build_finset: n must be between 0 and 4 (budget guard)");
  struct Fn {
    int m, k;
    std::vector<int> vals;
    std::string name;
  };
  std::vector<Fn> fns;
  std::map<std::string, std::size_t> by_name;
  for (int m = 0; m <= n; ++m)
    for (int k = 0; k <= n; ++k) {
      if (m > 0 && k == 0)
        continue;
      int count = 1;
      for (int i = 0; i < m; ++i)
        count *= k;
      for (int code = 0; code < count; ++code) {
        std::vector<int> vals(static_cast<std::size_t>(m));
        int c = code;
        for (int i = m - 1; i >= 0; --i) {
          vals[static_cast<std::size_t>(i)] = c % k;
          c /= k;
        }
        std::string nm = finset_morphism_name(m, k, vals);
        by_name[nm] = fns.size();
        fns.push_back({m, k, vals, nm});
      }
    }

  FinCategory::Spec s;
  for (int k = 0; k <= n; ++k)
    s.objects.push_back(std::to_string(k));
  for (const auto& f : fns)
    s.morphisms.push_back({f.name, std::to_string(f.m), std::to_string(f.k)});
  for (int k = 0; k <= n; ++k) {
    std::vector<int> vals(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      vals[static_cast<std::size_t>(i)] = i;
    s.identities.emplace_back(std::to_string(k), finset_morphism_name(k, k, vals));
  }
  for (const auto& f : fns)
    for (const auto& g : fns) {
      if (g.m != f.k)
        continue;
      std::vector<int> vals(static_cast<std::size_t>(f.m));
      for (int i = 0; i < f.m; ++i)
        vals[static_cast<std::size_t>(i)] = g.vals[static_cast<std::size_t>(f.vals[static_cast<std::size_t>(i)])];
      s.composition.push_back({g.name, f.name, finset_morphism_name(f.m, g.k, vals)});
    }

  FinSet out;
  out.cat = make_category(s);
  const FinCategory& C = *out.cat;
  out.values.resize(C.num_morphisms());
  for (const auto& f : fns) {
    Id id = C.morphism(f.name);
    out.values[static_cast<std::size_t>(id)] = f.vals;
    std::vector<char> hit(static_cast<std::size_t>(f.k), 0);
    bool inj = true;
    for (int v : f.vals) {
      if (hit[static_cast<std::size_t>(v)])
        inj = false;
      hit[static_cast<std::size_t>(v)] = 1;
    }
    bool surj = std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
    if (surj)
      out.epi.push_back(id);
    if (inj)
      out.mono.push_back(id);
  }
  std::sort(out.epi.begin(), out.epi.end());
  std::sort(out.mono.begin(), out.mono.end());
  return out;
}

// ---------------------------------------------------------------------------
// Arrow category

inline std::string square_name(const FinCategory& C, Id f, Id g, Id h, Id k)
{
  return "[" + C.morphism_name(h) + "," + C.morphism_name(k) + "]:" + C.morphism_name(f) + "->" + C.morphism_name(g);
}

struct ArrowCategory {
  CatPtr base;
  CatPtr cat;
  Functor dom, cod;
  std::vector<Square> squares; // indexed by morphism of cat

  Id square_id(Id f, Id g, Id h, Id k) const { return cat->find_morphism(square_name(*base, f, g, h, k)); }
};

/// C^2: objects are the morphisms of C, morphisms are commuting squares.
inline ArrowCategory arrow_category(const CatPtr& Cp, std::size_t max_squares = 20000)
{
  const FinCategory& C = *Cp;
  const Id n = static_cast<Id>(C.num_morphisms());
  std::vector<Square> sqs;
  for (Id f = 0; f < n; ++f)
    for (Id g = 0; g < n; ++g)
      for (const auto& b : C.squares_between(f, g)) {
        sqs.push_back({f, g, b.top, b.bottom});
        if (sqs.size() > max_squares)
          throw Error("arrow_category: budget exceeded (more than " + std::to_string(max_squares) + " squares)");
      }
  FinCategory::Spec s;
  s.objects = C.morphism_names();
  auto nm = [&](const Square& q) { return square_name(C, q.left, q.right, q.top, q.bottom); };
  for (const auto& q : sqs)
    s.morphisms.push_back({nm(q), C.morphism_name(q.left), C.morphism_name(q.right)});
  for (Id f = 0; f < n; ++f) {
    Id i0 = C.identity(C.dom(f)), i1 = C.identity(C.cod(f));
    if (i0 == kNone || i1 == kNone)
      throw Error("arrow_category: input category lacks identities");
    s.identities.emplace_back(C.morphism_name(f), square_name(C, f, f, i0, i1));
  }
  std::map<Id, std::vector<std::size_t>> by_left;
  for (std::size_t i = 0; i < sqs.size(); ++i)
    by_left[sqs[i].left].push_back(i);
  for (const auto& p : sqs)
    for (std::size_t j : by_left[p.right]) {
      const Square& q = sqs[j];
      Square r{p.left, q.right, C.compose(q.top, p.top), C.compose(q.bottom, p.bottom)};
      s.composition.push_back({nm(q), nm(p), nm(r)});
    }
  ArrowCategory out;
  out.base = Cp;
  out.cat = make_category(s);
  out.dom = Functor{out.cat, Cp, {}, {}};
  out.cod = Functor{out.cat, Cp, {}, {}};
  out.squares.resize(sqs.size());
  for (const auto& q : sqs)
    out.squares[static_cast<std::size_t>(out.cat->morphism(nm(q)))] = q;
  for (Id o = 0; o < static_cast<Id>(out.cat->num_objects()); ++o) {
    Id f = C.morphism(out.cat->object_name(o));
    out.dom.obj.push_back(C.dom(f));
    out.cod.obj.push_back(C.cod(f));
  }
  for (const auto& q : out.squares) {
    out.dom.mor.push_back(q.top);
    out.cod.mor.push_back(q.bottom);
  }
  return out;
}

} // namespace fwfs
