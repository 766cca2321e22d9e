#pragma once

// Double categories: the internal presentation (cat0, cat1, d, c, i, m),
// concrete double categories over Sq(C), D(E), and their functors.

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fincat.hpp"

namespace fwfs {

// ---------------------------------------------------------------------------
// Internal presentation

struct DoubleCategory {
  CatPtr cat0, cat1;
  Functor d, c, i;
  // (upper, lower) → composite, for verticals (objects of cat1) and for
  // squares (morphisms of cat1). Upper is applied first: c(upper) = d(lower).
  std::map<std::pair<Id, Id>, Id> mv, ms;
};

struct DoubleFunctor {
  Functor f0, f1;
};

inline Report check_double_category(const DoubleCategory& D, BudgetTracker* budget = nullptr)
{
  Report r;
  r.absorb(check_category(*D.cat0), "cat0");
  r.absorb(check_category(*D.cat1), "cat1");
  r.absorb(check_functor(D.d), "d");
  r.absorb(check_functor(D.c), "c");
  r.absorb(check_functor(D.i), "i");
  if (!r.ok())
    return r;
  const FinCategory& C0 = *D.cat0;
  const FinCategory& C1 = *D.cat1;
  const Id nv = static_cast<Id>(C1.num_objects());
  const Id ns = static_cast<Id>(C1.num_morphisms());
  auto vname = [&](Id v) { return C1.object_name(v); };
  auto sname = [&](Id s) { return C1.morphism_name(s); };
  auto mv = [&](Id a, Id b) {
    auto it = D.mv.find({a, b});
    return it == D.mv.end() ? kNone : it->second;
  };
  auto ms = [&](Id a, Id b) {
    auto it = D.ms.find({a, b});
    return it == D.ms.end() ? kNone : it->second;
  };
  auto out_of_time = [&](Check& c) {
    if (budget && !budget->tick()) {
      c.give_up(budget->reason());
      return true;
    }
    return false;
  };

  Check& units = r.add("d-i-c-i");
  for (Id o = 0; o < static_cast<Id>(C0.num_objects()); ++o) {
    ++units.cases_examined;
    Id v = D.i.on_obj(o);
    if (D.d.on_obj(v) != o || D.c.on_obj(v) != o)
      units.fail(Json{{"object", C0.object_name(o)}});
  }
  for (Id h = 0; h < static_cast<Id>(C0.num_morphisms()); ++h) {
    ++units.cases_examined;
    Id s = D.i.on_mor(h);
    if (D.d.on_mor(s) != h || D.c.on_mor(s) != h)
      units.fail(Json{{"horizontal", C0.morphism_name(h)}});
  }

  Check& tv = r.add("m/verticals");
  for (const auto& [key, w] : D.mv)
    if (D.c.on_obj(key.first) != D.d.on_obj(key.second))
      tv.fail(Json{{"kind", "non-composable-entry"}, {"upper", vname(key.first)}, {"lower", vname(key.second)}});
  for (Id a = 0; a < nv; ++a)
    for (Id b = 0; b < nv; ++b) {
      if (D.c.on_obj(a) != D.d.on_obj(b))
        continue;
      ++tv.cases_examined;
      Id ab = mv(a, b);
      if (ab == kNone) {
        tv.fail(Json{{"kind", "missing-composite"}, {"upper", vname(a)}, {"lower", vname(b)}});
        continue;
      }
      if (D.d.on_obj(ab) != D.d.on_obj(a) || D.c.on_obj(ab) != D.c.on_obj(b))
        tv.fail(Json{{"kind", "boundary"}, {"upper", vname(a)}, {"lower", vname(b)}, {"composite", vname(ab)}});
    }
  if (!tv.ok())
    return r;
  Check& uv = r.add("m/verticals/unit");
  Check& av = r.add("m/verticals/associativity");
  for (Id a = 0; a < nv; ++a) {
    ++uv.cases_examined;
    if (mv(D.i.on_obj(D.d.on_obj(a)), a) != a || mv(a, D.i.on_obj(D.c.on_obj(a))) != a)
      uv.fail(Json{{"vertical", vname(a)}});
    for (Id b = 0; b < nv; ++b) {
      if (D.c.on_obj(a) != D.d.on_obj(b))
        continue;
      for (Id c = 0; c < nv; ++c) {
        if (D.c.on_obj(b) != D.d.on_obj(c))
          continue;
        ++av.cases_examined;
        if (mv(mv(a, b), c) != mv(a, mv(b, c)))
          av.fail(Json{{"verticals", Json::array({vname(a), vname(b), vname(c)})}});
      }
    }
  }

  Check& ts = r.add("m/squares");
  for (const auto& [key, w] : D.ms)
    if (D.c.on_mor(key.first) != D.d.on_mor(key.second))
      ts.fail(Json{{"kind", "non-composable-entry"}, {"upper", sname(key.first)}, {"lower", sname(key.second)}});
  std::vector<std::vector<Id>> by_top(C0.num_morphisms());
  for (Id s = 0; s < ns; ++s)
    by_top[static_cast<std::size_t>(D.d.on_mor(s))].push_back(s);
  for (Id a = 0; a < ns; ++a)
    for (Id b : by_top[static_cast<std::size_t>(D.c.on_mor(a))]) {
      ++ts.cases_examined;
      Id ab = ms(a, b);
      if (ab == kNone) {
        ts.fail(Json{{"kind", "missing-composite"}, {"upper", sname(a)}, {"lower", sname(b)}});
        continue;
      }
      bool bad = D.d.on_mor(ab) != D.d.on_mor(a) || D.c.on_mor(ab) != D.c.on_mor(b) ||
                 C1.dom(ab) != mv(C1.dom(a), C1.dom(b)) || C1.cod(ab) != mv(C1.cod(a), C1.cod(b));
      if (bad)
        ts.fail(Json{{"kind", "boundary"}, {"upper", sname(a)}, {"lower", sname(b)}, {"composite", sname(ab)}});
    }
  if (!ts.ok())
    return r;
  Check& us = r.add("m/squares/unit");
  Check& as = r.add("m/squares/associativity");
  for (Id a = 0; a < ns; ++a) {
    ++us.cases_examined;
    if (ms(D.i.on_mor(D.d.on_mor(a)), a) != a || ms(a, D.i.on_mor(D.c.on_mor(a))) != a)
      us.fail(Json{{"square", sname(a)}});
    for (Id b : by_top[static_cast<std::size_t>(D.c.on_mor(a))])
      for (Id c : by_top[static_cast<std::size_t>(D.c.on_mor(b))]) {
        ++as.cases_examined;
        if (ms(ms(a, b), c) != ms(a, ms(b, c)))
          as.fail(Json{{"squares", Json::array({sname(a), sname(b), sname(c)})}});
      }
    if (out_of_time(as))
      return r;
  }

  Check& inter = r.add("interchange");
  for (Id v = 0; v < nv; ++v)
    for (Id w = 0; w < nv; ++w) {
      if (D.c.on_obj(v) != D.d.on_obj(w))
        continue;
      ++inter.cases_examined;
      if (ms(C1.identity(v), C1.identity(w)) != C1.identity(mv(v, w)))
        inter.fail(Json{{"kind", "identities"}, {"upper", vname(v)}, {"lower", vname(w)}});
    }
  // Horizontally composable pairs in each row, then stack two rows.
  for (Id a = 0; a < ns; ++a) {
    for (Id a2 = 0; a2 < ns; ++a2) {
      Id a21 = C1.compose(a2, a);
      if (a21 == kNone)
        continue;
      for (Id b : by_top[static_cast<std::size_t>(D.c.on_mor(a))])
        for (Id b2 : by_top[static_cast<std::size_t>(D.c.on_mor(a2))]) {
          Id b21 = C1.compose(b2, b);
          if (b21 == kNone)
            continue;
          ++inter.cases_examined;
          Id lhs = ms(a21, b21);
          Id rhs = C1.compose(ms(a2, b2), ms(a, b));
          if (lhs != rhs)
            inter.fail(Json{{"upper", Json::array({sname(a), sname(a2)})}, {"lower", Json::array({sname(b), sname(b2)})}});
        }
    }
    if (out_of_time(inter))
      return r;
  }
  return r;
}

inline Report check_double_functor(const DoubleFunctor& F, const DoubleCategory& D, const DoubleCategory& E)
{
  Report r;
  r.absorb(check_functor(F.f0), "f0");
  r.absorb(check_functor(F.f1), "f1");
  if (!r.ok())
    return r;
  const FinCategory& C1 = *D.cat1;
  Check& d = r.add("d");
  Check& c = r.add("c");
  for (Id v = 0; v < static_cast<Id>(C1.num_objects()); ++v) {
    ++d.cases_examined;
    ++c.cases_examined;
    if (E.d.on_obj(F.f1.on_obj(v)) != F.f0.on_obj(D.d.on_obj(v)))
      d.fail(Json{{"vertical", C1.object_name(v)}});
    if (E.c.on_obj(F.f1.on_obj(v)) != F.f0.on_obj(D.c.on_obj(v)))
      c.fail(Json{{"vertical", C1.object_name(v)}});
  }
  for (Id s = 0; s < static_cast<Id>(C1.num_morphisms()); ++s) {
    ++d.cases_examined;
    ++c.cases_examined;
    if (E.d.on_mor(F.f1.on_mor(s)) != F.f0.on_mor(D.d.on_mor(s)))
      d.fail(Json{{"square", C1.morphism_name(s)}});
    if (E.c.on_mor(F.f1.on_mor(s)) != F.f0.on_mor(D.c.on_mor(s)))
      c.fail(Json{{"square", C1.morphism_name(s)}});
  }
  Check& i = r.add("i");
  const FinCategory& C0 = *D.cat0;
  for (Id o = 0; o < static_cast<Id>(C0.num_objects()); ++o) {
    ++i.cases_examined;
    if (F.f1.on_obj(D.i.on_obj(o)) != E.i.on_obj(F.f0.on_obj(o)))
      i.fail(Json{{"object", C0.object_name(o)}});
  }
  for (Id h = 0; h < static_cast<Id>(C0.num_morphisms()); ++h) {
    ++i.cases_examined;
    if (F.f1.on_mor(D.i.on_mor(h)) != E.i.on_mor(F.f0.on_mor(h)))
      i.fail(Json{{"horizontal", C0.morphism_name(h)}});
  }
  Check& m = r.add("m");
  auto look = [](const std::map<std::pair<Id, Id>, Id>& t, Id a, Id b) {
    auto it = t.find({a, b});
    return it == t.end() ? kNone : it->second;
  };
  for (const auto& [key, w] : D.mv) {
    ++m.cases_examined;
    if (F.f1.on_obj(w) != look(E.mv, F.f1.on_obj(key.first), F.f1.on_obj(key.second)))
      m.fail(Json{{"upper", C1.object_name(key.first)}, {"lower", C1.object_name(key.second)}});
  }
  for (const auto& [key, w] : D.ms) {
    ++m.cases_examined;
    if (F.f1.on_mor(w) != look(E.ms, F.f1.on_mor(key.first), F.f1.on_mor(key.second)))
      m.fail(Json{{"upper", C1.morphism_name(key.first)}, {"lower", C1.morphism_name(key.second)}});
  }
  return r;
}

inline DoubleFunctor identity_double_functor(const DoubleCategory& D)
{
  return {identity_functor(D.cat0), identity_functor(D.cat1)};
}

// ---------------------------------------------------------------------------
// Concrete double categories over Sq(C)

struct Vertical {
  std::string id;
  Id over = kNone;
};

/// Decides whether a commuting square (top, bottom) from vertical `src` to
/// vertical `tgt` belongs to the double category.
using SquarePredicate = std::function<bool(int src, int tgt, Id top, Id bottom)>;

/// A double category whose objects and horizontal arrows are those of C,
/// whose verticals each lie over a morphism of C, and whose squares are
/// commuting squares selected by a predicate (all of them when absent).
class ConcreteDouble {
public:
  ConcreteDouble(CatPtr base, std::string name, std::vector<Vertical> verticals, SquarePredicate pred = {})
      : base_(std::move(base)), name_(std::move(name)), pred_(std::move(pred)), cache_(std::make_shared<Cache>())
  {
    std::sort(verticals.begin(), verticals.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < verticals.size(); ++i)
      if (verticals[i].id == verticals[i - 1].id)
        throw Error(name_ + ": duplicate vertical '" + verticals[i].id + "'");
    verts_ = std::move(verticals);
    by_over_.assign(base_->num_morphisms(), {});
    for (std::size_t v = 0; v < verts_.size(); ++v) {
      if (verts_[v].over < 0 || verts_[v].over >= static_cast<Id>(base_->num_morphisms()))
        throw Error(name_ + ": vertical '" + verts_[v].id + "' lies over an unknown morphism");
      index_.emplace(verts_[v].id, static_cast<int>(v));
      by_over_[static_cast<std::size_t>(verts_[v].over)].push_back(static_cast<int>(v));
    }
    ident_.assign(base_->num_objects(), -1);
  }

  const CatPtr& base() const { return base_; }
  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(verts_.size()); }
  const Vertical& vertical(int v) const { return verts_.at(static_cast<std::size_t>(v)); }
  const std::string& vid(int v) const { return vertical(v).id; }
  Id over(int v) const { return vertical(v).over; }
  Id dom(int v) const { return base_->dom(over(v)); }
  Id cod(int v) const { return base_->cod(over(v)); }
  const std::vector<int>& over_morphism(Id f) const { return by_over_[static_cast<std::size_t>(f)]; }
  int find(const std::string& id) const
  {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
  }
  int require(const std::string& id) const
  {
    int v = find(id);
    if (v < 0)
      throw Error(name_ + ": unknown vertical '" + id + "'");
    return v;
  }

  int identity(Id obj) const { return ident_[static_cast<std::size_t>(obj)]; }
  /// Vertical composite "g after f", or -1.
  int compose(int g, int f) const
  {
    auto it = comp_.find({g, f});
    return it == comp_.end() ? -1 : it->second;
  }
  const std::map<std::pair<int, int>, int>& composites() const { return comp_; }

  void set_identity(Id obj, int v) { ident_[static_cast<std::size_t>(obj)] = v; }
  void set_composite(int g, int f, int gf) { comp_[{g, f}] = gf; }

  /// Identity verticals: the unique vertical over each identity morphism.
  void auto_identities()
  {
    for (Id o = 0; o < static_cast<Id>(base_->num_objects()); ++o) {
      Id i = base_->identity(o);
      if (i != kNone && by_over_[static_cast<std::size_t>(i)].size() == 1)
        ident_[static_cast<std::size_t>(o)] = by_over_[static_cast<std::size_t>(i)].front();
    }
  }

  bool has_predicate() const { return static_cast<bool>(pred_); }

  bool has_square(int src, int tgt, Id top, Id bottom) const
  {
    const Id f = over(src), g = over(tgt);
    if (top == kNone || bottom == kNone)
      return false;
    if (base_->dom(top) != base_->dom(f) || base_->cod(top) != base_->dom(g) || base_->dom(bottom) != base_->cod(f) ||
        base_->cod(bottom) != base_->cod(g))
      return false;
    if (!base_->commutes(f, g, top, bottom))
      return false;
    return !pred_ || pred_(src, tgt, top, bottom);
  }

  /// The squares from src to tgt, ordered by (top, bottom).
  const std::vector<Boundary>& squares(int src, int tgt) const
  {
    const std::uint64_t key = static_cast<std::uint64_t>(src) * static_cast<std::uint64_t>(verts_.size()) +
                              static_cast<std::uint64_t>(tgt);
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      auto it = cache_->squares.find(key);
      if (it != cache_->squares.end())
        return it->second;
    }
    std::vector<Boundary> out;
    for (const auto& b : base_->squares_between(over(src), over(tgt)))
      if (!pred_ || pred_(src, tgt, b.top, b.bottom))
        out.push_back(b);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return cache_->squares.emplace(key, std::move(out)).first->second;
  }

  std::uint64_t count_squares() const
  {
    std::uint64_t n = 0;
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b)
        n += squares(a, b).size();
    return n;
  }

  Json vertical_json(int v) const { return Json{{"id", vid(v)}, {"over", base_->morphism_name(over(v))}}; }

private:
  struct Cache {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, std::vector<Boundary>> squares;
  };

  CatPtr base_;
  std::string name_;
  std::vector<Vertical> verts_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> by_over_;
  std::vector<int> ident_;
  std::map<std::pair<int, int>, int> comp_;
  SquarePredicate pred_;
  std::shared_ptr<Cache> cache_;
};

using DblPtr = std::shared_ptr<const ConcreteDouble>;

/// D(E): verticals are the members of E, squares are all commuting squares.
/// Throws when E misses an identity or is not closed under composition.
inline DblPtr dbl_from_class(const CatPtr& Cp, const MorClass& E, const std::string& name = "D")
{
  const FinCategory& C = *Cp;
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o)
    if (!contains(E, C.identity(o)))
      throw Error("missing identity: class lacks the identity on object '" + C.object_name(o) + "'");
  for (Id f : E)
    for (Id g : E)
      if (C.cod(f) == C.dom(g) && !contains(E, C.compose(g, f)))
        throw Error("class not closed: (" + C.morphism_name(g) + "," + C.morphism_name(f) + ") composes to '" +
                    name_or_none(C, C.compose(g, f)) + "' outside the class");
  std::vector<Vertical> vs;
  for (Id f : E)
    vs.push_back({C.morphism_name(f), f});
  auto D = std::make_shared<ConcreteDouble>(Cp, name, std::move(vs));
  D->auto_identities();
  for (int a = 0; a < D->size(); ++a)
    for (int b = 0; b < D->size(); ++b)
      if (D->cod(a) == D->dom(b))
        D->set_composite(b, a, D->find(C.morphism_name(C.compose(D->over(b), D->over(a)))));
  return D;
}

inline DblPtr sq_concrete(const CatPtr& C) { return dbl_from_class(C, all_morphisms(*C), "Sq"); }

/// Structural checks of a concrete double category: identities and
/// composites exist, lie over the right morphisms, and are unital and
/// associative; squares compose vertically and horizontally.
inline Report check_concrete(const ConcreteDouble& D, BudgetTracker* budget = nullptr)
{
  Report r;
  const FinCategory& C = *D.base();
  Check& ids = r.add("identities");
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o) {
    ++ids.cases_examined;
    int v = D.identity(o);
    if (v < 0 || D.over(v) != C.identity(o))
      ids.fail(Json{{"object", C.object_name(o)}});
  }
  Check& comp = r.add("composites");
  for (int a = 0; a < D.size(); ++a)
    for (int b = 0; b < D.size(); ++b) {
      if (D.cod(a) != D.dom(b))
        continue;
      ++comp.cases_examined;
      int ba = D.compose(b, a);
      if (ba < 0)
        comp.fail(Json{{"kind", "missing-composite"}, {"upper", D.vid(a)}, {"lower", D.vid(b)}});
      else if (D.over(ba) != C.compose(D.over(b), D.over(a)))
        comp.fail(Json{{"kind", "over"}, {"upper", D.vid(a)}, {"lower", D.vid(b)}, {"composite", D.vid(ba)}});
    }
  if (!ids.ok() || !comp.ok())
    return r;
  Check& unit = r.add("vertical-unit");
  Check& assoc = r.add("vertical-associativity");
  for (int a = 0; a < D.size(); ++a) {
    ++unit.cases_examined;
    if (D.compose(a, D.identity(D.dom(a))) != a || D.compose(D.identity(D.cod(a)), a) != a)
      unit.fail(Json{{"vertical", D.vid(a)}});
    for (int b = 0; b < D.size(); ++b) {
      if (D.cod(a) != D.dom(b))
        continue;
      for (int c = 0; c < D.size(); ++c) {
        if (D.cod(b) != D.dom(c))
          continue;
        ++assoc.cases_examined;
        if (D.compose(c, D.compose(b, a)) != D.compose(D.compose(c, b), a))
          assoc.fail(Json{{"verticals", Json::array({D.vid(a), D.vid(b), D.vid(c)})}});
      }
    }
  }
  Check& hs = r.add("squares/horizontal");
  Check& vs = r.add("squares/vertical");
  for (int a = 0; a < D.size(); ++a) {
    ++hs.cases_examined;
    if (!D.has_square(a, a, C.identity(D.dom(a)), C.identity(D.cod(a))))
      hs.fail(Json{{"kind", "identity-square"}, {"vertical", D.vid(a)}});
  }
  for (Id h = 0; h < static_cast<Id>(C.num_morphisms()); ++h) {
    ++vs.cases_examined;
    int s = D.identity(C.dom(h)), t = D.identity(C.cod(h));
    if (!D.has_square(s, t, h, h))
      vs.fail(Json{{"kind", "identity-vertical-square"}, {"horizontal", C.morphism_name(h)}});
  }
  for (int a = 0; a < D.size(); ++a)
    for (int b = 0; b < D.size(); ++b)
      for (const auto& p : D.squares(a, b)) {
        for (int c = 0; c < D.size(); ++c)
          for (const auto& q : D.squares(b, c)) {
            ++hs.cases_examined;
            if (!D.has_square(a, c, C.compose(q.top, p.top), C.compose(q.bottom, p.bottom)))
              hs.fail(Json{{"kind", "not-closed"}, {"verticals", Json::array({D.vid(a), D.vid(b), D.vid(c)})},
                           {"first", Json::array({C.morphism_name(p.top), C.morphism_name(p.bottom)})},
                           {"second", Json::array({C.morphism_name(q.top), C.morphism_name(q.bottom)})}});
          }
        if (budget && !budget->tick()) {
          hs.give_up(budget->reason());
          return r;
        }
      }
  // Vertical pasting: p: a → b stacked over q: a2 → b2 with cod a = dom a2.
  for (const auto& [ka, a2a] : D.composites()) {
    const int a2 = ka.first, a = ka.second;
    for (const auto& [kb, b2b] : D.composites()) {
      const int b2 = kb.first, b = kb.second;
      for (const auto& p : D.squares(a, b))
        for (const auto& q : D.squares(a2, b2)) {
          if (p.bottom != q.top)
            continue;
          ++vs.cases_examined;
          if (!D.has_square(a2a, b2b, p.top, q.bottom))
            vs.fail(Json{{"kind", "not-closed"}, {"upper", Json::array({D.vid(a), D.vid(b)})},
                         {"lower", Json::array({D.vid(a2), D.vid(b2)})},
                         {"top", C.morphism_name(p.top)}, {"bottom", C.morphism_name(q.bottom)}});
        }
    }
    if (budget && !budget->tick()) {
      vs.give_up(budget->reason());
      return r;
    }
  }
  return r;
}

/// For every vertical f: A → B, the square (f, 1_B): f → 1_B.
inline Report check_right_connected(const ConcreteDouble& D, const std::vector<int>& only = {})
{
  Report r;
  const FinCategory& C = *D.base();
  Check& c = r.add("right-connected");
  auto one = [&](int v) {
    ++c.cases_examined;
    Id B = D.cod(v);
    int idB = D.identity(B);
    if (idB < 0 || !D.has_square(v, idB, D.over(v), C.identity(B)))
      c.fail(Json{{"vertical", D.vid(v)}, {"over", C.morphism_name(D.over(v))}});
  };
  if (only.empty())
    for (int v = 0; v < D.size(); ++v)
      one(v);
  else
    for (int v : only)
      one(v);
  return r;
}

// ---------------------------------------------------------------------------
// Internal form of a concrete double category

inline std::string dsquare_name(const ConcreteDouble& D, int a, int b, Id top, Id bottom)
{
  const FinCategory& C = *D.base();
  return "[" + C.morphism_name(top) + "," + C.morphism_name(bottom) + "]:" + D.vid(a) + "->" + D.vid(b);
}

struct InternalForm {
  DoubleCategory dbl;
  std::vector<Square> squares; // cat1 morphism → (src vertical, tgt vertical, top, bottom)
  std::vector<int> verticals;  // cat1 object → vertical index
};

inline InternalForm to_internal(const ConcreteDouble& D, std::size_t max_squares = 50000)
{
  const FinCategory& C = *D.base();
  struct Sq {
    int a, b;
    Id top, bottom;
  };
  std::vector<Sq> sqs;
  for (int a = 0; a < D.size(); ++a)
    for (int b = 0; b < D.size(); ++b)
      for (const auto& p : D.squares(a, b)) {
        sqs.push_back({a, b, p.top, p.bottom});
        if (sqs.size() > max_squares)
          throw Error(D.name() + ": too many squares to materialize");
      }
  auto nm = [&](const Sq& q) { return dsquare_name(D, q.a, q.b, q.top, q.bottom); };
  FinCategory::Spec s;
  for (int v = 0; v < D.size(); ++v)
    s.objects.push_back(D.vid(v));
  for (const auto& q : sqs)
    s.morphisms.push_back({nm(q), D.vid(q.a), D.vid(q.b)});
  std::map<int, std::vector<std::size_t>> by_src;
  for (std::size_t i = 0; i < sqs.size(); ++i)
    by_src[sqs[i].a].push_back(i);
  for (int v = 0; v < D.size(); ++v) {
    Sq q{v, v, C.identity(D.dom(v)), C.identity(D.cod(v))};
    if (D.has_square(v, v, q.top, q.bottom))
      s.identities.emplace_back(D.vid(v), nm(q));
  }
  for (const auto& p : sqs)
    for (std::size_t j : by_src[p.b]) {
      const Sq& q = sqs[j];
      Sq r{p.a, q.b, C.compose(q.top, p.top), C.compose(q.bottom, p.bottom)};
      if (D.has_square(r.a, r.b, r.top, r.bottom))
        s.composition.push_back({nm(q), nm(p), nm(r)});
    }
  InternalForm out;
  DoubleCategory& X = out.dbl;
  X.cat0 = D.base();
  X.cat1 = make_category(s);
  const FinCategory& C1 = *X.cat1;
  out.squares.resize(C1.num_morphisms());
  out.verticals.resize(C1.num_objects());
  for (Id o = 0; o < static_cast<Id>(C1.num_objects()); ++o)
    out.verticals[static_cast<std::size_t>(o)] = D.find(C1.object_name(o));
  for (const auto& q : sqs)
    out.squares[static_cast<std::size_t>(C1.morphism(nm(q)))] = Square{q.a, q.b, q.top, q.bottom};

  X.d = Functor{X.cat1, X.cat0, {}, {}};
  X.c = Functor{X.cat1, X.cat0, {}, {}};
  for (Id o = 0; o < static_cast<Id>(C1.num_objects()); ++o) {
    X.d.obj.push_back(D.dom(out.verticals[static_cast<std::size_t>(o)]));
    X.c.obj.push_back(D.cod(out.verticals[static_cast<std::size_t>(o)]));
  }
  for (const auto& q : out.squares) {
    X.d.mor.push_back(q.top);
    X.c.mor.push_back(q.bottom);
  }
  X.i = Functor{X.cat0, X.cat1, {}, {}};
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o) {
    int v = D.identity(o);
    X.i.obj.push_back(v < 0 ? kNone : C1.find_object(D.vid(v)));
  }
  for (Id h = 0; h < static_cast<Id>(C.num_morphisms()); ++h) {
    int a = D.identity(C.dom(h)), b = D.identity(C.cod(h));
    X.i.mor.push_back(a < 0 || b < 0 ? kNone : C1.find_morphism(dsquare_name(D, a, b, h, h)));
  }
  auto obj_of = [&](int v) { return C1.find_object(D.vid(v)); };
  for (const auto& [key, gf] : D.composites())
    if (gf >= 0)
      X.mv[{obj_of(key.second), obj_of(key.first)}] = obj_of(gf);
  for (Id p = 0; p < static_cast<Id>(C1.num_morphisms()); ++p)
    for (Id q = 0; q < static_cast<Id>(C1.num_morphisms()); ++q) {
      const Square& P = out.squares[static_cast<std::size_t>(p)];
      const Square& Q = out.squares[static_cast<std::size_t>(q)];
      if (P.bottom != Q.top)
        continue;
      int lower_src = static_cast<int>(Q.left), upper_src = static_cast<int>(P.left);
      int lower_tgt = static_cast<int>(Q.right), upper_tgt = static_cast<int>(P.right);
      int src = D.compose(lower_src, upper_src), tgt = D.compose(lower_tgt, upper_tgt);
      if (src < 0 || tgt < 0)
        continue;
      Id r = C1.find_morphism(dsquare_name(D, src, tgt, P.top, Q.bottom));
      if (r != kNone)
        X.ms[{p, q}] = r;
    }
  return out;
}

/// The forgetful double functor of a concrete double category into the
/// internal form of Sq(C).
inline DoubleFunctor forgetful_functor(const InternalForm& X, const ConcreteDouble& D, const InternalForm& SqC)
{
  const FinCategory& C = *D.base();
  DoubleFunctor U{identity_functor(D.base()), Functor{X.dbl.cat1, SqC.dbl.cat1, {}, {}}};
  for (int v : X.verticals)
    U.f1.obj.push_back(SqC.dbl.cat1->find_object(C.morphism_name(D.over(v))));
  for (const auto& q : X.squares)
    U.f1.mor.push_back(SqC.dbl.cat1->find_morphism(
        "[" + C.morphism_name(q.top) + "," + C.morphism_name(q.bottom) + "]:" + C.morphism_name(D.over(static_cast<int>(q.left))) +
        "->" + C.morphism_name(D.over(static_cast<int>(q.right)))));
  return U;
}

/// U0 is the identity and U1 is faithful: distinct squares with the same
/// source and target verticals have distinct images.
inline Report check_concreteness(const DoubleFunctor& U, const DoubleCategory& X)
{
  Report r;
  Check& u0 = r.add("U0-identity");
  const FinCategory& C0 = *X.cat0;
  ++u0.cases_examined;
  for (Id o = 0; o < static_cast<Id>(C0.num_objects()); ++o)
    if (U.f0.on_obj(o) != o)
      u0.fail(Json{{"object", C0.object_name(o)}});
  for (Id h = 0; h < static_cast<Id>(C0.num_morphisms()); ++h)
    if (U.f0.on_mor(h) != h)
      u0.fail(Json{{"horizontal", C0.morphism_name(h)}});
  Check& u1 = r.add("U1-faithful");
  const FinCategory& C1 = *X.cat1;
  std::map<std::tuple<Id, Id, Id>, Id> seen;
  for (Id s = 0; s < static_cast<Id>(C1.num_morphisms()); ++s) {
    ++u1.cases_examined;
    auto key = std::make_tuple(C1.dom(s), C1.cod(s), U.f1.on_mor(s));
    auto [it, fresh] = seen.emplace(key, s);
    if (!fresh)
      u1.fail(Json{{"squares", Json::array({C1.morphism_name(it->second), C1.morphism_name(s)})}});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Functors between concrete double categories over the same Sq(C)

/// Determined by its action on verticals; squares keep their boundaries.
struct ConcreteFunctor {
  DblPtr source, target;
  std::vector<int> vmap;
};

inline ConcreteFunctor identity_concrete_functor(const DblPtr& D)
{
  ConcreteFunctor F{D, D, {}};
  for (int v = 0; v < D->size(); ++v)
    F.vmap.push_back(v);
  return F;
}

/// G∘F.
inline ConcreteFunctor compose_concrete(const ConcreteFunctor& G, const ConcreteFunctor& F)
{
  if (F.target != G.source)
    throw Error("concrete functors are not composable");
  ConcreteFunctor H{F.source, G.target, {}};
  for (int v : F.vmap)
    H.vmap.push_back(v < 0 ? -1 : G.vmap[static_cast<std::size_t>(v)]);
  return H;
}

/// Sends each vertical of `sub` to the vertical of `sup` with the same id.
inline ConcreteFunctor inclusion_by_id(const DblPtr& sub, const DblPtr& sup)
{
  ConcreteFunctor F{sub, sup, {}};
  for (int v = 0; v < sub->size(); ++v) {
    int w = sup->find(sub->vid(v));
    if (w < 0)
      throw Error("inclusion: vertical '" + sub->vid(v) + "' missing from " + sup->name());
    F.vmap.push_back(w);
  }
  return F;
}

inline Report check_concrete_functor(const ConcreteFunctor& F, BudgetTracker* budget = nullptr)
{
  Report r;
  const ConcreteDouble& A = *F.source;
  const ConcreteDouble& B = *F.target;
  const FinCategory& C = *A.base();
  Check& over = r.add("over");
  for (int v = 0; v < A.size(); ++v) {
    ++over.cases_examined;
    int w = F.vmap[static_cast<std::size_t>(v)];
    if (w < 0 || B.over(w) != A.over(v))
      over.fail(Json{{"vertical", A.vid(v)}});
  }
  if (!over.ok())
    return r;
  Check& ids = r.add("identities");
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o) {
    ++ids.cases_examined;
    int a = A.identity(o);
    if (a >= 0 && F.vmap[static_cast<std::size_t>(a)] != B.identity(o))
      ids.fail(Json{{"object", C.object_name(o)}});
  }
  Check& comp = r.add("composites");
  for (const auto& [key, gf] : A.composites()) {
    ++comp.cases_examined;
    if (gf < 0)
      continue;
    int img = B.compose(F.vmap[static_cast<std::size_t>(key.first)], F.vmap[static_cast<std::size_t>(key.second)]);
    if (img != F.vmap[static_cast<std::size_t>(gf)])
      comp.fail(Json{{"upper", A.vid(key.second)}, {"lower", A.vid(key.first)}});
  }
  Check& sq = r.add("squares");
  for (int a = 0; a < A.size(); ++a) {
    for (int b = 0; b < A.size(); ++b)
      for (const auto& p : A.squares(a, b)) {
        ++sq.cases_examined;
        if (!B.has_square(F.vmap[static_cast<std::size_t>(a)], F.vmap[static_cast<std::size_t>(b)], p.top, p.bottom))
          sq.fail(Json{{"source", A.vid(a)}, {"target", A.vid(b)}, {"top", C.morphism_name(p.top)}, {"bottom", C.morphism_name(p.bottom)}});
      }
    if (budget && !budget->tick()) {
      sq.give_up(budget->reason());
      break;
    }
  }
  return r;
}

/// The same functor between internal forms.
inline DoubleFunctor internal_functor(const ConcreteFunctor& F, const InternalForm& X, const InternalForm& Y)
{
  const ConcreteDouble& A = *F.source;
  const ConcreteDouble& B = *F.target;
  DoubleFunctor G{identity_functor(A.base()), Functor{X.dbl.cat1, Y.dbl.cat1, {}, {}}};
  for (int v : X.verticals)
    G.f1.obj.push_back(Y.dbl.cat1->find_object(B.vid(F.vmap[static_cast<std::size_t>(v)])));
  for (const auto& q : X.squares) {
    int a = F.vmap[static_cast<std::size_t>(q.left)], b = F.vmap[static_cast<std::size_t>(q.right)];
    G.f1.mor.push_back(Y.dbl.cat1->find_morphism(dsquare_name(B, a, b, q.top, q.bottom)));
  }
  return G;
}

} // namespace fwfs
