#pragma once

// Lifting operations between concrete double categories, their
// compatibility axioms, the represented double categories LLP and RLP,
// lifting structures and their morphisms, and the pre-awfs and
// factorisation checks.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dblcat.hpp"

namespace fwfs {

/// fill(j, k, u, v): the diagonal for the square (u, v): Uj → Vk, or kNone.
using FillFn = std::function<Id(int j, int k, Id u, Id v)>;

struct LiftingOperation {
  DblPtr left, right;
  std::string kind;
  FillFn fill;
};

/// A lifting operation bundled with its two sides.
using LiftingStructure = LiftingOperation;

inline std::vector<Id> enumerate_fillers(const FinCategory& C, Id left, Id right, Id top, Id bottom)
{
  std::vector<Id> out;
  for (Id d : C.hom(C.cod(left), C.dom(right)))
    if (C.compose(d, left) == top && C.compose(right, d) == bottom)
      out.push_back(d);
  return out;
}

inline Json problem_json(const ConcreteDouble& L, const ConcreteDouble& R, int j, int k, Id u, Id v)
{
  const FinCategory& C = *L.base();
  return Json{{"j", L.vid(j)}, {"k", R.vid(k)}, {"square", Json::array({C.morphism_name(u), C.morphism_name(v)})}};
}

struct AxiomSelection {
  bool validity = true;
  bool horizontal_left = true;
  bool horizontal_right = true;
  bool vertical_left = true;
  bool vertical_right = true;
};

namespace detail {

inline bool out_of_time(BudgetTracker* budget, Check& c)
{
  if (budget && !budget->tick()) {
    c.give_up(budget->reason());
    return true;
  }
  return false;
}

inline void lifting_axioms(const ConcreteDouble& L, const ConcreteDouble& R, const FillFn& fill, AxiomSelection sel,
                           Report& r, BudgetTracker* budget)
{
  const FinCategory& C = *L.base();
  auto nm = [&](Id m) { return name_or_none(C, m); };
  auto mismatch = [&](Check& c, Json w, Id expected, Id got) {
    w["expected"] = nm(expected);
    w["got"] = nm(got);
    c.fail(std::move(w));
  };

  if (sel.validity) {
    Check& c = r.add("filler-validity");
    for (int j = 0; j < L.size(); ++j) {
      for (int k = 0; k < R.size(); ++k)
        for (const auto& p : C.squares_between(L.over(j), R.over(k))) {
          ++c.cases_examined;
          Id d = fill(j, k, p.top, p.bottom);
          bool ok = d != kNone && C.compose(d, L.over(j)) == p.top && C.compose(R.over(k), d) == p.bottom;
          if (!ok) {
            Json w = problem_json(L, R, j, k, p.top, p.bottom);
            w["diagonal"] = nm(d);
            c.fail(std::move(w));
          }
        }
      if (out_of_time(budget, c))
        return;
    }
  }

  // φ_{j,k}(u,v)∘b = φ_{j',k}(u∘a, v∘b) for each L-square (a,b): j' → j.
  if (sel.horizontal_left) {
    Check& c = r.add("horizontal-left");
    for (int j2 = 0; j2 < L.size(); ++j2) {
      for (int j = 0; j < L.size(); ++j)
        for (const auto& ab : L.squares(j2, j))
          for (int k = 0; k < R.size(); ++k)
            for (const auto& p : C.squares_between(L.over(j), R.over(k))) {
              ++c.cases_examined;
              Id lhs = C.compose(fill(j, k, p.top, p.bottom), ab.bottom);
              Id rhs = fill(j2, k, C.compose(p.top, ab.top), C.compose(p.bottom, ab.bottom));
              if (lhs == kNone || lhs != rhs) {
                Json w = problem_json(L, R, j, k, p.top, p.bottom);
                w["l-square"] = Json{{"from", L.vid(j2)}, {"top", nm(ab.top)}, {"bottom", nm(ab.bottom)}};
                mismatch(c, std::move(w), lhs, rhs);
              }
            }
      if (out_of_time(budget, c))
        return;
    }
  }

  // c∘φ_{j,k}(u,v) = φ_{j,k'}(c∘u, e∘v) for each R-square (c,e): k → k'.
  if (sel.horizontal_right) {
    Check& c = r.add("horizontal-right");
    for (int k = 0; k < R.size(); ++k) {
      for (int k2 = 0; k2 < R.size(); ++k2)
        for (const auto& ce : R.squares(k, k2))
          for (int j = 0; j < L.size(); ++j)
            for (const auto& p : C.squares_between(L.over(j), R.over(k))) {
              ++c.cases_examined;
              Id lhs = C.compose(ce.top, fill(j, k, p.top, p.bottom));
              Id rhs = fill(j, k2, C.compose(ce.top, p.top), C.compose(ce.bottom, p.bottom));
              if (lhs == kNone || lhs != rhs) {
                Json w = problem_json(L, R, j, k, p.top, p.bottom);
                w["r-square"] = Json{{"to", R.vid(k2)}, {"top", nm(ce.top)}, {"bottom", nm(ce.bottom)}};
                mismatch(c, std::move(w), lhs, rhs);
              }
            }
      if (out_of_time(budget, c))
        return;
    }
  }

  // Lifting against j∘i: lift against the upper factor i first, then against j.
  if (sel.vertical_left) {
    Check& c = r.add("vertical-left");
    for (const auto& [key, ji] : L.composites()) {
      if (ji < 0)
        continue;
      const int j = key.first, i = key.second;
      for (int k = 0; k < R.size(); ++k)
        for (const auto& p : C.squares_between(L.over(ji), R.over(k))) {
          ++c.cases_examined;
          Id d1 = fill(i, k, p.top, C.compose(p.bottom, L.over(j)));
          Id two = d1 == kNone ? kNone : fill(j, k, d1, p.bottom);
          Id direct = fill(ji, k, p.top, p.bottom);
          if (direct == kNone || direct != two) {
            Json w = problem_json(L, R, ji, k, p.top, p.bottom);
            w["upper"] = L.vid(i);
            w["lower"] = L.vid(j);
            mismatch(c, std::move(w), direct, two);
          }
        }
      if (out_of_time(budget, c))
        return;
    }
  }

  // Lifting against k'∘k: lift against the lower factor k' first, then k.
  if (sel.vertical_right) {
    Check& c = r.add("vertical-right");
    for (const auto& [key, kk] : R.composites()) {
      if (kk < 0)
        continue;
      const int k2 = key.first, k = key.second;
      for (int j = 0; j < L.size(); ++j)
        for (const auto& p : C.squares_between(L.over(j), R.over(kk))) {
          ++c.cases_examined;
          Id d1 = fill(j, k2, C.compose(R.over(k), p.top), p.bottom);
          Id two = d1 == kNone ? kNone : fill(j, k, p.top, d1);
          Id direct = fill(j, kk, p.top, p.bottom);
          if (direct == kNone || direct != two) {
            Json w = problem_json(L, R, j, kk, p.top, p.bottom);
            w["upper"] = R.vid(k);
            w["lower"] = R.vid(k2);
            mismatch(c, std::move(w), direct, two);
          }
        }
      if (out_of_time(budget, c))
        return;
    }
  }
}

struct ProblemKeyHash {
  std::size_t operator()(const std::array<int, 4>& k) const
  {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : k) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

} // namespace detail

inline Report check_lifting_operation(const LiftingOperation& op, BudgetTracker* budget = nullptr,
                                      AxiomSelection sel = {})
{
  Report r;
  if (op.left->base() != op.right->base())
    throw Error("lifting operation sides lie over different categories");
  detail::lifting_axioms(*op.left, *op.right, op.fill, sel, r, budget);
  return r;
}

// ---------------------------------------------------------------------------
// Realizations

using FillerTable = std::unordered_map<std::array<int, 4>, Id, detail::ProblemKeyHash>;

inline LiftingOperation table_lifting(DblPtr L, DblPtr R, std::shared_ptr<const FillerTable> table, std::string kind = "table")
{
  LiftingOperation op{std::move(L), std::move(R), std::move(kind), {}};
  op.fill = [table](int j, int k, Id u, Id v) {
    auto it = table->find({j, k, u, v});
    return it == table->end() ? kNone : it->second;
  };
  return op;
}

struct FillerEntry {
  int j, k;
  Id u, v, d;
  friend auto operator<=>(const FillerEntry&, const FillerEntry&) = default;
};

/// Every (j, k, square, diagonal), ordered by (j, k, top, bottom).
inline std::vector<FillerEntry> filler_entries(const LiftingOperation& op)
{
  const FinCategory& C = *op.left->base();
  std::vector<FillerEntry> out;
  for (int j = 0; j < op.left->size(); ++j)
    for (int k = 0; k < op.right->size(); ++k)
      for (const auto& p : C.squares_between(op.left->over(j), op.right->over(k)))
        out.push_back({j, k, p.top, p.bottom, op.fill(j, k, p.top, p.bottom)});
  return out;
}

inline std::shared_ptr<FillerTable> tabulate(const LiftingOperation& op)
{
  auto t = std::make_shared<FillerTable>();
  for (const auto& e : filler_entries(op))
    if (e.d != kNone)
      (*t)[{e.j, e.k, e.u, e.v}] = e.d;
  return t;
}

inline Json filler_entries_json(const LiftingOperation& op)
{
  const FinCategory& C = *op.left->base();
  Json arr = Json::array();
  for (const auto& e : filler_entries(op))
    arr.push_back(Json::array({op.left->vid(e.j), op.right->vid(e.k), C.morphism_name(e.u), C.morphism_name(e.v), name_or_none(C, e.d)}));
  return arr;
}

/// The orthogonal case: each square from a left vertical to a right vertical
/// has exactly one filler. Throws "not orthogonal" with the first bad square.
inline LiftingOperation unique_filler_lifting(DblPtr L, DblPtr R)
{
  const FinCategory& C = *L->base();
  auto table = std::make_shared<FillerTable>();
  for (int j = 0; j < L->size(); ++j)
    for (int k = 0; k < R->size(); ++k)
      for (const auto& p : C.squares_between(L->over(j), R->over(k))) {
        auto fs = enumerate_fillers(C, L->over(j), R->over(k), p.top, p.bottom);
        if (fs.size() != 1) {
          Json w = problem_json(*L, *R, j, k, p.top, p.bottom);
          Json cands = Json::array();
          for (std::size_t i = 0; i < fs.size() && i < 2; ++i)
            cands.push_back(C.morphism_name(fs[i]));
          w["fillers"] = cands;
          w["filler_count"] = fs.size();
          throw Error("not orthogonal: " + w.dump());
        }
        (*table)[{j, k, p.top, p.bottom}] = fs.front();
      }
  return table_lifting(std::move(L), std::move(R), std::move(table), "unique");
}

/// φ_{F,G}: fill(j, k) = φ(F j, G k).
inline LiftingOperation restrict(const LiftingOperation& op, const ConcreteFunctor& F, const ConcreteFunctor& G)
{
  if (F.target != op.left || G.target != op.right)
    throw Error("restrict: functor targets do not match the operation's sides");
  for (int j = 0; j < F.source->size(); ++j)
    if (F.vmap[static_cast<std::size_t>(j)] < 0 || op.left->over(F.vmap[static_cast<std::size_t>(j)]) != F.source->over(j))
      throw Error("restrict: boundary mismatch at '" + F.source->vid(j) + "'");
  for (int k = 0; k < G.source->size(); ++k)
    if (G.vmap[static_cast<std::size_t>(k)] < 0 || op.right->over(G.vmap[static_cast<std::size_t>(k)]) != G.source->over(k))
      throw Error("restrict: boundary mismatch at '" + G.source->vid(k) + "'");
  LiftingOperation out{F.source, G.source, "restricted", {}};
  auto fv = F.vmap, gv = G.vmap;
  auto inner = op.fill;
  out.fill = [fv, gv, inner](int j, int k, Id u, Id v) { return inner(fv[static_cast<std::size_t>(j)], gv[static_cast<std::size_t>(k)], u, v); };
  return out;
}

// ---------------------------------------------------------------------------
// LLP and RLP

enum class Side { rlp, llp };

/// A vertical of RLP(L) or LLP(R): a morphism f and one diagonal per lifting
/// problem at f, aligned with LiftingDual::problems(f).
struct LiftingData {
  Id f = kNone;
  std::vector<Id> theta;
  friend bool operator==(const LiftingData&, const LiftingData&) = default;
  friend auto operator<=>(const LiftingData&, const LiftingData&) = default;
};

struct Problem {
  int vertical;
  Id u, v;
};

struct ProblemSet {
  std::vector<Problem> list;
  std::unordered_map<std::uint64_t, int> index;
};

/// The represented double category RLP(L) (side rlp, other = L) or LLP(R)
/// (side llp, other = R). Nothing is materialized until asked for.
class LiftingDual {
public:
  LiftingDual(DblPtr other, Side side) : other_(std::move(other)), side_(side), cache_(std::make_shared<Cache>()) {}

  const DblPtr& other() const { return other_; }
  Side side() const { return side_; }
  const FinCategory& base() const { return *other_->base(); }

  /// Lifting problems at f: squares Uj → f (rlp) or f → Vk (llp), grouped by
  /// vertical, then by (top, bottom).
  const ProblemSet& problems(Id f) const
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->problems.find(f);
    if (it != cache_->problems.end())
      return it->second;
    ProblemSet ps;
    const FinCategory& C = base();
    for (int x = 0; x < other_->size(); ++x) {
      const auto& sqs = side_ == Side::rlp ? C.squares_between(other_->over(x), f) : C.squares_between(f, other_->over(x));
      for (const auto& p : sqs) {
        ps.index.emplace(key(x, p.top, p.bottom), static_cast<int>(ps.list.size()));
        ps.list.push_back({x, p.top, p.bottom});
      }
    }
    return cache_->problems.emplace(f, std::move(ps)).first->second;
  }

  Id lookup(const LiftingData& d, int x, Id u, Id v) const
  {
    const auto& ps = problems(d.f);
    auto it = ps.index.find(key(x, u, v));
    return it == ps.index.end() ? kNone : d.theta[static_cast<std::size_t>(it->second)];
  }

  /// The datum as a single vertical, so the lifting-operation checker applies.
  DblPtr singleton(const LiftingData& d) const
  {
    return std::make_shared<ConcreteDouble>(other_->base(), "dual", std::vector<Vertical>{{base().morphism_name(d.f), d.f}});
  }

  Report verify(const LiftingData& d, BudgetTracker* budget = nullptr) const
  {
    Report r;
    if (d.f == kNone || d.theta.size() != problems(d.f).list.size()) {
      r.add("shape").fail(Json{{"kind", "theta table does not match the lifting problems"}});
      return r;
    }
    auto self = this;
    FillFn fill;
    AxiomSelection sel;
    DblPtr single = singleton(d);
    if (side_ == Side::rlp) {
      fill = [self, &d](int j, int, Id u, Id v) { return self->lookup(d, j, u, v); };
      sel.horizontal_right = sel.vertical_right = false;
      detail::lifting_axioms(*other_, *single, fill, sel, r, budget);
    } else {
      fill = [self, &d](int, int k, Id u, Id v) { return self->lookup(d, k, u, v); };
      sel.horizontal_left = sel.vertical_left = false;
      detail::lifting_axioms(*single, *other_, fill, sel, r, budget);
    }
    return r;
  }

  bool valid(const LiftingData& d) const { return verify(d).ok(); }

  /// Every lawful datum over f, in lexicographic order of theta. Each
  /// candidate costs one budget unit.
  std::vector<LiftingData> enumerate_over(Id f, BudgetTracker& budget, bool& complete) const
  {
    complete = true;
    const FinCategory& C = base();
    const auto& ps = problems(f);
    std::vector<std::vector<Id>> choices;
    for (const auto& p : ps.list) {
      Id x = other_->over(p.vertical);
      choices.push_back(side_ == Side::rlp ? enumerate_fillers(C, x, f, p.u, p.v) : enumerate_fillers(C, f, x, p.u, p.v));
      if (choices.back().empty())
        return {};
    }
    std::vector<LiftingData> out;
    std::vector<std::size_t> at(choices.size(), 0);
    LiftingData d{f, std::vector<Id>(choices.size())};
    while (true) {
      if (!budget.consume()) {
        complete = false;
        return out;
      }
      for (std::size_t i = 0; i < at.size(); ++i)
        d.theta[i] = choices[i][at[i]];
      if (valid(d))
        out.push_back(d);
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

  /// Whether the commuting square (top, bottom): a.f → b.f commutes with the
  /// chosen lifts.
  bool preserves(const LiftingData& a, const LiftingData& b, Id top, Id bottom) const
  {
    const FinCategory& C = base();
    if (side_ == Side::rlp) {
      const auto& ps = problems(a.f);
      for (std::size_t i = 0; i < ps.list.size(); ++i) {
        const auto& p = ps.list[i];
        Id lhs = C.compose(top, a.theta[i]);
        Id rhs = lookup(b, p.vertical, C.compose(top, p.u), C.compose(bottom, p.v));
        if (lhs == kNone || lhs != rhs)
          return false;
      }
    } else {
      const auto& ps = problems(b.f);
      for (std::size_t i = 0; i < ps.list.size(); ++i) {
        const auto& p = ps.list[i];
        Id lhs = lookup(a, p.vertical, C.compose(p.u, top), C.compose(p.v, bottom));
        Id rhs = C.compose(b.theta[i], bottom);
        if (lhs == kNone || lhs != rhs)
          return false;
      }
    }
    return true;
  }

  /// The two-step lift: g after f.
  LiftingData compose(const LiftingData& g, const LiftingData& f) const
  {
    const FinCategory& C = base();
    if (C.cod(f.f) != C.dom(g.f))
      throw Error("lifting data are not composable");
    LiftingData out{C.compose(g.f, f.f), {}};
    for (const auto& p : problems(out.f).list) {
      Id d = kNone;
      if (side_ == Side::rlp) {
        Id d1 = lookup(g, p.vertical, C.compose(f.f, p.u), p.v);
        d = d1 == kNone ? kNone : lookup(f, p.vertical, p.u, d1);
      } else {
        Id d1 = lookup(f, p.vertical, p.u, C.compose(p.v, g.f));
        d = d1 == kNone ? kNone : lookup(g, p.vertical, d1, p.v);
      }
      out.theta.push_back(d);
    }
    return out;
  }

  LiftingData identity(Id obj) const
  {
    LiftingData out{base().identity(obj), {}};
    for (const auto& p : problems(out.f).list)
      out.theta.push_back(side_ == Side::rlp ? p.v : p.u);
    return out;
  }

  /// The transpose of a lifting operation at one vertical of its far side.
  LiftingData from_operation(const LiftingOperation& op, int vertical) const
  {
    LiftingData out;
    if (side_ == Side::rlp) {
      out.f = op.right->over(vertical);
      for (const auto& p : problems(out.f).list)
        out.theta.push_back(op.fill(p.vertical, vertical, p.u, p.v));
    } else {
      out.f = op.left->over(vertical);
      for (const auto& p : problems(out.f).list)
        out.theta.push_back(op.fill(vertical, p.vertical, p.u, p.v));
    }
    return out;
  }

  Json data_json(const LiftingData& d) const
  {
    const FinCategory& C = base();
    Json theta = Json::array();
    const auto& ps = problems(d.f);
    for (std::size_t i = 0; i < ps.list.size(); ++i)
      theta.push_back(Json::array({other_->vid(ps.list[i].vertical), C.morphism_name(ps.list[i].u), C.morphism_name(ps.list[i].v),
                                   name_or_none(C, d.theta[i])}));
    return Json{{"over", C.morphism_name(d.f)}, {"theta", theta}};
  }

private:
  std::uint64_t key(int x, Id u, Id v) const
  {
    const auto n = static_cast<std::uint64_t>(base().num_morphisms());
    return (static_cast<std::uint64_t>(x) * n + static_cast<std::uint64_t>(u)) * n + static_cast<std::uint64_t>(v);
  }

  struct Cache {
    std::mutex mutex;
    std::unordered_map<Id, ProblemSet> problems;
  };

  DblPtr other_;
  Side side_;
  std::shared_ptr<Cache> cache_;
};

using DualPtr = std::shared_ptr<const LiftingDual>;

inline DualPtr make_rlp(DblPtr L) { return std::make_shared<const LiftingDual>(std::move(L), Side::rlp); }
inline DualPtr make_llp(DblPtr R) { return std::make_shared<const LiftingDual>(std::move(R), Side::llp); }

/// RLP(L) or LLP(R) with every vertical enumerated. Incomplete when the
/// budget ran out; then some verticals (and composites) are missing.
struct DualMaterialization {
  DualPtr dual;
  DblPtr dbl;
  std::shared_ptr<const std::vector<LiftingData>> data;
  std::map<LiftingData, int> index;
  bool complete = true;
  std::string note;

  int find(const LiftingData& d) const
  {
    auto it = index.find(d);
    return it == index.end() ? -1 : it->second;
  }
};

inline DualMaterialization materialize(const DualPtr& dual, BudgetTracker& budget, const std::string& name = {})
{
  const FinCategory& C = dual->base();
  DualMaterialization M;
  M.dual = dual;
  auto data = std::make_shared<std::vector<LiftingData>>();
  std::vector<Vertical> vs;
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    bool complete = true;
    auto found = dual->enumerate_over(f, budget, complete);
    for (std::size_t n = 0; n < found.size(); ++n) {
      vs.push_back({C.morphism_name(f) + "#" + std::to_string(n), f});
      data->push_back(std::move(found[n]));
    }
    if (!complete) {
      M.complete = false;
      M.note = budget.reason() + " while enumerating over '" + C.morphism_name(f) + "'";
      break;
    }
  }
  // The ConcreteDouble sorts verticals by id; reorder data to match.
  std::vector<std::pair<std::string, std::size_t>> order;
  for (std::size_t i = 0; i < vs.size(); ++i)
    order.emplace_back(vs[i].id, i);
  std::sort(order.begin(), order.end());
  auto sorted = std::make_shared<std::vector<LiftingData>>();
  for (const auto& [id, i] : order)
    sorted->push_back((*data)[i]);
  M.data = sorted;
  SquarePredicate pred = [dual, sorted](int a, int b, Id top, Id bottom) {
    return dual->preserves((*sorted)[static_cast<std::size_t>(a)], (*sorted)[static_cast<std::size_t>(b)], top, bottom);
  };
  std::string nm = name.empty() ? (dual->side() == Side::rlp ? "RLP(" : "LLP(") + dual->other()->name() + ")" : name;
  auto D = std::make_shared<ConcreteDouble>(dual->other()->base(), nm, std::move(vs), pred);
  for (std::size_t i = 0; i < sorted->size(); ++i)
    M.index.emplace((*sorted)[i], static_cast<int>(i));
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o)
    D->set_identity(o, M.find(dual->identity(o)));
  for (int a = 0; a < D->size(); ++a)
    for (int b = 0; b < D->size(); ++b)
      if (D->cod(a) == D->dom(b))
        D->set_composite(b, a, M.find(dual->compose((*sorted)[static_cast<std::size_t>(b)], (*sorted)[static_cast<std::size_t>(a)])));
  M.dbl = D;
  return M;
}

inline DualMaterialization rlp_double_category(const DblPtr& L, BudgetTracker& budget) { return materialize(make_rlp(L), budget); }
inline DualMaterialization llp_double_category(const DblPtr& R, BudgetTracker& budget) { return materialize(make_llp(R), budget); }

inline Report rlp_verify(const DblPtr& L, const LiftingData& d) { return make_rlp(L)->verify(d); }

/// w after v in RLP(L).
inline LiftingData rlp_vertical_compose(const DualPtr& rlp, const LiftingData& w, const LiftingData& v) { return rlp->compose(w, v); }

// ---------------------------------------------------------------------------
// Transposes, canonical structures and structure morphisms

/// φ_r: R → RLP(L), as data and as a functor into a materialization (entries
/// of vmap are -1 where the transpose is missing from it).
struct Transpose {
  std::vector<LiftingData> data;
  ConcreteFunctor functor;
};

inline Transpose transpose_r(const LiftingStructure& S, const DualMaterialization& rlp)
{
  Transpose t{{}, ConcreteFunctor{S.right, rlp.dbl, {}}};
  for (int k = 0; k < S.right->size(); ++k) {
    t.data.push_back(rlp.dual->from_operation(S, k));
    t.functor.vmap.push_back(rlp.find(t.data.back()));
  }
  return t;
}

inline Transpose transpose_l(const LiftingStructure& S, const DualMaterialization& llp)
{
  Transpose t{{}, ConcreteFunctor{S.left, llp.dbl, {}}};
  for (int j = 0; j < S.left->size(); ++j) {
    t.data.push_back(llp.dual->from_operation(S, j));
    t.functor.vmap.push_back(llp.find(t.data.back()));
  }
  return t;
}

/// (L, can, RLP(L)): the filler is read off the RLP vertical's own data.
struct CanonicalStructure {
  LiftingStructure op;
  DualMaterialization dual;
};

inline CanonicalStructure canonical_left(const DblPtr& L, BudgetTracker& budget)
{
  CanonicalStructure out{{}, rlp_double_category(L, budget)};
  auto data = out.dual.data;
  auto dual = out.dual.dual;
  out.op = LiftingOperation{L, out.dual.dbl, "canonical", [data, dual](int j, int k, Id u, Id v) {
                              return dual->lookup((*data)[static_cast<std::size_t>(k)], j, u, v);
                            }};
  return out;
}

inline CanonicalStructure canonical_right(const DblPtr& R, BudgetTracker& budget)
{
  CanonicalStructure out{{}, llp_double_category(R, budget)};
  auto data = out.dual.data;
  auto dual = out.dual.dual;
  out.op = LiftingOperation{out.dual.dbl, R, "canonical", [data, dual](int j, int k, Id u, Id v) {
                              return dual->lookup((*data)[static_cast<std::size_t>(j)], k, u, v);
                            }};
  return out;
}

/// (F_l, F_r): S → S2 with F_l: S.left → S2.left and F_r: S2.right → S.right
/// is a morphism when S2.fill(F_l j, k) = S.fill(j, F_r k).
inline Report check_structure_morphism(const LiftingStructure& S, const LiftingStructure& S2, const ConcreteFunctor& Fl,
                                       const ConcreteFunctor& Fr, BudgetTracker* budget = nullptr)
{
  Report r;
  if (Fl.source != S.left || Fl.target != S2.left || Fr.source != S2.right || Fr.target != S.right)
    throw Error("structure morphism: functors do not connect the two structures");
  r.absorb(check_concrete_functor(Fl, budget), "F_l");
  r.absorb(check_concrete_functor(Fr, budget), "F_r");
  Check& c = r.add("restriction-equality");
  const FinCategory& C = *S.left->base();
  for (int j = 0; j < S.left->size(); ++j) {
    const int fj = Fl.vmap[static_cast<std::size_t>(j)];
    for (int k2 = 0; k2 < S2.right->size(); ++k2) {
      const int fk = Fr.vmap[static_cast<std::size_t>(k2)];
      for (const auto& p : C.squares_between(S.left->over(j), S2.right->over(k2))) {
        ++c.cases_examined;
        Id lhs = fj < 0 ? kNone : S2.fill(fj, k2, p.top, p.bottom);
        Id rhs = fk < 0 ? kNone : S.fill(j, fk, p.top, p.bottom);
        if (lhs == kNone || lhs != rhs)
          c.fail(Json{{"j", S.left->vid(j)}, {"k'", S2.right->vid(k2)},
                      {"square", Json::array({C.morphism_name(p.top), C.morphism_name(p.bottom)})},
                      {"phi'(F_l j,k')", name_or_none(C, lhs)}, {"phi(j,F_r k')", name_or_none(C, rhs)}});
      }
    }
    if (detail::out_of_time(budget, c))
      break;
  }
  return r;
}

/// Every concrete functor F_r: S2.right → S.right making (F_l, F_r) a
/// structure morphism.
inline std::vector<ConcreteFunctor> search_structure_morphisms(const LiftingStructure& S, const LiftingStructure& S2,
                                                              const ConcreteFunctor& Fl, BudgetTracker& budget, bool& complete)
{
  complete = true;
  std::vector<ConcreteFunctor> out;
  const ConcreteDouble& R2 = *S2.right;
  const ConcreteDouble& R = *S.right;
  std::vector<const std::vector<int>*> choices;
  for (int k = 0; k < R2.size(); ++k) {
    choices.push_back(&R.over_morphism(R2.over(k)));
    if (choices.back()->empty())
      return out;
  }
  std::vector<std::size_t> at(choices.size(), 0);
  ConcreteFunctor F{S2.right, S.right, std::vector<int>(choices.size())};
  while (true) {
    if (!budget.consume()) {
      complete = false;
      return out;
    }
    for (std::size_t i = 0; i < at.size(); ++i)
      F.vmap[i] = (*choices[i])[at[i]];
    if (check_structure_morphism(S, S2, Fl, F).ok())
      out.push_back(F);
    std::size_t i = at.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (++at[i] < choices[i]->size()) {
        done = false;
        break;
      }
      at[i] = 0;
    }
    if (done)
      break;
  }
  return out;
}

/// Bijective on verticals and on squares.
inline Report check_bijective(const ConcreteFunctor& F, BudgetTracker* budget = nullptr)
{
  Report r;
  const ConcreteDouble& A = *F.source;
  const ConcreteDouble& B = *F.target;
  const FinCategory& C = *A.base();
  Check& v = r.add("verticals");
  std::vector<int> hit(static_cast<std::size_t>(B.size()), -1);
  for (int a = 0; a < A.size(); ++a) {
    ++v.cases_examined;
    int b = F.vmap[static_cast<std::size_t>(a)];
    if (b < 0) {
      v.fail(Json{{"kind", "unmapped"}, {"vertical", A.vid(a)}});
      continue;
    }
    if (hit[static_cast<std::size_t>(b)] >= 0)
      v.fail(Json{{"kind", "not injective"}, {"verticals", Json::array({A.vid(hit[static_cast<std::size_t>(b)]), A.vid(a)})}});
    hit[static_cast<std::size_t>(b)] = a;
  }
  for (int b = 0; b < B.size(); ++b)
    if (hit[static_cast<std::size_t>(b)] < 0)
      v.fail(Json{{"kind", "not surjective"}, {"vertical", B.vid(b)}, {"over", C.morphism_name(B.over(b))}});
  if (!v.ok())
    return r;
  Check& s = r.add("squares");
  for (int a = 0; a < A.size(); ++a) {
    for (int a2 = 0; a2 < A.size(); ++a2) {
      ++s.cases_examined;
      const auto& x = A.squares(a, a2);
      const auto& y = B.squares(F.vmap[static_cast<std::size_t>(a)], F.vmap[static_cast<std::size_t>(a2)]);
      if (x != y) {
        std::vector<Boundary> only_a, only_b;
        std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(only_a));
        std::set_difference(y.begin(), y.end(), x.begin(), x.end(), std::back_inserter(only_b));
        Json w{{"source", A.vid(a)}, {"target", A.vid(a2)}};
        if (!only_a.empty())
          w["not-preserved"] = Json::array({C.morphism_name(only_a[0].top), C.morphism_name(only_a[0].bottom)});
        if (!only_b.empty())
          w["not-reached"] = Json::array({C.morphism_name(only_b[0].top), C.morphism_name(only_b[0].bottom)});
        s.fail(std::move(w));
      }
    }
    if (detail::out_of_time(budget, s))
      break;
  }
  return r;
}

enum class PreAwfsPart { both, left, right };

namespace detail {

/// One half of the lifting axiom: the transpose of `S` on the given side is
/// invertible. `verticals` are the verticals being transposed.
inline void transpose_invertible(const std::string& prefix, const DualPtr& dual, const DblPtr& verticals,
                                 const std::function<LiftingData(int)>& transpose, Report& r, BudgetTracker& budget)
{
  const FinCategory& C = dual->base();
  std::vector<LiftingData> data;
  Check& valid = r.add(prefix + "/lawful");
  for (int k = 0; k < verticals->size(); ++k) {
    data.push_back(transpose(k));
    ++valid.cases_examined;
    Report vr = dual->verify(data.back());
    if (!vr.ok()) {
      Json w{{"vertical", verticals->vid(k)}};
      for (const auto& c : vr.checks)
        if (!c.ok() && !c.witnesses.empty()) {
          w["axiom"] = c.name;
          w["witness"] = c.witnesses.front();
          break;
        }
      valid.fail(std::move(w));
    }
  }
  Check& inj = r.add(prefix + "/verticals-injective");
  std::map<LiftingData, int> seen;
  for (int k = 0; k < verticals->size(); ++k) {
    ++inj.cases_examined;
    auto [it, fresh] = seen.emplace(data[static_cast<std::size_t>(k)], k);
    if (!fresh)
      inj.fail(Json{{"verticals", Json::array({verticals->vid(it->second), verticals->vid(k)})}});
  }
  Check& sur = r.add(prefix + "/verticals-surjective");
  const std::uint64_t before = budget.used();
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    bool complete = true;
    auto found = dual->enumerate_over(f, budget, complete);
    for (const auto& d : found) {
      ++sur.cases_examined;
      if (!seen.count(d)) {
        Json w = dual->data_json(d);
        w["kind"] = "unmatched vertical";
        sur.fail(std::move(w));
      }
    }
    if (!complete) {
      sur.give_up(budget.reason() + ", " + std::to_string(sur.cases_examined) + " cases checked");
      break;
    }
  }
  r.budget_used += budget.used() - before;
  Check& sq = r.add(prefix + "/squares");
  for (int a = 0; a < verticals->size(); ++a) {
    for (int b = 0; b < verticals->size(); ++b)
      for (const auto& p : C.squares_between(verticals->over(a), verticals->over(b))) {
        ++sq.cases_examined;
        const bool in_self = verticals->has_square(a, b, p.top, p.bottom);
        const bool in_dual = dual->preserves(data[static_cast<std::size_t>(a)], data[static_cast<std::size_t>(b)], p.top, p.bottom);
        if (in_self != in_dual)
          sq.fail(Json{{"kind", in_self ? "square does not preserve lifts" : "unmatched square"},
                       {"source", verticals->vid(a)}, {"target", verticals->vid(b)},
                       {"square", Json::array({C.morphism_name(p.top), C.morphism_name(p.bottom)})}});
      }
    if (!budget.tick()) {
      sq.give_up(budget.reason());
      break;
    }
  }
}

} // namespace detail

/// The lifting axiom: φ_l: L → LLP(R) and φ_r: R → RLP(L) are invertible.
inline Report check_pre_awfs(const LiftingStructure& S, BudgetTracker& budget, PreAwfsPart part = PreAwfsPart::both)
{
  Report r;
  if (part != PreAwfsPart::left) {
    auto rlp = make_rlp(S.left);
    detail::transpose_invertible(
        "phi_r", rlp, S.right, [&](int k) { return rlp->from_operation(S, k); }, r, budget);
  }
  if (part != PreAwfsPart::right) {
    auto llp = make_llp(S.right);
    detail::transpose_invertible(
        "phi_l", llp, S.left, [&](int j) { return llp->from_operation(S, j); }, r, budget);
  }
  return r;
}

/// The unit R → RLP(LLP(R)) is invertible.
inline Report check_unit_fixpoint(const DblPtr& R, BudgetTracker& budget)
{
  CanonicalStructure can = canonical_right(R, budget);
  Report r;
  if (!can.dual.complete)
    r.add("LLP").give_up(can.dual.note);
  r.absorb(check_pre_awfs(can.op, budget, PreAwfsPart::right), "unit");
  return r;
}

/// The counit L → LLP(RLP(L)) is invertible.
inline Report check_counit_fixpoint(const DblPtr& L, BudgetTracker& budget)
{
  CanonicalStructure can = canonical_left(L, budget);
  Report r;
  if (!can.dual.complete)
    r.add("RLP").give_up(can.dual.note);
  r.absorb(check_pre_awfs(can.op, budget, PreAwfsPart::left), "counit");
  return r;
}

// ---------------------------------------------------------------------------
// The axiom of factorisation

struct FactorisationEntry {
  int left = -1;  // vertical of L over the first factor
  Id mid = kNone; // middle object
  int right = -1; // vertical of R over the second factor
};

/// Indexed by morphism of C.
using FactorisationAssignment = std::vector<FactorisationEntry>;

enum class FactorisationSide { both, left_only, right_only };

inline bool has_entry(const FactorisationAssignment& fa, Id f)
{
  return static_cast<std::size_t>(f) < fa.size() && fa[static_cast<std::size_t>(f)].left >= 0 && fa[static_cast<std::size_t>(f)].right >= 0;
}

/// All b' with V(h_f)∘b' = b and (a, b'): x → g_f a square of L.
inline std::vector<Id> couniversal_candidates(const LiftingStructure& S, const FactorisationEntry& e, int x, Id a, Id b)
{
  const FinCategory& C = *S.left->base();
  std::vector<Id> out;
  const Id h = S.right->over(e.right);
  for (Id b2 : C.hom(S.left->cod(x), e.mid))
    if (C.compose(h, b2) == b && S.left->has_square(x, e.left, a, b2))
      out.push_back(b2);
  return out;
}

/// All a' with a'∘U(g_f) = a and (a', b): h_f → y a square of R.
inline std::vector<Id> universal_candidates(const LiftingStructure& S, const FactorisationEntry& e, int y, Id a, Id b)
{
  const FinCategory& C = *S.left->base();
  std::vector<Id> out;
  const Id g = S.left->over(e.left);
  for (Id a2 : C.hom(e.mid, S.right->dom(y)))
    if (C.compose(a2, g) == a && S.right->has_square(e.right, y, a2, b))
      out.push_back(a2);
  return out;
}

inline Report check_factorisation_axiom(const LiftingStructure& S, const FactorisationAssignment& fa,
                                        FactorisationSide side, BudgetTracker* budget = nullptr)
{
  Report r;
  const FinCategory& C = *S.left->base();
  const ConcreteDouble& L = *S.left;
  const ConcreteDouble& R = *S.right;
  Check& bnd = r.add("factorisation/boundaries");
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    ++bnd.cases_examined;
    if (!has_entry(fa, f)) {
      bnd.fail(Json{{"kind", "missing"}, {"f", C.morphism_name(f)}});
      continue;
    }
    const auto& e = fa[static_cast<std::size_t>(f)];
    const Id g = L.over(e.left), h = R.over(e.right);
    if (C.dom(g) != C.dom(f) || C.cod(g) != e.mid || C.dom(h) != e.mid || C.cod(h) != C.cod(f) || C.compose(h, g) != f)
      bnd.fail(Json{{"kind", "composite"}, {"f", C.morphism_name(f)}, {"left", L.vid(e.left)}, {"right", R.vid(e.right)}});
  }
  if (!bnd.ok())
    return r;

  auto report_search = [&](Check& c, Json w, const std::vector<Id>& cands) {
    if (cands.size() == 1)
      return;
    w["kind"] = cands.empty() ? "no factorising square" : "non-unique factorising square";
    if (!cands.empty())
      w["candidates"] = Json::array({C.morphism_name(cands[0]), C.morphism_name(cands[1])});
    c.fail(std::move(w));
  };

  if (side != FactorisationSide::right_only) {
    Check& c = r.add("factorisation/couniversal");
    for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
      const auto& e = fa[static_cast<std::size_t>(f)];
      for (int x = 0; x < L.size(); ++x)
        for (const auto& p : C.squares_between(L.over(x), f)) {
          ++c.cases_examined;
          report_search(c,
                        Json{{"f", C.morphism_name(f)}, {"x", L.vid(x)},
                             {"square", Json::array({C.morphism_name(p.top), C.morphism_name(p.bottom)})}},
                        couniversal_candidates(S, e, x, p.top, p.bottom));
        }
      if (detail::out_of_time(budget, c))
        break;
    }
  }
  if (side != FactorisationSide::left_only) {
    Check& c = r.add("factorisation/universal");
    for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
      const auto& e = fa[static_cast<std::size_t>(f)];
      for (int y = 0; y < R.size(); ++y)
        for (const auto& p : C.squares_between(f, R.over(y))) {
          ++c.cases_examined;
          report_search(c,
                        Json{{"f", C.morphism_name(f)}, {"y", R.vid(y)},
                             {"square", Json::array({C.morphism_name(p.top), C.morphism_name(p.bottom)})}},
                        universal_candidates(S, e, y, p.top, p.bottom));
        }
      if (detail::out_of_time(budget, c))
        break;
    }
  }
  return r;
}

/// The whole lifting-awfs verdict: a valid lifting operation, the axiom of
/// lifting and the axiom of factorisation.
inline Report check_lifting_awfs(const LiftingStructure& S, const FactorisationAssignment& fa, FactorisationSide side,
                                 BudgetTracker& budget)
{
  Report r;
  r.absorb(check_lifting_operation(S, &budget), "lifting");
  r.absorb(check_pre_awfs(S, budget), "pre-awfs");
  r.absorb(check_factorisation_axiom(S, fa, side, &budget));
  return r;
}

/// f = m∘e with e a left vertical and m a right vertical: f itself on the
/// left when possible, then f itself on the right, otherwise the
/// lexicographically first split through the smallest middle object.
inline std::optional<FactorisationEntry> split_factorisation(const LiftingStructure& S, Id f)
{
  const FinCategory& C = *S.left->base();
  const ConcreteDouble& L = *S.left;
  const ConcreteDouble& R = *S.right;
  const Id A = C.dom(f), B = C.cod(f);
  if (!L.over_morphism(f).empty() && R.identity(B) >= 0)
    return FactorisationEntry{L.over_morphism(f).front(), B, R.identity(B)};
  if (!R.over_morphism(f).empty() && L.identity(A) >= 0)
    return FactorisationEntry{L.identity(A), A, R.over_morphism(f).front()};
  for (Id X = 0; X < static_cast<Id>(C.num_objects()); ++X)
    for (Id e : C.hom(A, X)) {
      if (L.over_morphism(e).empty())
        continue;
      for (Id m : C.hom(X, B))
        if (!R.over_morphism(m).empty() && C.compose(m, e) == f)
          return FactorisationEntry{L.over_morphism(e).front(), X, R.over_morphism(m).front()};
    }
  return std::nullopt;
}

/// The first factorisation of f (in the order of split_factorisation's
/// search) that is bi-universal.
inline std::optional<FactorisationEntry> find_bi_universal_factorisation(const LiftingStructure& S, Id f, BudgetTracker& budget)
{
  const FinCategory& C = *S.left->base();
  const ConcreteDouble& L = *S.left;
  const ConcreteDouble& R = *S.right;
  auto test = [&](const FactorisationEntry& e) {
    for (int x = 0; x < L.size(); ++x)
      for (const auto& p : C.squares_between(L.over(x), f))
        if (couniversal_candidates(S, e, x, p.top, p.bottom).size() != 1)
          return false;
    for (int y = 0; y < R.size(); ++y)
      for (const auto& p : C.squares_between(f, R.over(y)))
        if (universal_candidates(S, e, y, p.top, p.bottom).size() != 1)
          return false;
    return true;
  };
  for (Id X = 0; X < static_cast<Id>(C.num_objects()); ++X)
    for (Id e : C.hom(C.dom(f), X))
      for (int l : L.over_morphism(e))
        for (Id m : C.hom(X, C.cod(f))) {
          if (C.compose(m, e) != f)
            continue;
          for (int rv : R.over_morphism(m)) {
            if (!budget.consume())
              return std::nullopt;
            FactorisationEntry fe{l, X, rv};
            if (test(fe))
              return fe;
          }
        }
  return std::nullopt;
}

} // namespace fwfs
