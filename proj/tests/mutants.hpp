#pragma once

// Single-entry corruptions of valid inputs, one or more per checker family.

#include "support.hpp"

#include <fwfs/catlib.hpp>

#include <functional>
#include <string>
#include <vector>

namespace mutants {

using namespace fwfs;

struct Mutant {
  std::string family;
  std::string corruption;
  std::function<Report()> run;
};

inline Id other_in_hom(const FinCategory& C, Id m)
{
  for (Id x : C.hom(C.dom(m), C.cod(m)))
    if (x != m)
      return x;
  return kNone;
}

inline std::vector<Mutant> all()
{
  std::vector<Mutant> out;

  out.push_back({"category", "composite of the swap with itself set to the swap", [] {
                   auto spec = build_finset(2).cat->to_spec();
                   for (auto& e : spec.composition)
                     if (e[0] == "2>2:10" && e[1] == "2>2:10")
                       e[2] = "2>2:10";
                   return check_category(*make_category(spec));
                 }});

  out.push_back({"functor", "identity functor on 2 sends a to id0", [] {
                   auto A = walking_arrow();
                   Functor F = identity_functor(A);
                   F.mor[static_cast<std::size_t>(A->morphism("a"))] = A->morphism("id0");
                   return check_functor(F);
                 }});

  out.push_back({"double category", "one square composite of the internal D(Mono) redirected", [] {
                   auto S = build_finset(2);
                   InternalForm X = to_internal(*dbl_from_class(S.cat, S.mono));
                   const FinCategory& C1 = *X.dbl.cat1;
                   for (auto& [k, v] : X.dbl.ms) {
                     Id o = other_in_hom(C1, v);
                     if (o != kNone) {
                       v = o;
                       break;
                     }
                   }
                   return check_double_category(X.dbl);
                 }});

  out.push_back({"right-connectedness", "square (0>1, id) dropped from D(Mono)", [] {
                   auto S = build_finset(2);
                   const FinCategory& C = *S.cat;
                   const Id t = C.morphism("0>1");
                   std::vector<Vertical> vs;
                   for (Id m : S.mono)
                     vs.push_back({C.morphism_name(m), m});
                   auto D = std::make_shared<ConcreteDouble>(S.cat, "Mono-", vs, [&C, t](int, int, Id top, Id bottom) {
                     return !(top == t && bottom == C.identity(C.cod(t)));
                   });
                   D->auto_identities();
                   return check_right_connected(*D);
                 }});

  out.push_back({"lifting operation", "one entry of the (Epi, Mono) filler table replaced", [] {
                   auto s = support::epi_mono(2);
                   auto table = tabulate(s.op);
                   const FinCategory& C = *s.set.cat;
                   for (auto& [k, d] : *table) {
                     Id o = other_in_hom(C, d);
                     if (o != kNone) {
                       d = o;
                       break;
                     }
                   }
                   return check_lifting_operation(table_lifting(s.L, s.R, table));
                 }});

  out.push_back({"axiom of lifting", "RLP vertical 0>1 deleted from the right class", [] {
                   auto s = support::epi_mono(2);
                   MorClass fewer;
                   for (Id m : s.set.mono)
                     if (s.set.cat->morphism_name(m) != "0>1")
                       fewer.push_back(m);
                   BudgetTracker b;
                   return check_pre_awfs(unique_filler_lifting(s.L, dbl_from_class(s.set.cat, fewer)), b);
                 }});

  out.push_back({"axiom of factorisation", "2>2:00 factored as (id, 2>2:00) against (Epi, all)", [] {
                   auto s = support::epi_mono(2);
                   auto A = sq_concrete(s.set.cat);
                   LiftingStructure op{s.L, A, "none", [](int, int, Id, Id) { return kNone; }};
                   FactorisationAssignment fa;
                   for (const auto& e : s.fa)
                     fa.push_back({e.left, e.mid, A->find(s.R->vid(e.right))});
                   const FinCategory& C = *s.set.cat;
                   fa[static_cast<std::size_t>(C.morphism("2>2:00"))] = {s.L->identity(C.object("2")), C.object("2"), A->find("2>2:00")};
                   return check_factorisation_axiom(op, fa, FactorisationSide::left_only);
                 }});

  out.push_back({"structure morphism", "identity into a copy of the (Epi, Mono) table with one entry replaced", [] {
                   auto s = support::epi_mono(2);
                   auto table = tabulate(s.op);
                   const FinCategory& C = *s.set.cat;
                   for (auto& [k, d] : *table) {
                     Id o = other_in_hom(C, d);
                     if (o != kNone) {
                       d = o;
                       break;
                     }
                   }
                   return check_structure_morphism(s.op, table_lifting(s.L, s.R, table), identity_concrete_functor(s.L),
                                                   identity_concrete_functor(s.R));
                 }});

  out.push_back({"functorial factorisation", "one E(h,k) of the image factorisation replaced", [] {
                   Awfs A = image_awfs(build_finset(2));
                   const FinCategory& C = *A.ff.base;
                   for (auto& [k, e] : A.ff.E) {
                     Id o = C.is_identity(k[2]) ? kNone : other_in_hom(C, e);
                     if (o != kNone) {
                       e = o;
                       break;
                     }
                   }
                   return check_functorial_factorisation(A.ff);
                 }});

  out.push_back({"awfs", "comultiplication at 2>2:10 replaced by the swap", [] {
                   Awfs A = image_awfs(build_finset(2));
                   const FinCategory& C = *A.ff.base;
                   A.delta[static_cast<std::size_t>(C.morphism("2>2:10"))] = C.morphism("2>2:10");
                   return check_awfs(A);
                 }});

  out.push_back({"awfs morphism", "identity morphism component at 2>2:10 replaced by the swap", [] {
                   Awfs A = image_awfs(build_finset(2));
                   const FinCategory& C = *A.ff.base;
                   std::vector<Id> K;
                   for (Id m : A.ff.mid)
                     K.push_back(C.identity(m));
                   K[static_cast<std::size_t>(C.morphism("2>2:10"))] = C.morphism("2>2:10");
                   return check_awfs_morphism(A, A, K);
                 }});

  out.push_back({"split fibration", "chosen lift of a at (id1,1) moved off the cartesian arrow", [] {
                   CommaData K = comma_category(identity_functor(walking_arrow()), "2/2");
                   SplitFibration F = K.fibration;
                   F.theta[{K.comma->object("(id1,1)"), K.f.target->morphism("a")}] = K.comma->morphism("[a,a]:(id0,0)->(id1,1)");
                   return check_split_fibration(F);
                 }});

  out.push_back({"split reflection", "one non-identity unit component replaced by an identity", [] {
                   CommaData K = comma_category(identity_functor(walking_arrow()), "2/2");
                   SplitReflection R = K.reflection;
                   for (auto& e : R.eta)
                     if (!K.comma->is_identity(e)) {
                       e = K.comma->identity(K.comma->cod(e));
                       break;
                     }
                   return check_split_reflection(R);
                 }});

  out.push_back({"cat roster", "fibration d of the stock roster with a corrupted lift", [] {
                   auto S = stock_roster();
                   BudgetTracker b;
                   auto R = make_cat_roster(S.categories, b);
                   for (auto& f : S.fibrations)
                     if (f.name == "d")
                       f.theta[{S.comma.comma->object("(id1,1)"), S.comma.f.target->morphism("a")}] =
                           S.comma.comma->morphism("[a,a]:(id0,0)->(id1,1)");
                   return check_cat_instance(make_cat_instance(R, S.reflections, S.fibrations, S.composites), &b);
                 }});

  return out;
}

} // namespace mutants
