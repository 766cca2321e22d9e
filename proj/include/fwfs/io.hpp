#pragma once

// JSON file formats. Category references are either inline objects or paths
// relative to the referencing file; a Loader hands out one CatPtr per file.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "awfs.hpp"
#include "catlib.hpp"

namespace fwfs {

class ParseError : public Error {
public:
  using Error::Error;
};

struct Where {
  std::string file;
  std::string path;

  Where at(const std::string& key) const { return {file, path + "/" + key}; }
  Where at(std::size_t i) const { return {file, path + "/" + std::to_string(i)}; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file + ": " + (path.empty() ? "/" : path) + ": " + msg); }
};

inline Json read_json_file(const std::string& file)
{
  std::ifstream in(file, std::ios::binary);
  if (!in)
    throw ParseError(file + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(file + ": " + e.what());
  }
}

namespace io {

inline void keys(const Json& j, const Where& w, std::initializer_list<const char*> required, std::initializer_list<const char*> optional = {})
{
  if (!j.is_object())
    w.fail("expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k))
      w.fail("missing key '" + std::string(k) + "'");
  }
  for (const char* k : optional)
    allowed.insert(k);
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k))
      w.at(k).fail("unknown key '" + k + "'");
}

inline const std::string& str(const Json& j, const Where& w)
{
  if (!j.is_string())
    w.fail("expected a string");
  return j.get_ref<const std::string&>();
}

inline const Json& arr(const Json& j, const Where& w)
{
  if (!j.is_array())
    w.fail("expected an array");
  return j;
}

inline const Json& obj(const Json& j, const Where& w)
{
  if (!j.is_object())
    w.fail("expected an object");
  return j;
}

inline Id object(const FinCategory& C, const Json& j, const Where& w)
{
  Id o = C.find_object(str(j, w));
  if (o == kNone)
    w.fail("unknown object '" + j.get<std::string>() + "'");
  return o;
}

inline Id morphism(const FinCategory& C, const Json& j, const Where& w)
{
  Id m = C.find_morphism(str(j, w));
  if (m == kNone)
    w.fail("unknown morphism '" + j.get<std::string>() + "'");
  return m;
}

inline int vertical(const ConcreteDouble& D, const Json& j, const Where& w)
{
  int v = D.find(str(j, w));
  if (v < 0)
    w.fail("unknown vertical '" + j.get<std::string>() + "' of " + D.name());
  return v;
}

inline std::vector<std::string> tuple_of(const Json& j, const Where& w, std::size_t n)
{
  if (!j.is_array() || j.size() != n)
    w.fail("expected an array of " + std::to_string(n) + " strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(str(j[i], w.at(i)));
  return out;
}

} // namespace io

inline Json category_json(const FinCategory& C)
{
  Json j;
  j["objects"] = C.object_names();
  Json ms = Json::array();
  for (Id m = 0; m < static_cast<Id>(C.num_morphisms()); ++m)
    ms.push_back(Json{{"id", C.morphism_name(m)}, {"dom", C.object_name(C.dom(m))}, {"cod", C.object_name(C.cod(m))}});
  j["morphisms"] = std::move(ms);
  Json ids = Json::object();
  for (Id o = 0; o < static_cast<Id>(C.num_objects()); ++o)
    if (C.identity(o) != kNone)
      ids[C.object_name(o)] = C.morphism_name(C.identity(o));
  j["identities"] = std::move(ids);
  Json comp = Json::array();
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f)
    for (Id c = 0; c < static_cast<Id>(C.num_objects()); ++c)
      for (Id g : C.hom(C.cod(f), c)) {
        Id gf = C.compose(g, f);
        if (gf != kNone)
          comp.push_back(Json::array({C.morphism_name(g), C.morphism_name(f), C.morphism_name(gf)}));
      }
  j["composition"] = std::move(comp);
  return j;
}

inline Json functor_maps_json(const Functor& F, Json j = Json::object())
{
  Json om = Json::object(), mm = Json::object();
  for (Id o = 0; o < static_cast<Id>(F.source->num_objects()); ++o)
    om[F.source->object_name(o)] = F.on_obj(o) == kNone ? Json() : Json(F.target->object_name(F.on_obj(o)));
  for (Id m = 0; m < static_cast<Id>(F.source->num_morphisms()); ++m)
    mm[F.source->morphism_name(m)] = F.on_mor(m) == kNone ? Json() : Json(F.target->morphism_name(F.on_mor(m)));
  j["object_map"] = std::move(om);
  j["morphism_map"] = std::move(mm);
  return j;
}

/// A parsed lifting-awfs bundle.
struct Bundle {
  CatPtr category;
  LiftingStructure op;
  std::optional<FactorisationAssignment> fa;
};

struct RosterFile {
  std::shared_ptr<const CatRoster> roster;
  std::map<std::string, CatPtr> by_name;
  std::vector<SplitReflection> reflections;
  std::vector<SplitFibration> fibrations;
  std::vector<std::pair<std::string, std::string>> composites;
};

class Loader {
public:
  CatPtr category_file(const std::string& file)
  {
    std::string key = std::filesystem::weakly_canonical(file).string();
    auto it = cats_.find(key);
    if (it != cats_.end())
      return it->second;
    CatPtr c = parse_category(read_json_file(file), Where{file, ""});
    cats_.emplace(key, c);
    return c;
  }

  /// An inline category or a path relative to the referencing file.
  CatPtr category_ref(const Json& j, const Where& w)
  {
    if (j.is_string())
      return category_file(relative(w.file, j.get<std::string>()));
    return parse_category(j, w);
  }

  CatPtr parse_category(const Json& j, const Where& w)
  {
    io::keys(j, w, {"objects", "morphisms"}, {"identities", "composition"});
    FinCategory::Spec s;
    const auto& objs = io::arr(j["objects"], w.at("objects"));
    for (std::size_t i = 0; i < objs.size(); ++i)
      s.objects.push_back(io::str(objs[i], w.at("objects").at(i)));
    std::set<std::string> obj_ids(s.objects.begin(), s.objects.end()), mor_ids;
    auto known = [](const std::set<std::string>& ids, const std::string& id, const Where& wk, const char* what) {
      if (!ids.count(id))
        wk.fail(std::string("unknown ") + what + " '" + id + "'");
      return id;
    };
    const auto& mors = io::arr(j["morphisms"], w.at("morphisms"));
    for (std::size_t i = 0; i < mors.size(); ++i) {
      Where wi = w.at("morphisms").at(i);
      io::keys(mors[i], wi, {"id", "dom", "cod"});
      s.morphisms.push_back({io::str(mors[i]["id"], wi.at("id")), known(obj_ids, io::str(mors[i]["dom"], wi.at("dom")), wi.at("dom"), "object"),
                             known(obj_ids, io::str(mors[i]["cod"], wi.at("cod")), wi.at("cod"), "object")});
      mor_ids.insert(s.morphisms.back().id);
    }
    if (j.contains("identities"))
      for (const auto& [o, m] : io::obj(j["identities"], w.at("identities")).items()) {
        known(obj_ids, o, w.at("identities").at(o), "object");
        s.identities.emplace_back(o, known(mor_ids, io::str(m, w.at("identities").at(o)), w.at("identities").at(o), "morphism"));
      }
    if (j.contains("composition")) {
      const auto& comp = io::arr(j["composition"], w.at("composition"));
      for (std::size_t i = 0; i < comp.size(); ++i) {
        Where wi = w.at("composition").at(i);
        auto t = io::tuple_of(comp[i], wi, 3);
        for (std::size_t x = 0; x < 3; ++x)
          known(mor_ids, t[x], wi.at(x), "morphism");
        s.composition.push_back({t[0], t[1], t[2]});
      }
    }
    try {
      return make_category(s);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      w.fail(e.what());
    }
  }

  /// {"source", "target", "object_map", "morphism_map"}; source and target are
  /// resolved by `resolve`.
  template <class Resolve>
  Functor parse_functor(const Json& j, const Where& w, Resolve resolve)
  {
    io::keys(j, w, {"source", "target", "object_map", "morphism_map"});
    CatPtr A = resolve(j["source"], w.at("source"));
    CatPtr B = resolve(j["target"], w.at("target"));
    return parse_maps(j, w, A, B);
  }

  Functor parse_maps(const Json& j, const Where& w, const CatPtr& A, const CatPtr& B)
  {
    Functor F{A, B, std::vector<Id>(A->num_objects(), kNone), std::vector<Id>(A->num_morphisms(), kNone)};
    for (const auto& [k, v] : io::obj(j["object_map"], w.at("object_map")).items()) {
      Where wk = w.at("object_map").at(k);
      F.obj[static_cast<std::size_t>(io::object(*A, Json(k), wk))] = io::object(*B, v, wk);
    }
    for (const auto& [k, v] : io::obj(j["morphism_map"], w.at("morphism_map")).items()) {
      Where wk = w.at("morphism_map").at(k);
      F.mor[static_cast<std::size_t>(io::morphism(*A, Json(k), wk))] = io::morphism(*B, v, wk);
    }
    return F;
  }

  Functor functor_file(const std::string& file)
  {
    Json j = read_json_file(file);
    return parse_functor(j, Where{file, ""}, [&](const Json& c, const Where& w) { return category_ref(c, w); });
  }

  DoubleCategory double_file(const std::string& file)
  {
    Json j = read_json_file(file);
    Where w{file, ""};
    io::keys(j, w, {"cat0", "cat1", "d", "c", "i", "m"}, {"ms"});
    DoubleCategory D;
    D.cat0 = category_ref(j["cat0"], w.at("cat0"));
    D.cat1 = category_ref(j["cat1"], w.at("cat1"));
    auto maps = [&](const char* k, const CatPtr& A, const CatPtr& B) {
      io::keys(j[k], w.at(k), {"object_map", "morphism_map"});
      return parse_maps(j[k], w.at(k), A, B);
    };
    D.d = maps("d", D.cat1, D.cat0);
    D.c = maps("c", D.cat1, D.cat0);
    D.i = maps("i", D.cat0, D.cat1);
    auto table = [&](const char* k, bool objects, std::map<std::pair<Id, Id>, Id>& out) {
      const auto& a = io::arr(j[k], w.at(k));
      for (std::size_t n = 0; n < a.size(); ++n) {
        Where wn = w.at(k).at(n);
        io::tuple_of(a[n], wn, 3);
        auto get = [&](std::size_t i) { return objects ? io::object(*D.cat1, a[n][i], wn.at(i)) : io::morphism(*D.cat1, a[n][i], wn.at(i)); };
        out[{get(0), get(1)}] = get(2);
      }
    };
    table("m", true, D.mv);
    if (j.contains("ms"))
      table("ms", false, D.ms);
    return D;
  }

  DblPtr parse_side(const CatPtr& Cp, const Json& j, const Where& w, const std::string& name)
  {
    const FinCategory& C = *Cp;
    try {
      if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        MorClass E;
        if (s == "all")
          E = all_morphisms(C);
        else if (s == "identities")
          E = identity_class(C);
        else if (s == "iso")
          E = iso_class(C);
        else if (s == "epi")
          E = epi_class(C);
        else if (s == "mono")
          E = mono_class(C);
        else if (s == "split-epi")
          E = split_epi_class(C);
        else
          w.fail("unknown class '" + s + "'");
        return dbl_from_class(Cp, E, name);
      }
      if (j.is_array()) {
        MorClass E;
        for (std::size_t i = 0; i < j.size(); ++i)
          E.push_back(io::morphism(C, j[i], w.at(i)));
        std::sort(E.begin(), E.end());
        E.erase(std::unique(E.begin(), E.end()), E.end());
        return dbl_from_class(Cp, E, name);
      }
      return parse_concrete(Cp, j, w, name);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      w.fail(e.what());
    }
  }

  /// {"verticals":[{"id","over"}], "identities":{obj:vid}, "composites":
  /// [[upper,lower,composite]], "squares":"all"|[[src,tgt,top,bottom]]}.
  DblPtr parse_concrete(const CatPtr& Cp, const Json& j, const Where& w, const std::string& name)
  {
    const FinCategory& C = *Cp;
    io::keys(j, w, {"verticals"}, {"identities", "composites", "squares"});
    std::vector<Vertical> vs;
    const auto& va = io::arr(j["verticals"], w.at("verticals"));
    for (std::size_t i = 0; i < va.size(); ++i) {
      Where wi = w.at("verticals").at(i);
      io::keys(va[i], wi, {"id", "over"});
      vs.push_back({io::str(va[i]["id"], wi.at("id")), io::morphism(C, va[i]["over"], wi.at("over"))});
    }
    SquarePredicate pred;
    std::shared_ptr<std::set<std::tuple<std::string, std::string, Id, Id>>> listed;
    if (j.contains("squares") && !(j["squares"].is_string() && j["squares"] == "all")) {
      listed = std::make_shared<std::set<std::tuple<std::string, std::string, Id, Id>>>();
      const auto& sa = io::arr(j["squares"], w.at("squares"));
      for (std::size_t i = 0; i < sa.size(); ++i) {
        Where wi = w.at("squares").at(i);
        auto t = io::tuple_of(sa[i], wi, 4);
        listed->insert({t[0], t[1], io::morphism(C, sa[i][2], wi.at(2)), io::morphism(C, sa[i][3], wi.at(3))});
      }
    }
    if (listed) {
      std::vector<std::string> ids;
      for (const auto& v : vs)
        ids.push_back(v.id);
      std::sort(ids.begin(), ids.end());
      pred = [listed, ids](int a, int b, Id top, Id bottom) {
        return listed->count({ids[static_cast<std::size_t>(a)], ids[static_cast<std::size_t>(b)], top, bottom}) > 0;
      };
    }
    std::shared_ptr<ConcreteDouble> D;
    try {
      D = std::make_shared<ConcreteDouble>(Cp, name, vs, pred);
    } catch (const Error& e) {
      w.fail(e.what());
    }
    if (j.contains("identities")) {
      for (const auto& [o, v] : io::obj(j["identities"], w.at("identities")).items()) {
        Where wo = w.at("identities").at(o);
        D->set_identity(io::object(C, Json(o), wo), io::vertical(*D, v, wo));
      }
    } else {
      D->auto_identities();
    }
    if (j.contains("composites")) {
      const auto& ca = io::arr(j["composites"], w.at("composites"));
      for (std::size_t i = 0; i < ca.size(); ++i) {
        Where wi = w.at("composites").at(i);
        io::tuple_of(ca[i], wi, 3);
        D->set_composite(io::vertical(*D, ca[i][1], wi.at(1)), io::vertical(*D, ca[i][0], wi.at(0)), io::vertical(*D, ca[i][2], wi.at(2)));
      }
    } else {
      // Composites by underlying morphism, where that is unambiguous.
      for (int a = 0; a < D->size(); ++a)
        for (int b = 0; b < D->size(); ++b)
          if (D->cod(a) == D->dom(b)) {
            const auto& over = D->over_morphism(C.compose(D->over(b), D->over(a)));
            if (over.size() == 1)
              D->set_composite(b, a, over.front());
          }
    }
    return D;
  }

  Bundle bundle_file(const std::string& file)
  {
    Json j = read_json_file(file);
    Where w{file, ""};
    io::keys(j, w, {"category", "left", "right", "operation"}, {"factorisation"});
    Bundle b;
    b.category = category_ref(j["category"], w.at("category"));
    const FinCategory& C = *b.category;
    DblPtr L = parse_side(b.category, j["left"], w.at("left"), "L");
    DblPtr R = parse_side(b.category, j["right"], w.at("right"), "R");
    const Json& op = j["operation"];
    Where wo = w.at("operation");
    io::obj(op, wo);
    if (!op.contains("kind"))
      wo.fail("missing key 'kind'");
    const std::string& kind = io::str(op["kind"], wo.at("kind"));
    if (kind == "unique") {
      io::keys(op, wo, {"kind"});
      try {
        b.op = unique_filler_lifting(L, R);
      } catch (const Error& e) {
        wo.fail(e.what());
      }
    } else if (kind == "table") {
      io::keys(op, wo, {"kind", "entries"});
      auto table = std::make_shared<FillerTable>();
      const auto& ea = io::arr(op["entries"], wo.at("entries"));
      for (std::size_t i = 0; i < ea.size(); ++i) {
        Where wi = wo.at("entries").at(i);
        io::tuple_of(ea[i], wi, 5);
        (*table)[{io::vertical(*L, ea[i][0], wi.at(0)), io::vertical(*R, ea[i][1], wi.at(1)), io::morphism(C, ea[i][2], wi.at(2)),
                  io::morphism(C, ea[i][3], wi.at(3))}] = io::morphism(C, ea[i][4], wi.at(4));
      }
      b.op = table_lifting(L, R, table);
    } else {
      wo.at("kind").fail("unknown operation kind '" + kind + "'");
    }
    if (j.contains("factorisation")) {
      const Json& fj = j["factorisation"];
      Where wf = w.at("factorisation");
      FactorisationAssignment fa(C.num_morphisms());
      if (fj.is_string()) {
        if (fj != "split")
          wf.fail("expected \"split\" or a list of entries");
        for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
          auto e = split_factorisation(b.op, f);
          if (!e)
            wf.fail("no factorisation of '" + C.morphism_name(f) + "' into a left and a right vertical");
          fa[static_cast<std::size_t>(f)] = *e;
        }
      } else {
        const auto& fa_j = io::arr(fj, wf);
        for (std::size_t i = 0; i < fa_j.size(); ++i) {
          Where wi = wf.at(i);
          io::keys(fa_j[i], wi, {"f", "left", "mid", "right"});
          Id f = io::morphism(C, fa_j[i]["f"], wi.at("f"));
          fa[static_cast<std::size_t>(f)] = FactorisationEntry{io::vertical(*L, fa_j[i]["left"], wi.at("left")),
                                                               io::object(C, fa_j[i]["mid"], wi.at("mid")),
                                                               io::vertical(*R, fa_j[i]["right"], wi.at("right"))};
        }
      }
      b.fa = std::move(fa);
    }
    return b;
  }

  Awfs awfs_file(const std::string& file)
  {
    Json j = read_json_file(file);
    Where w{file, ""};
    io::keys(j, w, {"category", "E", "E_mor", "delta", "mu"});
    Awfs A;
    A.ff.base = category_ref(j["category"], w.at("category"));
    const FinCategory& C = *A.ff.base;
    const std::size_t n = C.num_morphisms();
    A.ff.mid.assign(n, kNone);
    A.ff.lambda.assign(n, kNone);
    A.ff.rho.assign(n, kNone);
    A.delta.assign(n, kNone);
    A.mu.assign(n, kNone);
    for (const auto& [f, e] : io::obj(j["E"], w.at("E")).items()) {
      Where wf = w.at("E").at(f);
      const auto i = static_cast<std::size_t>(io::morphism(C, Json(f), wf));
      io::keys(e, wf, {"mid", "lambda", "rho"});
      A.ff.mid[i] = io::object(C, e["mid"], wf.at("mid"));
      A.ff.lambda[i] = io::morphism(C, e["lambda"], wf.at("lambda"));
      A.ff.rho[i] = io::morphism(C, e["rho"], wf.at("rho"));
    }
    for (Id f = 0; f < static_cast<Id>(n); ++f)
      if (A.ff.mid[static_cast<std::size_t>(f)] == kNone)
        w.at("E").fail("missing key '" + C.morphism_name(f) + "'");
    const auto& em = io::arr(j["E_mor"], w.at("E_mor"));
    for (std::size_t i = 0; i < em.size(); ++i) {
      Where wi = w.at("E_mor").at(i);
      io::tuple_of(em[i], wi, 5);
      A.ff.E[{io::morphism(C, em[i][2], wi.at(2)), io::morphism(C, em[i][3], wi.at(3)), io::morphism(C, em[i][0], wi.at(0)),
              io::morphism(C, em[i][1], wi.at(1))}] = io::morphism(C, em[i][4], wi.at(4));
    }
    auto per = [&](const char* k, std::vector<Id>& out) {
      for (const auto& [f, m] : io::obj(j[k], w.at(k)).items()) {
        Where wf = w.at(k).at(f);
        out[static_cast<std::size_t>(io::morphism(C, Json(f), wf))] = io::morphism(C, m, wf);
      }
      for (Id f = 0; f < static_cast<Id>(n); ++f)
        if (out[static_cast<std::size_t>(f)] == kNone)
          w.at(k).fail("missing key '" + C.morphism_name(f) + "'");
    };
    per("delta", A.delta);
    per("mu", A.mu);
    return A;
  }

  RosterFile roster_json(const Json& j, const Where& w, BudgetTracker& budget)
  {
    io::keys(j, w, {"categories"}, {"reflections", "fibrations", "composites"});
    RosterFile out;
    std::vector<std::pair<std::string, CatPtr>> cats;
    for (const auto& [n, c] : io::obj(j["categories"], w.at("categories")).items()) {
      CatPtr p = category_ref(c, w.at("categories").at(n));
      out.by_name[n] = p;
      cats.emplace_back(n, p);
    }
    out.roster = make_cat_roster(cats, budget);
    auto resolve = [&](const Json& c, const Where& wc) {
      auto it = out.by_name.find(io::str(c, wc));
      if (it == out.by_name.end())
        wc.fail("unknown category '" + c.get<std::string>() + "'");
      return it->second;
    };
    if (j.contains("reflections")) {
      const auto& ra = io::arr(j["reflections"], w.at("reflections"));
      for (std::size_t i = 0; i < ra.size(); ++i) {
        Where wi = w.at("reflections").at(i);
        io::keys(ra[i], wi, {"name", "right", "left", "eta"});
        SplitReflection s;
        s.name = io::str(ra[i]["name"], wi.at("name"));
        s.u = parse_functor(ra[i]["right"], wi.at("right"), resolve);
        s.f = parse_functor(ra[i]["left"], wi.at("left"), resolve);
        const FinCategory& B = *s.u.target;
        s.eta.assign(B.num_objects(), kNone);
        for (const auto& [o, m] : io::obj(ra[i]["eta"], wi.at("eta")).items()) {
          Where wo = wi.at("eta").at(o);
          s.eta[static_cast<std::size_t>(io::object(B, Json(o), wo))] = io::morphism(B, m, wo);
        }
        out.reflections.push_back(std::move(s));
      }
    }
    if (j.contains("fibrations")) {
      const auto& fa = io::arr(j["fibrations"], w.at("fibrations"));
      for (std::size_t i = 0; i < fa.size(); ++i) {
        Where wi = w.at("fibrations").at(i);
        io::keys(fa[i], wi, {"name", "functor", "theta"});
        SplitFibration s;
        s.name = io::str(fa[i]["name"], wi.at("name"));
        s.p = parse_functor(fa[i]["functor"], wi.at("functor"), resolve);
        const FinCategory& A = *s.p.source;
        const FinCategory& B = *s.p.target;
        const auto& ta = io::arr(fa[i]["theta"], wi.at("theta"));
        for (std::size_t t = 0; t < ta.size(); ++t) {
          Where wt = wi.at("theta").at(t);
          io::tuple_of(ta[t], wt, 3);
          s.theta[{io::object(A, ta[t][0], wt.at(0)), io::morphism(B, ta[t][1], wt.at(1))}] = io::morphism(A, ta[t][2], wt.at(2));
        }
        out.fibrations.push_back(std::move(s));
      }
    }
    if (j.contains("composites")) {
      const auto& ca = io::arr(j["composites"], w.at("composites"));
      for (std::size_t i = 0; i < ca.size(); ++i) {
        auto t = io::tuple_of(ca[i], w.at("composites").at(i), 2);
        out.composites.emplace_back(t[0], t[1]);
      }
    }
    return out;
  }

  RosterFile roster_file(const std::string& file, BudgetTracker& budget)
  {
    return roster_json(read_json_file(file), Where{file, ""}, budget);
  }

private:
  static std::string relative(const std::string& from, const std::string& target)
  {
    std::filesystem::path p(target);
    if (p.is_absolute())
      return target;
    return (std::filesystem::path(from).parent_path() / p).lexically_normal().string();
  }

  std::map<std::string, CatPtr> cats_;
};

// ---------------------------------------------------------------------------
// Writers

inline Json awfs_json(const Awfs& A, const Json& category)
{
  const FinCategory& C = *A.ff.base;
  Json j;
  j["category"] = category;
  Json E = Json::object(), d = Json::object(), m = Json::object();
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    const auto i = static_cast<std::size_t>(f);
    E[C.morphism_name(f)] = Json{{"mid", C.object_name(A.ff.mid[i])}, {"lambda", C.morphism_name(A.ff.lambda[i])}, {"rho", C.morphism_name(A.ff.rho[i])}};
    d[C.morphism_name(f)] = name_or_none(C, A.delta[i]);
    m[C.morphism_name(f)] = name_or_none(C, A.mu[i]);
  }
  j["E"] = std::move(E);
  std::vector<std::array<std::string, 5>> rows;
  for (const auto& [k, e] : A.ff.E)
    rows.push_back({C.morphism_name(k[2]), C.morphism_name(k[3]), C.morphism_name(k[0]), C.morphism_name(k[1]), C.morphism_name(e)});
  std::sort(rows.begin(), rows.end());
  Json em = Json::array();
  for (const auto& r : rows)
    em.push_back(Json::array({r[0], r[1], r[2], r[3], r[4]}));
  j["E_mor"] = std::move(em);
  j["delta"] = std::move(d);
  j["mu"] = std::move(m);
  return j;
}

inline Json factorisation_json(const LiftingStructure& S, const FactorisationAssignment& fa)
{
  const FinCategory& C = *S.left->base();
  Json out = Json::array();
  for (Id f = 0; f < static_cast<Id>(C.num_morphisms()); ++f) {
    if (!has_entry(fa, f))
      continue;
    const auto& e = fa[static_cast<std::size_t>(f)];
    out.push_back(Json{{"f", C.morphism_name(f)}, {"left", S.left->vid(e.left)}, {"mid", C.object_name(e.mid)}, {"right", S.right->vid(e.right)}});
  }
  return out;
}

/// A bundle over a class-based lifting structure, with the filler table
/// written out.
inline Json bundle_json(const LiftingStructure& S, const Json& category, const Json& left, const Json& right,
                        const std::optional<FactorisationAssignment>& fa)
{
  Json j;
  j["category"] = category;
  j["left"] = left;
  j["right"] = right;
  j["operation"] = Json{{"kind", "table"}, {"entries", filler_entries_json(S)}};
  if (fa)
    j["factorisation"] = factorisation_json(S, *fa);
  return j;
}

inline Json reflection_json(const SplitReflection& s, const std::map<const FinCategory*, std::string>& names)
{
  const FinCategory& B = *s.u.target;
  Json eta = Json::object();
  for (Id o = 0; o < static_cast<Id>(B.num_objects()); ++o)
    eta[B.object_name(o)] = B.morphism_name(s.eta[static_cast<std::size_t>(o)]);
  auto fun = [&](const Functor& F) {
    return functor_maps_json(F, Json{{"source", names.at(F.source.get())}, {"target", names.at(F.target.get())}});
  };
  return Json{{"name", s.name}, {"right", fun(s.u)}, {"left", fun(s.f)}, {"eta", eta}};
}

inline Json fibration_json(const SplitFibration& s, const std::map<const FinCategory*, std::string>& names)
{
  const FinCategory& A = *s.p.source;
  const FinCategory& B = *s.p.target;
  Json th = Json::array();
  for (const auto& [k, t] : s.theta)
    th.push_back(Json::array({A.object_name(k.first), B.morphism_name(k.second), name_or_none(A, t)}));
  return Json{{"name", s.name},
              {"functor", functor_maps_json(s.p, Json{{"source", names.at(s.p.source.get())}, {"target", names.at(s.p.target.get())}})},
              {"theta", th}};
}

} // namespace fwfs
