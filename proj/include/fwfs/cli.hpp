#pragma once

// The fwfs command line: argument parsing, dispatch, and report output.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"

namespace fwfs {

inline constexpr int kExitUsage = 64;

namespace cli {

struct Outcome {
  Report report;
  std::optional<Json> result;
  std::optional<std::string> raw; // emitted verbatim instead of JSON
};

inline Budget budget_from(std::optional<std::uint64_t> candidates, std::optional<double> seconds)
{
  Budget b;
  if (candidates) {
    b.max_candidates = *candidates;
  } else if (const char* env = std::getenv("FWFS_BUDGET")) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(env, &used);
      if (used != std::string(env).size() || v <= 0)
        throw Error("");
      b.max_candidates = static_cast<std::uint64_t>(v);
    } catch (...) {
      throw ParseError(std::string("FWFS_BUDGET: expected a positive integer, got '") + env + "'");
    }
  }
  if (seconds)
    b.max_seconds = *seconds;
  return b;
}

} // namespace cli

/// Runs one command. The report (or data) goes to `out`, a one-line summary
/// and any error message to `err`.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Finite checker for lifting structures and algebraic weak factorisation systems", "fwfs"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> max_candidates;
  std::optional<double> max_seconds;
  app.add_option("--max-candidates", max_candidates, "enumeration budget per check")->check(CLI::PositiveNumber);
  app.add_option("--max-seconds", max_seconds, "time budget per check")->check(CLI::PositiveNumber);

  std::string file, side = "both", morphism, square_file;
  bool bundle_flag = false, dot = false;
  std::vector<std::string> fill_args;
  int build_n = 2;
  std::function<cli::Outcome(BudgetTracker&)> action;
  Loader loader;

  auto* check = app.add_subcommand("check", "check a file for the laws of its kind");
  check->require_subcommand(1);
  auto add_check = [&](const char* name, const char* what, std::function<cli::Outcome(BudgetTracker&)> fn) {
    auto* sc = check->add_subcommand(name, what);
    sc->add_option("file", file, "input file")->required();
    sc->callback([&action, fn] { action = fn; });
    return sc;
  };
  add_check("category", "composition table laws", [&](BudgetTracker&) { return cli::Outcome{check_category(*loader.category_file(file)), {}, {}}; });
  add_check("functor", "functor laws", [&](BudgetTracker&) { return cli::Outcome{check_functor(loader.functor_file(file)), {}, {}}; });
  add_check("double", "double category laws", [&](BudgetTracker& b) {
    return cli::Outcome{check_double_category(loader.double_file(file), &b), {}, {}};
  });
  add_check("lifting-op", "lifting operation axioms", [&](BudgetTracker& b) {
    return cli::Outcome{check_lifting_operation(loader.bundle_file(file).op, &b), {}, {}};
  });
  add_check("pre-awfs", "axiom of lifting", [&](BudgetTracker& b) { return cli::Outcome{check_pre_awfs(loader.bundle_file(file).op, b), {}, {}}; });
  auto* la = add_check("lifting-awfs", "lifting operation, axiom of lifting and axiom of factorisation", [&](BudgetTracker& b) {
    Bundle bd = loader.bundle_file(file);
    FactorisationSide s = side == "left" ? FactorisationSide::left_only : side == "right" ? FactorisationSide::right_only : FactorisationSide::both;
    return cli::Outcome{check_lifting_awfs(bd.op, bd.fa.value_or(FactorisationAssignment{}), s, b), {}, {}};
  });
  la->add_option("--side", side, "factorisation axiom side")->check(CLI::IsMember({"both", "left", "right"}));
  add_check("awfs", "functorial factorisation, comonad, monad and distributive law", [&](BudgetTracker& b) {
    return cli::Outcome{check_awfs(loader.awfs_file(file), &b), {}, {}};
  });
  add_check("cat-roster", "split reflections, split fibrations and the canonical filler", [&](BudgetTracker& b) {
    RosterFile rf = loader.roster_file(file, b);
    CatInstance I = make_cat_instance(rf.roster, rf.reflections, rf.fibrations, rf.composites);
    return cli::Outcome{check_cat_instance(I, &b), {}, {}};
  });

  auto* fac = app.add_subcommand("factorise", "factor a morphism (epi-mono, or the factorisation of a bundle)");
  fac->add_option("file", file, "category file, or bundle with --bundle")->required();
  fac->add_option("morphism", morphism, "morphism id")->required();
  fac->add_flag("--bundle", bundle_flag, "read a bundle and use its factorisation");
  fac->callback([&] {
    action = [&](BudgetTracker&) {
      cli::Outcome o;
      LiftingStructure S;
      std::optional<FactorisationEntry> e;
      Id f = kNone;
      if (bundle_flag) {
        Bundle bd = loader.bundle_file(file);
        S = bd.op;
        f = bd.category->find_morphism(morphism);
        if (f == kNone)
          throw ParseError(file + ": unknown morphism '" + morphism + "'");
        if (bd.fa && has_entry(*bd.fa, f))
          e = (*bd.fa)[static_cast<std::size_t>(f)];
      } else {
        CatPtr C = loader.category_file(file);
        f = C->find_morphism(morphism);
        if (f == kNone)
          throw ParseError(file + ": unknown morphism '" + morphism + "'");
        S = LiftingOperation{dbl_from_class(C, epi_class(*C), "Epi"), dbl_from_class(C, mono_class(*C), "Mono"), "classes", {}};
      }
      const FinCategory& C = *S.left->base();
      if (!e)
        e = split_factorisation(S, f);
      Check& c = o.report.add("factorisation");
      ++c.cases_examined;
      if (!e) {
        c.fail(Json{{"f", morphism}, {"kind", "no factorisation"}});
        return o;
      }
      const Id l = S.left->over(e->left), r = S.right->over(e->right);
      if (C.compose(r, l) != f)
        c.fail(Json{{"f", morphism}, {"kind", "composite differs"}});
      o.result = Json{{"f", morphism}, {"left", S.left->vid(e->left)}, {"mid", C.object_name(e->mid)}, {"right", S.right->vid(e->right)}};
      return o;
    };
  });

  auto* fil = app.add_subcommand("fillers", "all diagonal fillers of a commuting square");
  fil->add_option("args", fill_args, "<category> <left> <right> <top> <bottom>")->required()->expected(5);
  fil->callback([&] {
    action = [&](BudgetTracker&) {
      CatPtr C = loader.category_file(fill_args[0]);
      Where w{fill_args[0], ""};
      Id ids[4];
      for (int i = 0; i < 4; ++i)
        ids[i] = io::morphism(*C, Json(fill_args[static_cast<std::size_t>(i) + 1]), w.at("argument " + std::to_string(i + 2)));
      cli::Outcome o;
      Check& c = o.report.add("square");
      ++c.cases_examined;
      if (!C->commutes(ids[0], ids[1], ids[2], ids[3])) {
        c.fail(Json{{"kind", "square does not commute"}});
        return o;
      }
      Json fs = Json::array();
      for (Id d : enumerate_fillers(*C, ids[0], ids[1], ids[2], ids[3]))
        fs.push_back(C->morphism_name(d));
      o.result = Json{{"fillers", fs}};
      return o;
    };
  });

  auto* com = app.add_subcommand("comma", "the comma category B/f with i_f, c_f, d_f");
  com->add_option("--functor", file, "functor file")->required();
  com->add_flag("--dot", dot, "emit a DOT graph of B/f");
  com->callback([&] {
    action = [&](BudgetTracker&) {
      Functor F = loader.functor_file(file);
      cli::Outcome o;
      o.report = check_functor(F);
      if (!o.report.ok())
        return o;
      CommaData K = comma_category(F);
      o.report.absorb(check_comma(K));
      if (dot) {
        o.raw = comma_dot(K);
        return o;
      }
      std::map<const FinCategory*, std::string> names{{F.source.get(), "A"}, {F.target.get(), "B"}, {K.comma.get(), "B/f"}};
      Json eta = reflection_json(K.reflection, names);
      o.result = Json{{"comma", category_json(*K.comma)},
                      {"i", functor_maps_json(K.i())},
                      {"c", functor_maps_json(K.c())},
                      {"d", functor_maps_json(K.d())},
                      {"eta", eta["eta"]},
                      {"theta", fibration_json(K.fibration, names)["theta"]}};
      return o;
    };
  });

  auto* cf = app.add_subcommand("cat-fill", "canonical filler of a square from a split reflection to a split fibration");
  cf->add_option("--square", square_file, "square file")->required();
  cf->callback([&] {
    action = [&](BudgetTracker& b) {
      Json j = read_json_file(square_file);
      Where w{square_file, ""};
      io::keys(j, w, {"roster", "reflection", "fibration", "top", "bottom"});
      RosterFile rf = j["roster"].is_string() ? loader.roster_file((std::filesystem::path(square_file).parent_path() / j["roster"].get<std::string>()).string(), b)
                                              : loader.roster_json(j["roster"], w.at("roster"), b);
      CatInstance I = make_cat_instance(rf.roster, rf.reflections, rf.fibrations, rf.composites);
      cli::Outcome o;
      o.report.absorb(I.validity, "verticals");
      if (!I.validity.ok())
        return o;
      int u = io::vertical(*I.splref, j["reflection"], w.at("reflection"));
      int g = io::vertical(*I.splfib, j["fibration"], w.at("fibration"));
      auto resolve = [&](const Json& c, const Where& wc) {
        auto it = rf.by_name.find(io::str(c, wc));
        if (it == rf.by_name.end())
          wc.fail("unknown category '" + c.get<std::string>() + "'");
        return it->second;
      };
      Functor r = loader.parse_functor(j["top"], w.at("top"), resolve);
      Functor s = loader.parse_functor(j["bottom"], w.at("bottom"), resolve);
      const auto& S = (*I.reflections)[static_cast<std::size_t>(u)];
      const auto& F = (*I.fibrations)[static_cast<std::size_t>(g)];
      Check& sq = o.report.add("square");
      ++sq.cases_examined;
      if (!check_functor(r).ok() || !check_functor(s).ok() || !(compose_functors(F.p, r) == compose_functors(s, S.u))) {
        sq.fail(Json{{"kind", "not a commuting square of functors"}});
        return o;
      }
      Functor k = canonical_filler(S, F, r, s, &(*I.cartesian)[static_cast<std::size_t>(g)]);
      Check& mem = o.report.add("brute-force-fillers");
      bool complete = true;
      auto all = functor_fillers(S.u, F.p, r, s, b, complete);
      ++mem.cases_examined;
      if (!complete)
        mem.give_up(b.reason());
      else if (std::find(all.begin(), all.end(), k) == all.end())
        mem.fail(Json{{"kind", "canonical filler missing from the filler set"}});
      o.result = Json{{"filler", functor_maps_json(k)}, {"fillers", all.size()}};
      return o;
    };
  });

  auto* sm = app.add_subcommand("sem", "the lifting structure of coalgebras and algebras of an awfs");
  sm->add_option("file", file, "awfs file")->required();
  sm->callback([&] {
    action = [&](BudgetTracker& b) {
      auto A = std::make_shared<const Awfs>(loader.awfs_file(file));
      cli::Outcome o;
      o.report.absorb(check_awfs(*A, &b), "awfs");
      if (!o.report.ok())
        return o;
      SemStructure T = sem(A);
      o.report.absorb(check_lifting_awfs(T.op, T.fa, FactorisationSide::both, b), "sem");
      Json tables = canonical_tables(T.op, vertical_names(*T.coalg.dbl), vertical_names(*T.alg.dbl));
      tables["factorisation"] = factorisation_json(T.op, T.fa);
      o.result = std::move(tables);
      return o;
    };
  });

  auto* rc = app.add_subcommand("reconstruct", "the awfs of a lifting awfs");
  rc->add_option("file", file, "bundle file")->required();
  rc->callback([&] {
    action = [&](BudgetTracker& b) {
      Bundle bd = loader.bundle_file(file);
      cli::Outcome o;
      auto rec = awfs_from_lifting(bd.op, bd.fa.value_or(FactorisationAssignment{}), &b);
      o.report.absorb(std::move(rec.report));
      if (rec.awfs) {
        o.report.absorb(check_awfs(*rec.awfs, &b), "awfs");
        o.result = awfs_json(*rec.awfs, category_json(*bd.category));
      }
      return o;
    };
  });

  auto* rt = app.add_subcommand("roundtrip", "reconstruct and compare (bundle or awfs file)");
  rt->add_option("file", file, "bundle or awfs file")->required();
  rt->callback([&] {
    action = [&](BudgetTracker& b) {
      cli::Outcome o;
      if (read_json_file(file).contains("E")) {
        auto A = std::make_shared<const Awfs>(loader.awfs_file(file));
        o.report.absorb(check_awfs(*A, &b), "awfs");
        if (o.report.ok())
          o.report.absorb(roundtrip_awfs(A, &b));
        return o;
      }
      Bundle bd = loader.bundle_file(file);
      auto res = roundtrip_lifting(bd.op, bd.fa.value_or(FactorisationAssignment{}), &b);
      o.report = std::move(res.report);
      return o;
    };
  });

  auto* bld = app.add_subcommand("build", "emit a stock input file");
  bld->require_subcommand(1);
  auto* bf = bld->add_subcommand("finset", "the category of finite sets {0..n}");
  bf->add_option("n", build_n, "largest set")->required()->check(CLI::Range(0, 4));
  bf->callback([&] {
    action = [&](BudgetTracker&) {
      cli::Outcome o;
      o.result = category_json(*build_finset(build_n).cat);
      return o;
    };
  });
  auto* bem = bld->add_subcommand("epi-mono", "the orthogonal (epi, mono) bundle on finite sets with image factorisation");
  bem->add_option("n", build_n, "largest set")->required()->check(CLI::Range(0, 3));
  bem->callback([&] {
    action = [&](BudgetTracker&) {
      FinSet S = build_finset(build_n);
      LiftingStructure op = unique_filler_lifting(dbl_from_class(S.cat, S.epi, "L"), dbl_from_class(S.cat, S.mono, "R"));
      FactorisationAssignment fa;
      for (Id f = 0; f < static_cast<Id>(S.cat->num_morphisms()); ++f)
        fa.push_back(*split_factorisation(op, f));
      cli::Outcome o;
      o.result = bundle_json(op, category_json(*S.cat), "epi", "mono", fa);
      return o;
    };
  });
  auto* bia = bld->add_subcommand("image-awfs", "the image factorisation awfs on finite sets");
  bia->add_option("n", build_n, "largest set")->required()->check(CLI::Range(0, 3));
  bia->callback([&] {
    action = [&](BudgetTracker&) {
      FinSet S = build_finset(build_n);
      cli::Outcome o;
      o.result = awfs_json(image_awfs(S), category_json(*S.cat));
      return o;
    };
  });

  auto* bcr = bld->add_subcommand("cat-roster", "a roster of split reflections and split fibrations over 1, 2 and 2/2");
  bcr->callback([&] {
    action = [&](BudgetTracker&) {
      StockRoster R = stock_roster();
      auto names = R.names();
      Json cats = Json::object();
      for (const auto& [n, c] : R.categories)
        cats[n] = category_json(*c);
      Json refl = Json::array(), fib = Json::array(), comp = Json::array();
      for (const auto& s : R.reflections)
        refl.push_back(reflection_json(s, names));
      for (const auto& s : R.fibrations)
        fib.push_back(fibration_json(s, names));
      for (const auto& [g, f] : R.composites)
        comp.push_back(Json::array({g, f}));
      cli::Outcome o;
      o.result = Json{{"categories", cats}, {"reflections", refl}, {"fibrations", fib}, {"composites", comp}};
      return o;
    };
  });

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "fwfs: " << e.what() << "\n";
    out << Json{{"error", e.what()}}.dump(2) << "\n";
    return kExitUsage;
  }

  try {
    BudgetTracker budget(cli::budget_from(max_candidates, max_seconds));
    cli::Outcome o = action(budget);
    o.report.budget_used = budget.used();
    const Status st = o.report.status();
    if (o.raw) {
      out << *o.raw;
    } else {
      Json j = o.report.checks.empty() && o.result ? *o.result : o.report.to_json();
      if (!o.report.checks.empty() && o.result)
        j["result"] = *o.result;
      out << j.dump(2) << "\n";
    }
    err << "fwfs: " << to_string(st) << " (" << o.report.checks.size() << " checks, " << o.report.total_violations() << " violations)\n";
    for (const auto& c : o.report.checks)
      if (!c.ok())
        err << "  " << to_string(c.status) << ": " << c.name << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
    return exit_code(st);
  } catch (const Error& e) {
    err << "fwfs: " << e.what() << "\n";
    out << Json{{"error", e.what()}}.dump(2) << "\n";
    return kExitUsage;
  }
}

} // namespace fwfs
