#include <fwfs/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

const std::string kData = FWFS_DATA_DIR;
const std::string kFixtures = FWFS_FIXTURE_DIR;

struct Result {
  int code;
  std::string out, err;
  fwfs::Json json() const { return fwfs::Json::parse(out); }
};

Result run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  int code = fwfs::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& f) { return kData + "/" + f; }
std::string fixture(const std::string& f) { return kFixtures + "/" + f; }

const fwfs::Json* check_named(const fwfs::Json& report, const std::string& name)
{
  for (const auto& c : report["checks"])
    if (c["name"] == name)
      return &c;
  return nullptr;
}

std::string slurp(const std::string& file)
{
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST(Cli, TerminalCategory)
{
  Result r = run({"check", "category", data("terminal.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["status"], "ok");
  EXPECT_NE(r.err.find("ok"), std::string::npos);
}

TEST(Cli, EpiMonoBundle)
{
  for (const char* side : {"both", "left", "right"}) {
    Result r = run({"check", "lifting-awfs", "--side", side, data("epi_mono_finset2.json")});
    EXPECT_EQ(r.code, 0) << side << r.err;
  }
}

TEST(Cli, DeletedRlpVertical)
{
  Result r = run({"check", "lifting-awfs", fixture("epi_mono_finset2_deleted.json")});
  EXPECT_EQ(r.code, 1);
  auto j = r.json();
  EXPECT_EQ(j["status"], "violation");
  const auto* c = check_named(j, "pre-awfs/phi_r/verticals-surjective");
  ASSERT_NE(c, nullptr);
  ASSERT_FALSE((*c)["witnesses"].empty());
  EXPECT_EQ((*c)["witnesses"][0]["over"], "0>1");
}

TEST(Cli, Determinism)
{
  for (std::vector<std::string> args : {std::vector<std::string>{"check", "lifting-awfs", data("epi_mono_finset2.json")},
                                        std::vector<std::string>{"check", "lifting-awfs", fixture("epi_mono_finset2_deleted.json")},
                                        std::vector<std::string>{"sem", data("image_awfs_finset2.json")}}) {
    Result a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
  EXPECT_EQ(run({"build", "finset", "2"}).out, slurp(data("finset2.json")));
  EXPECT_EQ(run({"build", "epi-mono", "2"}).out, slurp(data("epi_mono_finset2.json")));
}

TEST(Cli, ParseErrorsCiteFilePathAndKey)
{
  Result r = run({"check", "category", fixture("two_unknown_key.json")});
  EXPECT_EQ(r.code, 64);
  std::string msg = r.json()["error"];
  EXPECT_NE(msg.find("two_unknown_key.json"), std::string::npos);
  EXPECT_NE(msg.find("/arrows"), std::string::npos);

  Result o = run({"check", "category", fixture("two_unknown_object.json")});
  EXPECT_EQ(o.code, 64);
  std::string m2 = o.json()["error"];
  EXPECT_NE(m2.find("/morphisms/0/cod"), std::string::npos) << m2;

  EXPECT_EQ(run({"check", "category", fixture("no_such_file.json")}).code, 64);
}

TEST(Cli, UsageErrors)
{
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({"check", "lifting-awfs", "--side", "up", data("epi_mono_finset2.json")}).code, 64);
  EXPECT_EQ(run({"--max-candidates", "0", "check", "category", data("terminal.json")}).code, 64);
  EXPECT_EQ(run({"factorise", data("finset2.json"), "9>9"}).code, 64);
}

TEST(Cli, CategoryViolations)
{
  EXPECT_EQ(run({"check", "category", fixture("two_bad_unit.json")}).code, 1);
  EXPECT_EQ(run({"check", "category", fixture("two_missing_composite.json")}).code, 1);
  EXPECT_EQ(run({"check", "functor", data("id_two.json")}).code, 0);
  EXPECT_EQ(run({"check", "functor", fixture("point_bad.json")}).code, 1);
}

TEST(Cli, BudgetIsInconclusive)
{
  Result r = run({"--max-candidates", "3", "check", "pre-awfs", data("epi_mono_finset2.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.json()["status"], "inconclusive");
  ::setenv("FWFS_BUDGET", "3", 1);
  EXPECT_EQ(run({"check", "pre-awfs", data("epi_mono_finset2.json")}).code, 2);
  EXPECT_EQ(run({"--max-candidates", "100000000", "check", "pre-awfs", data("epi_mono_finset2.json")}).code, 0);
  ::unsetenv("FWFS_BUDGET");
  EXPECT_EQ(run({"check", "pre-awfs", data("epi_mono_finset2.json")}).code, 0);
}

TEST(Cli, Factorise)
{
  auto j = run({"factorise", data("finset2.json"), "2>2:00"}).json()["result"];
  EXPECT_EQ(j["mid"], "1");
  EXPECT_EQ(j["left"], "2>1:00");
  EXPECT_EQ(j["right"], "1>2:0");
  j = run({"factorise", data("finset2.json"), "2>2:01"}).json()["result"];
  EXPECT_EQ(j["left"], "2>2:01");
  EXPECT_EQ(j["mid"], "2");
  EXPECT_EQ(j["right"], "2>2:01");
  j = run({"factorise", data("finset2.json"), "2>2:10"}).json()["result"];
  EXPECT_EQ(j["left"], "2>2:10");
  EXPECT_EQ(j["right"], "2>2:01");
  j = run({"factorise", "--bundle", data("epi_mono_finset2.json"), "1>2:1"}).json()["result"];
  EXPECT_EQ(j["left"], "1>1:0");
  EXPECT_EQ(j["right"], "1>2:1");
}

TEST(Cli, Fillers)
{
  Result r = run({"fillers", data("finset2.json"), "2>1:00", "1>2:0", "2>1:00", "1>2:0"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("1>1:0"), std::string::npos);
}

TEST(Cli, CommaAndCatFill)
{
  EXPECT_EQ(run({"comma", "--functor", data("id_two.json")}).code, 0);
  Result d = run({"comma", "--functor", data("point_one.json"), "--dot"});
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out.rfind("digraph", 0), 0u);
  Result f = run({"cat-fill", "--square", data("cat_square.json")});
  EXPECT_EQ(f.code, 0) << f.err;
  EXPECT_GE(f.json()["result"]["fillers"].get<int>(), 1);
  EXPECT_EQ(run({"check", "cat-roster", data("cat_roster.json")}).code, 0);
}

TEST(Cli, AwfsCommands)
{
  EXPECT_EQ(run({"check", "awfs", data("image_awfs_finset2.json")}).code, 0);
  EXPECT_EQ(run({"sem", data("image_awfs_finset2.json")}).code, 0);
  EXPECT_EQ(run({"reconstruct", data("epi_mono_finset2.json")}).code, 0);
  EXPECT_EQ(run({"roundtrip", data("epi_mono_finset2.json")}).code, 0);
  EXPECT_EQ(run({"roundtrip", data("image_awfs_finset2.json")}).code, 0);
}

TEST(Cli, CorruptedComultiplication)
{
  auto j = fwfs::Json::parse(slurp(data("image_awfs_finset2.json")));
  ASSERT_EQ(j["delta"]["2>2:10"], "2>2:01");
  j["delta"]["2>2:10"] = "2>2:10";
  auto path = std::filesystem::temp_directory_path() / "fwfs_bad_delta.json";
  std::ofstream(path) << j.dump(2);
  Result r = run({"check", "awfs", path.string()});
  EXPECT_EQ(r.code, 1);
  bool comonad = false;
  const auto report = r.json();
  for (const auto& c : report["checks"])
    comonad = comonad || (c["status"] == "violation" && c["name"].get<std::string>().rfind("comonad/", 0) == 0);
  EXPECT_TRUE(comonad);
  std::filesystem::remove(path);
}
