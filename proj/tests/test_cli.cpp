#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "gorlab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gorlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) {
    const auto err_path = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" GORLAB_CLI_PATH "' " + args + " 2>'" + err_path.string() + "'";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.err = slurp(err_path);
    return r;
  }

  std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void put(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RingRoundTrip) {
  auto r = run("ring new --p 7 --e 4 --form hyperbolic");
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["p"], 7);
  EXPECT_EQ(j["form"][0], json({0, 1, 0, 0}));
  EXPECT_EQ(r.out, gorlab::canonical_dump(j));
  put("r.json", r.out);
  auto c = run("ring check r.json");
  ASSERT_EQ(c.status, 0) << c.err;
  EXPECT_EQ(json::parse(c.out)["dim"], 6);
}

TEST_F(CliTest, DegenerateFormIsValidationError) {
  put("bad.json", R"({"p": 101, "e": 2, "form": [[1, 0], [0, 0]]})");
  auto r = run("ring check bad.json");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("Degenerate"), std::string::npos) << r.err;
}

TEST_F(CliTest, SchemaErrorNamesPointer) {
  put("r.json", R"({"p": 101, "e": 2, "form": [[1, 0], [0, "x"]]})");
  auto r = run("ring check r.json");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("/form/1/1"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingFileAndBadUsage) {
  EXPECT_EQ(run("module info nowhere.json").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("verify lofwall --cutoff 5").status, 2);
  EXPECT_EQ(run("verify nonsense").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(CliTest, ModuleFilesAndInfo) {
  ASSERT_EQ(run("ring new --out r.json").status, 0);
  ASSERT_EQ(run("module new --ring r.json --ideal '[[0,1,0,0,0]]' --out c.json").status, 0);
  auto f = json::parse(slurp(dir_ / "c.json"));
  EXPECT_EQ(f["ring"], "r.json");
  auto info = run("module info c.json");
  ASSERT_EQ(info.status, 0) << info.err;
  auto j = json::parse(info.out);
  EXPECT_EQ(j["dim"], 3);
  EXPECT_EQ(j["hilbert"], json({1, 2}));
  EXPECT_EQ(j["nu"], 1);
  auto bad = run("module new --ring r.json --ideal '[[1,0,0,0,0]]'");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.err.find("UnitIdeal"), std::string::npos);
}

TEST_F(CliTest, RandomModuleIsSeeded) {
  ASSERT_EQ(run("ring new --out r.json").status, 0);
  auto a = run("module random --ring r.json --generators 2 --relations 2 --seed 9");
  auto b = run("module random --ring r.json --generators 2 --relations 2 --seed 9");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  put("m.json", a.out);
  EXPECT_EQ(run("module info m.json").status, 0);
}

TEST_F(CliTest, ResolveResidueField) {
  ASSERT_EQ(run("ring new --e 2 --out r.json").status, 0);
  ASSERT_EQ(run("module new --ring r.json --residue-field --out k.json").status, 0);
  auto r = run("resolve k.json --steps 4");
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["betti"], json({1, 2, 3, 4, 5}));
  EXPECT_EQ(j["differentials"].size(), 4u);
  EXPECT_EQ(json::parse(run("resolve k.json --steps 4 --betti-only").out)["differentials"].size(), 0u);
}

TEST_F(CliTest, TorTableWithInducedRanks) {
  ASSERT_EQ(run("ring new --out r.json").status, 0);
  ASSERT_EQ(run("module new --ring r.json --residue-field --out k.json").status, 0);
  ASSERT_EQ(run("module new --ring r.json --ideal '[[0,1,0,0,0]]' --out c.json").status, 0);
  auto r = run("tor --m c.json --n-mod k.json --range 1..3 --induced");
  ASSERT_EQ(r.status, 0) << r.err;
  auto rows = json::parse(r.out)["degrees"];
  ASSERT_EQ(rows.size(), 3u);
  for (auto& row : rows) {
    EXPECT_EQ(row["induced_rank"], 0);
    EXPECT_EQ(row["length"], row["nu"]);
  }
  EXPECT_EQ(run("tor --m c.json --n-mod k.json --range 3..1").status, 2);
  EXPECT_EQ(run("ext --m c.json --n-mod k.json --range x").status, 2);
}

TEST_F(CliTest, SeriesCertificateAndMargin) {
  ASSERT_EQ(run("ring new --out r.json").status, 0);
  ASSERT_EQ(run("module new --ring r.json --residue-field --out k.json").status, 0);
  auto r = run("series poincare --module k.json --steps 6 --certify");
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["coefficients"], json({1, 3, 8, 21, 55, 144, 377}));
  EXPECT_EQ(j["certificate"]["numerator"], json({1}));
  auto tight = run("series poincare --module k.json --steps 5 --certify --margin 6");
  EXPECT_EQ(tight.status, 1);
  EXPECT_TRUE(json::parse(tight.out)["certificate"].is_null());
  EXPECT_EQ(run("series tor-nu --module k.json --steps 5").status, 2);
}

TEST_F(CliTest, KoszulVerdict) {
  ASSERT_EQ(run("ring new --out r.json").status, 0);
  ASSERT_EQ(run("module new --ring r.json --free 1 --out f.json").status, 0);
  auto j = json::parse(run("koszul f.json").out);
  EXPECT_EQ(j["verdict"], "koszul");
  EXPECT_TRUE(j["witness"].is_null());
}

TEST_F(CliTest, VerifyExitCodesAndReproducer) {
  auto ok = run("verify counterexample-e2 --e 2 --trials 2");
  EXPECT_EQ(ok.status, 0) << ok.err;
  EXPECT_TRUE(json::parse(ok.out)["pass"].get<bool>());
  auto bad = run("verify lofwall --trials 2 --max-entries 1000");
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.err.find("reproducer"), std::string::npos);
  EXPECT_FALSE(json::parse(bad.out)["pass"].get<bool>());
}

TEST_F(CliTest, VerifyOutputIsByteStable) {
  auto a = run("verify counterexample-e2 --e 2 --trials 3 --seed 4");
  auto b = run("verify counterexample-e2 --e 2 --trials 3 --seed 4 --out v.json");
  ASSERT_EQ(b.status, 0);
  EXPECT_EQ(a.out, slurp(dir_ / "v.json"));
  auto t = json::parse(run("verify counterexample-e2 --e 2 --trials 1 --timing").out);
  EXPECT_TRUE(t["elapsed_ms"].is_number_integer());
  EXPECT_TRUE(json::parse(a.out)["elapsed_ms"].is_null());
}

TEST_F(CliTest, PrettyView) {
  ASSERT_EQ(run("ring new --out r.json").status, 0);
  ASSERT_EQ(run("module new --ring r.json --residue-field --out k.json").status, 0);
  auto r = run("tor --m k.json --n-mod k.json --range 0..2 --pretty");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("m_annihilated"), std::string::npos);
  EXPECT_EQ(r.out.find('{'), std::string::npos);
}
