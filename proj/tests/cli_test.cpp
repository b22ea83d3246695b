#include "mhd/pipeline.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace mhd::io {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status;
  std::string out;
};

CliRun run(const std::string& args) {
  std::string cmd = std::string(MHD_BINARY) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) out += buf.data();
  int st = pclose(pipe);
  return {WEXITSTATUS(st), out};
}

std::string line_after(const std::string& text, const std::string& key) {
  auto pos = text.find(key);
  if (pos == std::string::npos) return {};
  auto end = text.find('\n', pos);
  return text.substr(pos + key.size(), end - pos - key.size());
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mhd_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(TempDir, VerifyBuiltins) {
  CliRun r = run("verify builtin:kg-s3");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("PASS hopf.T1 bijective"), std::string::npos);
  CliRun z = run("verify builtin:kg-integers --window=-5..5");
  EXPECT_EQ(z.status, 0) << z.out;
  EXPECT_EQ(line_after(z.out, "window:"), " -5 -4 -3 -2 -1 0 1 2 3 4 5");
}

TEST_F(TempDir, StructuredReportMatchesText) {
  CliRun r = run("verify builtin:group-algebra-s3 --format structured --report " + path("r.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  json j = read_json_file(path("r.json"));
  CliRun t = run("verify builtin:group-algebra-s3");
  EXPECT_EQ(j.at("digest").get<std::string>(), line_after(t.out, "report digest: "));
  EXPECT_TRUE(j.at("passed").get<bool>());
}

TEST_F(TempDir, BrokenCoassociativityFailsWithWitness) {
  json doc = builtin("kg-z2").doc;
  for (auto& c : doc["coproducts"]) {
    if (c["p"] == "e" && c["q"] == "g") c["matrix"]["entries"][0][2] = "2";
  }
  save_json(path("broken.json"), doc);
  CliRun r = run("verify " + path("broken.json"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL hopf.coassociativity"), std::string::npos) << r.out;
  // (Delta_{e,e} (x) id)Delta_{e,g} = 2 while (id (x) Delta_{e,g})Delta_{e,g} = 4.
  EXPECT_NE(r.out.find("witness: (e, e, g)"), std::string::npos) << r.out;
}

TEST_F(TempDir, ParseErrorsNameTheSection) {
  json doc = builtin("kg-z2").doc;
  doc["antipode"][1]["matrix"]["rows"] = 2;
  save_json(path("bad.json"), doc);
  CliRun r = run("verify " + path("bad.json"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("antipode[1]"), std::string::npos) << r.out;
}

TEST_F(TempDir, DoubleRoundTripReproducesDigest) {
  CliRun d = run("double --pair builtin:pairing-gacs3 --action adjoint --out " + path("d.json"));
  ASSERT_EQ(d.status, 0) << d.out;
  std::string exported = line_after(d.out, "exported verify: pass, report digest ");
  ASSERT_FALSE(exported.empty());
  CliRun v = run("verify " + path("d.json"));
  ASSERT_EQ(v.status, 0) << v.out;
  EXPECT_EQ(line_after(v.out, "report digest: "), exported);
  // Reload and re-export is byte-stable.
  Loaded x = load_source(path("d.json"));
  save_json(path("d2.json"), x.doc);
  std::ifstream a(path("d.json"));
  std::ifstream b(path("d2.json"));
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
}

TEST_F(TempDir, TrivialDoubleExportIsClassical) {
  CliRun d = run("double --pair builtin:pairing-gacs3 --action trivial --out " + path("d.json"));
  ASSERT_EQ(d.status, 0) << d.out;
  json doc = read_json_file(path("d.json"));
  EXPECT_EQ(doc.at("components").size(), 1u);
  EXPECT_EQ(doc.at("components")[0].at("dim").get<std::size_t>(), 36u);
  // 36 x 36 basis products, each a single basis vector or zero: 36 * 6 nonzero.
  ASSERT_EQ(doc.at("products").size(), 1u);
  EXPECT_EQ(doc.at("products")[0].at("matrix").at("entries").size(), 216u);
}

TEST_F(TempDir, NonAdmissibleActionAborts) {
  // rho_g swaps (12) and (13) on K(S3) while every pi is the identity.
  json act = {{"name", "swap"}};
  Group s3 = Group::symmetric3();
  json rho = json::array();
  for (Elem p : s3.elements()) {
    json row = json::array();
    for (Elem q : s3.elements()) {
      Elem t = q;
      if (p != 0 && (q == 1 || q == 2)) t = q == 1 ? 2 : 1;
      row.push_back(s3.name(t));
    }
    rho.push_back(row);
  }
  act["rho"] = {{"table", rho}};
  act["maps"] = json::array();
  for (Elem p : s3.elements()) {
    for (Elem q : s3.elements()) act["maps"].push_back({{"p", s3.name(p)}, {"q", s3.name(q)}, {"matrix", {{"1"}}}});
  }
  save_json(path("act.json"), act);
  CliRun d = run("double --pair builtin:pairing-gacs3 --action " + path("act.json") + " --out " + path("d.json"));
  EXPECT_EQ(d.status, 1);
  EXPECT_NE(d.out.find("aborted before construction"), std::string::npos) << d.out;
  EXPECT_FALSE(fs::exists(path("d.json")));
}

TEST_F(TempDir, DualOfFunctionsIsGroupAlgebraShaped) {
  CliRun d = run("dual builtin:kg-s3 --out " + path("dual.json"));
  ASSERT_EQ(d.status, 0) << d.out;
  Loaded x = load_source(path("dual.json"));
  EXPECT_EQ(x.structure.mode(), Mode::Graded);
  EXPECT_EQ(line_after(d.out, "spec digest: "), spec_digest(x));
  // Same structure constants as the group algebra.
  Loaded ga = builtin("group-algebra-s3");
  EXPECT_EQ(x.doc.at("products"), ga.doc.at("products"));
  EXPECT_EQ(x.doc.at("coproducts"), ga.doc.at("coproducts"));
  EXPECT_EQ(run("verify " + path("dual.json")).status, 0);
}

TEST_F(TempDir, DualOfDualMatchesOriginal) {
  // The evaluation forms are identities, so biduality is coefficientwise.
  Loaded fam = builtin("constant-cz2-s3");
  Loaded once = dual_spec(fam);
  Loaded twice = dual_spec(once);
  for (const char* key : {"products", "coproducts", "counit", "antipode", "components"}) {
    EXPECT_EQ(twice.doc.at(key), fam.doc.at(key)) << key;
  }
  EXPECT_EQ(once.doc.at("components")[0].at("dim").get<std::size_t>(), 2u);
}

}  // namespace
}  // namespace mhd::io
