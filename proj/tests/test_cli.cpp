#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "sll/json_io.hpp"
#include "sll/sll.hpp"

using namespace sll;
using json_io::json;

namespace {

struct Run {
  int code = -1;
  json out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SLL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  std::string text;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) text.append(buf.data(), n);
  const int status = pclose(pipe);
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = json::parse(text, nullptr, false);
  return r;
}

std::string data(const std::string& name) { return std::string(SLL_DATA_DIR) + "/" + name; }

}  // namespace

TEST(Cli, WittAdd) {
  const auto r = run("witt add 1 1 --p 2 --n 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["digits"], json::parse("[0,1]"));
  EXPECT_EQ(r.out["valuation"], 1);
}

TEST(Cli, WittFrobeniusOnElementObjects) {
  const auto r = run("witt frob '{\"p\":3,\"m\":2,\"n\":2,\"coeffs\":[0,1]}' --power 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["element"]["coeffs"], json::parse("[0,1]"));
}

TEST(Cli, DieudonneInvariants) {
  const auto r = run("dieudonne invariants --fixture ordinary");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, json::parse(R"({"a_number":0,"p_rank":2,"kernel_type":"NotSuperspecial"})"));
  const auto s = run("dieudonne invariants --fixture iib --p 5 --n 2");
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(s.out["a_number"], 2);
  EXPECT_EQ(s.out["p_rank"], 0);
  EXPECT_EQ(s.out["kernel_type"], "AlphaSquare");
}

TEST(Cli, DieudonneDualAndSearch) {
  const auto d = run("dieudonne dual --fixture iia");
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(d.out["contract_verified"], true);
  const auto w = run("dieudonne lagrangian-search --fixture lagrangian_generic --n 2");
  ASSERT_EQ(w.code, 0);
  EXPECT_EQ(w.out["found"], true);
  EXPECT_EQ(w.out["witness"]["verified"], true);
}

TEST(Cli, DeformIib) {
  const auto r = run("deform --fixture iib");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["relation"], "p + t11*t22 - t12*t21");
  EXPECT_EQ(r.out["class"], "OrdinaryDoublePoint");
  EXPECT_EQ(r.out["a_prime_valuation"], 1);
}

TEST(Cli, DeformLagrangian) {
  const auto r = run("deform --fixture lagrangian_generic --p 5 --n 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["relation"], "p*t12 - t21");
  EXPECT_EQ(r.out["class"], "Smooth");
}

TEST(Cli, DeformFromFile) {
  const auto r = run("deform --file " + data("iib_module.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["relation"], "p + t11*t22 - t12*t21");
}

TEST(Cli, LocalModelPoints) {
  const auto r = run("local-model points --q 2");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["count"], enumerate_special_fiber(2).size());
  const auto t = run("local-model tangents --q 3");
  ASSERT_EQ(t.code, 0);
  ASSERT_EQ(t.out["singular_points"].size(), 1u);
  EXPECT_EQ(t.out["singular_points"][0], json_io::plane_to_json(distinguished_point(field_of_order(3))));
  const auto c = run("local-model chart --q 4 --n 2");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(c.out["relation"], "p + t11*t22 - t12*t21");
  EXPECT_EQ(c.out["relation_mod_p"], "t11*t22 + t12*t21");
  EXPECT_EQ(c.out["class"], "OrdinaryDoublePoint");
}

TEST(Cli, SeriesReduceJson) {
  const auto r = run("series-reduce " + data("quadric.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["class"], "OrdinaryDoublePoint");
  EXPECT_EQ(r.out["certificate_verified"], true);
  EXPECT_EQ(r.out["normal_form"]["a_prime_valuation"], 1);
}

TEST(Cli, SeriesReduceText) {
  const auto r = run("series-reduce " + data("perturbed.txt") + " --p 3 --n 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["class"], "OrdinaryDoublePoint");
  EXPECT_EQ(r.out["certificate_verified"], true);
  EXPECT_EQ(r.out["input"]["nvars"], 4);
}

TEST(Cli, SeriesReduceSmooth) {
  const auto r = run("series-reduce " + data("smooth.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out["class"], "Smooth");
  EXPECT_FALSE(r.out.contains("normal_form"));
}

TEST(Cli, StrictModeRejectsLinearTermsOfValuationOne) {
  const auto relaxed = run("series-reduce " + data("linear.txt") + " --p 3 --n 3");
  ASSERT_EQ(relaxed.code, 0);
  EXPECT_EQ(relaxed.out["certificate_verified"], true);
  const auto strict = run("series-reduce " + data("linear.txt") + " --p 3 --n 3 --strict");
  EXPECT_EQ(strict.code, 2);
  EXPECT_EQ(strict.out["error"]["kind"], "validation");
}

TEST(Cli, EmittedJsonRoundTrips) {
  const auto r = run("series-reduce " + data("quadric.json"));
  ASSERT_EQ(r.code, 0);
  const auto f = json_io::series_from_json(r.out["input"]);
  const auto nf = json_io::normal_form_from_json(r.out["normal_form"]);
  EXPECT_TRUE(verify_certificate(f, nf));
  const auto d = run("deform --fixture iib --p 2 --n 3");
  ASSERT_EQ(d.code, 0);
  EXPECT_EQ(json_io::series_from_json(d.out["relation_series"]).to_string(), d.out["relation"]);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("witt add 1 --p 2").code, 2);
  EXPECT_EQ(run("witt add 1 1 --p 4").code, 2);
  EXPECT_EQ(run("dieudonne invariants --fixture nosuch").code, 2);
  EXPECT_EQ(run("deform --fixture iib --frame 0,1").code, 2);
  EXPECT_EQ(run("local-model points --q 6").code, 2);
  const auto missing = run("series-reduce /nonexistent/file.json");
  EXPECT_EQ(missing.code, 3);
  EXPECT_EQ(missing.out["error"]["kind"], "io");
}

TEST(Cli, SelfcheckIsDeterministic) {
  const auto a = run("selfcheck --seed 7 --trials 5");
  const auto b = run("selfcheck --seed 7 --trials 5");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out["failures"], 0);
}
