#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gatcwf/presentation.hpp"

using namespace gatcwf::presentation;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(fs::path(GATCWF_SOURCE_DIR) / "data" / name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> op_names(const Presentation& p) {
  std::vector<std::string> out;
  for (const Decl& d : p.decls) {
    if (const auto* op = std::get_if<OpDecl>(&d.item)) out.push_back(op->name);
  }
  return out;
}

bool has(const std::vector<std::string>& names, const std::string& n) {
  return std::find(names.begin(), names.end(), n) != names.end();
}

Verdict last_verdict(const std::string& text) {
  CheckReport r = check_presentation(parse(text));
  return r.decls.back().verdict;
}

}  // namespace

TEST(PresentationCheck, ShippedPresentationsAreWellFormed) {
  for (const char* f : {"sigma-cwf.gat", "sigma-tower-3.gat", "sigma-tower-3-cumulative.gat", "sigma-up.gat"}) {
    CheckReport r = check_presentation(parse(slurp(f)));
    EXPECT_TRUE(r.all_ok()) << f;
    for (const auto& d : r.decls) EXPECT_EQ(d.verdict, Verdict::Ok) << f << ": " << d.name << ": " << d.message;
  }
}

TEST(PresentationCheck, IllSortedEquationIsRejected) {
  std::string cwf = slurp("sigma-cwf.gat");
  EXPECT_EQ(last_verdict(cwf + "eq [bad] (G : ctx) id(G) = empty(G) : hom(G, G);\n"), Verdict::SortMismatch);
  EXPECT_EQ(last_verdict(cwf + "eq [ok] (G : ctx) comp(G, G, G, id(G), id(G)) = id(G) : hom(G, G);\n"),
            Verdict::Ok);
}

TEST(PresentationCheck, ScopeArityAndNames) {
  std::string cwf = slurp("sigma-cwf.gat");
  EXPECT_EQ(last_verdict(cwf + "eq [u] (G : ctx) id(H) = id(G) : hom(G, G);\n"), Verdict::UnscopedVariable);
  EXPECT_EQ(last_verdict(cwf + "eq [a] (G : ctx) id(G, G) = id(G) : hom(G, G);\n"), Verdict::ArityMismatch);
  EXPECT_EQ(last_verdict(cwf + "op id (G : ctx) : hom(G, G);\n"), Verdict::DuplicateName);
}

TEST(PresentationCheck, ExhaustedFuelIsUnknown) {
  CheckReport r = check_presentation(parse(slurp("sigma-tower-3.gat")), 0);
  EXPECT_TRUE(r.any_unknown());
  EXPECT_FALSE(r.all_ok());
}

TEST(PresentationTower, OneUniverse) {
  auto names = op_names(truncate_tower(1));
  EXPECT_TRUE(has(names, "U_0"));
  EXPECT_TRUE(has(names, "pi_0_0"));
  for (const auto& n : names) EXPECT_EQ(n.rfind("ucode", 0), std::string::npos) << n;
}

TEST(PresentationTower, TwoUniverses) {
  auto names = op_names(truncate_tower(2));
  EXPECT_TRUE(has(names, "ucode_0_1"));
  EXPECT_FALSE(has(names, "ucode_1_2"));
  std::size_t codes = 0;
  for (const auto& n : names) codes += n.rfind("pi_", 0) == 0;
  EXPECT_EQ(codes, 4u);
  EXPECT_FALSE(has(names, "lift_0_1"));
  EXPECT_TRUE(has(op_names(truncate_tower(2, true)), "lift_0_1"));
}

TEST(PresentationTower, TruncationsArePrefixes) {
  for (bool cumulative : {false, true}) {
    std::vector<Presentation> chain;
    for (std::uint32_t n = 1; n <= 4; ++n) chain.push_back(truncate_tower(n, cumulative));
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const auto& small = chain[i].decls;
      const auto& big = chain[i + 1].decls;
      ASSERT_LT(small.size(), big.size());
      EXPECT_TRUE(std::equal(small.begin(), small.end(), big.begin())) << "n = " << i + 1;
    }
    for (const auto& p : chain) EXPECT_TRUE(check_presentation(p).all_ok());
  }
}

TEST(PresentationTower, ShippedFilesMatchGenerator) {
  EXPECT_EQ(slurp("sigma-tower-3.gat"), print(truncate_tower(3)));
  EXPECT_EQ(slurp("sigma-tower-3-cumulative.gat"), print(truncate_tower(3, true)));
}

TEST(PresentationCrossCheck, AgreesWithKernel) {
  for (const char* f : {"sigma-up.gat", "sigma-tower-3.gat", "sigma-tower-3-cumulative.gat", "sigma-cwf.gat"}) {
    auto issues = cross_check(parse(slurp(f)));
    EXPECT_TRUE(issues.empty()) << f << ": " << (issues.empty() ? "" : issues.front());
  }
}

TEST(PresentationCrossCheck, DetectsMissingRule) {
  Presentation p = parse(slurp("sigma-up.gat"));
  auto it = std::find_if(p.decls.begin(), p.decls.end(), [](const Decl& d) {
    const auto* eq = std::get_if<EqDecl>(&d.item);
    return eq && eq->name == "lbeta";
  });
  ASSERT_NE(it, p.decls.end());
  p.decls.erase(it);
  EXPECT_FALSE(cross_check(p).empty());
}

TEST(PresentationRun, ExitCodes) {
  std::ostringstream out, err;
  fs::path data = fs::path(GATCWF_SOURCE_DIR) / "data";
  EXPECT_EQ(run({(data / "sigma-cwf.gat").string()}, 10000, false, false, out, err), 0);
  EXPECT_NE(out.str().find("id-ext: OK"), std::string::npos);
  EXPECT_EQ(run({(data / "no-such-file.gat").string()}, 10000, false, false, out, err), 3);
}
