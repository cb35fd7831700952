#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gatcwf/presentation.hpp"
#include "gatcwf/syntax.hpp"

using namespace gatcwf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_expr(const Expr& a, const Expr& b) {
  if (!a || !b) return !a && !b;
  return equal(a, b);
}

bool same_sort(const std::optional<Sort>& a, const std::optional<Sort>& b) {
  if (!a || !b) return !a && !b;
  return a->kind == b->kind && same_expr(a->ctx, b->ctx) && same_expr(a->tgt, b->tgt) &&
         same_expr(a->type, b->type);
}

bool same_decl(const Decl& a, const Decl& b) {
  return a.kind == b.kind && a.name == b.name && a.level_ctx == b.level_ctx && same_expr(a.lhs, b.lhs) &&
         same_expr(a.rhs, b.rhs) && same_sort(a.sort, b.sort);
}

Mode mode_of(const fs::path& p) {
  std::string s = p.filename().string();
  return s.find("up") != std::string::npos || s.find("poly") != std::string::npos ? Mode::Up : Mode::Tower;
}

// Random well-scoped raw expressions. Elided annotations are used as often
// as explicit ones so both printer paths are exercised.
class RandomExpr {
 public:
  RandomExpr(Mode mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

  Expr gen(int depth) {
    if (depth <= 0) return leaf();
    std::vector<Kind> kinds = {Kind::Ext,  Kind::Id,   Kind::Comp,  Kind::Empty, Kind::Pair,        Kind::P,
                               Kind::Pi,   Kind::Univ, Kind::El,    Kind::Q,     Kind::Lam,         Kind::App,
                               Kind::PiCode, Kind::PiCodeCumul, Kind::UCode, Kind::Lift, Kind::Subst};
    if (mode_ == Mode::Up) {
      for (Kind k : {Kind::Forall, Kind::LLam, Kind::LApp, Kind::LSubst}) kinds.push_back(k);
    }
    Kind k = kinds[pick(kinds.size())];
    int d = depth - 1;
    switch (k) {
      case Kind::Ext: return ext(gen(d), gen(d));
      case Kind::Id: return id(opt(d));
      case Kind::Comp: return comp(gen(d), gen(d));
      case Kind::Empty: return empty(opt(d));
      case Kind::Pair: return pair(gen(d), gen(d), opt(d));
      case Kind::P:
      case Kind::Q: {
        Expr g, a;
        if (coin()) {
          g = gen(d);
          a = gen(d);
        }
        return k == Kind::P ? proj(g, a) : var(g, a);
      }
      case Kind::Pi: return pi(gen(d), gen(d));
      case Kind::Univ: return univ(level(), opt(d));
      case Kind::El: return el(level(), gen(d));
      case Kind::Lam: return lam(gen(d));
      case Kind::App: return app(gen(d), gen(d));
      case Kind::PiCode: return pi_code(level(), level(), gen(d), gen(d));
      case Kind::PiCodeCumul: return pi_code_cumul(level(), gen(d), gen(d));
      case Kind::UCode: return ucode(level(), level(), opt(d));
      case Kind::Lift: return lift(level(), level(), gen(d));
      case Kind::Subst: return subst(gen(d), gen(d));
      case Kind::Forall: return forall(gen(d), opt(d));
      case Kind::LLam: return llam(gen(d), opt(d));
      case Kind::LApp: return lapp(gen(d), level());
      case Kind::LSubst: return lsubst_raw(gen(d), lsubst(2));
      default: return leaf();
    }
  }

 private:
  Expr leaf() {
    switch (pick(3)) {
      case 0: return unit(std::nullopt);
      case 1: return ref(std::string(1, static_cast<char>('A' + pick(6))) + (coin() ? "x" : ""));
      default: return coin() ? proj(nullptr, nullptr) : var(nullptr, nullptr);
    }
  }

  Expr opt(int depth) { return coin() ? gen(depth) : nullptr; }

  levels::LevelTerm level_term(int depth) {
    switch (depth > 0 ? pick(3) : 0) {
      case 1: return levels::next(level_term(depth - 1));
      case 2: return levels::join(level_term(depth - 1), level_term(depth - 1));
      default: return levels::var(static_cast<std::uint32_t>(pick(3)));
    }
  }

  UIdx level() {
    if (mode_ == Mode::Tower) return UIdx(static_cast<std::uint32_t>(pick(4)));
    return UIdx(level_term(2));
  }

  LSubstExprPtr lsubst(int depth) {
    using K = LSubstExpr::Kind;
    auto mk = [](LSubstExpr s) { return std::make_shared<const LSubstExpr>(std::move(s)); };
    switch (depth > 0 ? pick(6) : pick(3)) {
      case 0: return mk({K::Id, nullptr, nullptr, {}});
      case 1: return mk({K::P, nullptr, nullptr, {}});
      case 2: return mk({K::Empty, nullptr, nullptr, {}});
      case 3: return mk({K::Pair, lsubst(depth - 1), nullptr, {level_term(1)}});
      case 4: return mk({K::Comp, lsubst(depth - 1), lsubst(depth - 1), {}});
      default: {
        std::vector<levels::LevelTerm> entries;
        std::size_t n = 1 + pick(3);
        for (std::size_t i = 0; i < n; ++i) entries.push_back(level_term(1));
        return mk({K::Tuple, nullptr, nullptr, entries});
      }
    }
  }

  std::size_t pick(std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng_); }
  bool coin() { return pick(2) == 0; }

  Mode mode_;
  std::mt19937_64 rng_;
};

}  // namespace

TEST(SyntaxParse, Examples) {
  Expr e = parse_expr("1 . U(a0)", Mode::Up);
  EXPECT_TRUE(equal(e, ext(unit(std::nullopt), univ(UIdx(levels::var(0)), nullptr))));
  Expr l = parse_expr("lam(q)", Mode::Tower);
  ASSERT_EQ(l->kind, Kind::Lam);
  EXPECT_EQ(l->args[0]->kind, Kind::Q);
}

TEST(SyntaxParse, ErrorsCarryPositions) {
  try {
    parse("check lam( : ty(1);", Mode::Tower);
    FAIL() << "expected a parse error";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.pos().line, 1);
    EXPECT_EQ(err.pos().column, 12);
  }
  EXPECT_THROW(parse_expr("lam(", Mode::Tower), ParseError);
  EXPECT_THROW(parse_expr("U(0) ]", Mode::Tower), ParseError);
}

TEST(SyntaxParse, VariableSugar) {
  Expr e = parse_expr("v(2)", Mode::Tower);
  EXPECT_TRUE(equal(e, subst(var(nullptr, nullptr), comp(proj(nullptr, nullptr), proj(nullptr, nullptr)))));
  EXPECT_TRUE(equal(parse_expr("v(0)", Mode::Tower), var(nullptr, nullptr)));
}

TEST(SyntaxParse, DeclarationForms) {
  auto decls = parse(
      "postulate ctx G;\n"
      "postulate ty A in G;\n"
      "postulate tm a : A in G;\n"
      "postulate hom g : G -> G;\n"
      "def x := a[g];\n"
      "check x : tm(G, A[g]);\n"
      "check-eq [beta-1] x = a[g] : tm(G, A[g]);\n",
      Mode::Tower);
  ASSERT_EQ(decls.size(), 7u);
  EXPECT_EQ(decls[0].kind, Decl::Kind::PostulateCtx);
  EXPECT_EQ(decls[3].kind, Decl::Kind::PostulateHom);
  EXPECT_EQ(decls[6].kind, Decl::Kind::CheckEq);
  EXPECT_EQ(decls[6].name, "beta-1");
  EXPECT_EQ(decls[6].pos.line, 7);
}

TEST(SyntaxPrint, Examples) {
  EXPECT_EQ(print(pair(id(ref("G")), ref("a"), nullptr)), "< id(G), a >");
  EXPECT_EQ(print(univ(UIdx(levels::join(levels::var(0), levels::next(levels::var(1)))), nullptr)),
            "U(a0 \\/ a1^+)");
  EXPECT_EQ(print(comp(comp(ref("g"), ref("d")), ref("x"))), "g o d o x");
  EXPECT_EQ(print(comp(ref("g"), comp(ref("d"), ref("x")))), "g o (d o x)");
}

TEST(SyntaxModes, TowerRejectsPolymorphicConstructs) {
  for (const char* s : {"forall(U(0))", "llam(q)", "lapp(q, 0)", "A[@lid]", "U(a0)"}) {
    EXPECT_THROW(parse_expr(s, Mode::Tower), std::runtime_error) << s;
  }
  EXPECT_THROW(parse("level-ctx 1;", Mode::Tower), std::runtime_error);
}

TEST(SyntaxModes, UpRejectsNumericLevels) {
  for (const char* s : {"U(0)", "El(1, q)", "pi{0,1}(q, q)", "ucode{0,1}", "lapp(q, 0)"}) {
    EXPECT_THROW(parse_expr(s, Mode::Up), ParseError) << s;
  }
}

TEST(SyntaxRoundTrip, RandomExpressions) {
  for (Mode mode : {Mode::Tower, Mode::Up}) {
    RandomExpr gen(mode, mode == Mode::Tower ? 1 : 2);
    for (int i = 0; i < 2000; ++i) {
      Expr e = gen.gen(1 + i % 5);
      std::string text = print(e);
      Expr back = parse_expr(text, mode);
      ASSERT_TRUE(equal(e, back)) << text << "  reparsed as  " << print(back);
      EXPECT_EQ(print(back), text);
    }
  }
}

TEST(SyntaxRoundTrip, ShippedKernelFiles) {
  fs::path root = fs::path(GATCWF_SOURCE_DIR) / "data";
  std::size_t files = 0, decls_seen = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    const fs::path& p = entry.path();
    if (p.extension() != ".gat" || p.filename().string().rfind("sigma-", 0) == 0) continue;
    ++files;
    Mode mode = mode_of(p);
    auto decls = parse(slurp(p), mode);
    std::string printed = print(decls);
    auto again = parse(printed, mode);
    ASSERT_EQ(decls.size(), again.size()) << p;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      EXPECT_TRUE(same_decl(decls[i], again[i])) << p << ": " << print(decls[i]);
    }
    EXPECT_EQ(print(again), printed) << p;
    decls_seen += decls.size();
  }
  EXPECT_GE(files, 6u);
  EXPECT_GT(decls_seen, 150u);
}

TEST(SyntaxRoundTrip, ShippedPresentations) {
  fs::path root = fs::path(GATCWF_SOURCE_DIR) / "data";
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root)) {
    const fs::path& p = entry.path();
    if (p.filename().string().rfind("sigma-", 0) != 0) continue;
    ++files;
    presentation::Presentation pres = presentation::parse(slurp(p));
    std::string printed = presentation::print(pres);
    presentation::Presentation again = presentation::parse(printed);
    ASSERT_EQ(pres.decls.size(), again.decls.size()) << p;
    for (std::size_t i = 0; i < pres.decls.size(); ++i) {
      EXPECT_TRUE(pres.decls[i] == again.decls[i]) << p << " #" << i;
    }
    EXPECT_EQ(presentation::print(again), printed) << p;
  }
  EXPECT_GE(files, 4u);
}
