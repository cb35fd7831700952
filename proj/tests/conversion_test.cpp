#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gatcwf/conversion.hpp"
#include "gatcwf/kernel.hpp"
#include "gatcwf/oracle.hpp"

using namespace gatcwf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A checked prelude plus helpers to elaborate expressions against it.
struct Env {
  kernel::Session session;

  Env(Mode mode, const std::string& prelude, bool cumulative = false) {
    session.flags.mode = mode;
    session.flags.cumulative = cumulative;
    for (const Decl& d : parse(prelude, mode)) {
      kernel::DeclReport r = kernel::check_decl(session, d);
      if (r.status != kernel::Status::Ok) throw std::runtime_error("prelude: " + r.message);
    }
  }

  Expr elab(const std::string& text) const {
    return kernel::synth(session.sig, parse_expr(text, session.flags.mode), session.level_ctx, session.flags).expr;
  }

  Expr nf(const std::string& text) const { return conv::normalize_expr(session.sig, elab(text)).expr; }

  conv::Verdict conv(const std::string& a, const std::string& b) const {
    return conv::convertible(session.sig, elab(a), elab(b));
  }
};

const char* kTowerPrelude =
    "postulate ctx G; postulate ctx D; postulate ctx X;"
    "postulate ty A in G; postulate tm a : A in G;"
    "postulate hom g : D -> G; postulate hom d : X -> D;"
    "postulate tm u : U(0; G) in G;"
    "postulate tm w : U(1; G . El(0, u)) in G . El(0, u);";

const char* kUpPrelude =
    "level-ctx 1; postulate ctx G;"
    "level-ctx 2; postulate ty B in G[@lp];"
    "level-ctx 1; postulate tm c : forall(B; G) in G;";

std::set<std::string> rule_names() {
  std::set<std::string> names;
  for (const auto& r : conv::rule_table()) names.insert(r.name);
  return names;
}

}  // namespace

TEST(ConversionExamples, BetaThenProjection) {
  Env env(Mode::Tower, kTowerPrelude);
  conv::NormalForm nf = conv::normalize_expr(env.session.sig, env.elab("app(lam(q(G, A)), a)"), {10000, true});
  EXPECT_TRUE(equal(nf.expr, env.elab("a")));
  ASSERT_GE(nf.trace.size(), 2u);
  EXPECT_EQ(nf.trace.front().rule, "beta");
  EXPECT_EQ(nf.trace.back().rule, "q-pair");
}

TEST(ConversionExamples, DecodingOfPiCodes) {
  Env env(Mode::Tower, kTowerPrelude);
  EXPECT_TRUE(equal(env.nf("El(1, pi{0,1}(u, w))"), env.nf("Pi(El(0, u), El(1, w))")));
}

TEST(ConversionExamples, IdentitySubstitution) {
  Env env(Mode::Tower, kTowerPrelude);
  EXPECT_TRUE(equal(env.nf("A[id(G)]"), env.elab("A")));
}

TEST(ConversionExamples, LevelCollapseUnderSubstitution) {
  Env env(Mode::Up, "level-ctx 1; postulate ctx G;");
  Expr lhs = env.nf("U(a0; G)[@(a0 \\/ a0)]");
  Expr rhs = env.nf("U(a0; G[@(a0 \\/ a0)])");
  EXPECT_TRUE(equal(lhs, rhs)) << print(lhs) << " vs " << print(rhs);
  EXPECT_TRUE(equal(lhs, env.nf("U(a0; G)")));
}

TEST(ConversionConvertible, Examples) {
  Env env(Mode::Tower, kTowerPrelude);
  EXPECT_EQ(env.conv("id(G) o g", "g"), conv::Verdict::Yes);
  EXPECT_EQ(env.conv("q(G, A)[< id(G), a; A >]", "a"), conv::Verdict::Yes);
  EXPECT_EQ(env.conv("U(0; G)", "U(1; G)"), conv::Verdict::No);
  EXPECT_EQ(env.conv("g o d", "g o d o id(X)"), conv::Verdict::Yes);

  Env up(Mode::Up, kUpPrelude);
  EXPECT_EQ(up.conv("U(a0; G)", "U(a0^+; G)"), conv::Verdict::No);
  EXPECT_EQ(up.conv("llam(lapp(c[@lp], a0); G)", "c"), conv::Verdict::Yes);
}

TEST(ConversionWhnf, SubstitutionSpines) {
  Env env(Mode::Tower, std::string(kTowerPrelude) + "postulate tm b : A[g] in D;");
  const Signature& sig = env.session.sig;
  auto spine = [&](const std::string& s) { return conv::whnf_subst(sig, env.elab(s)); };
  EXPECT_TRUE(equal(spine("< g, b; A > o d"), env.nf("< g o d, b[d]; A >")));
  EXPECT_TRUE(equal(spine("id(G . A) o < id(G), a; A >"), env.nf("< id(G), a; A >")));
  EXPECT_TRUE(equal(spine("<>(G) o g"), env.elab("<>(D)")));
  Expr ext_id = spine("id(G . A)");
  ASSERT_EQ(ext_id->kind, Kind::Pair) << print(ext_id);
}

TEST(ConversionFuel, ExhaustionIsUnknown) {
  Env env(Mode::Tower, kTowerPrelude);
  Expr e = env.elab("app(lam(q(G, A)), a)[id(G)][id(G)]");
  EXPECT_EQ(conv::convertible(env.session.sig, e, env.elab("a"), {1, false}), conv::Verdict::Unknown);
  try {
    conv::normalize_expr(env.session.sig, e, {2, true});
    FAIL() << "expected fuel exhaustion";
  } catch (const conv::FuelExhausted& ex) {
    EXPECT_EQ(ex.partial_trace().size(), 2u);
  }
  EXPECT_EQ(conv::convertible(env.session.sig, e, env.elab("a"), {10000, false}), conv::Verdict::Yes);
}

TEST(ConversionTrace, StepFormat) {
  conv::Step s{"beta", {0, 1}, nullptr, nullptr};
  EXPECT_EQ(conv::to_string(s), "beta @ 0.1");
  conv::Step root{"eta", {}, nullptr, nullptr};
  EXPECT_EQ(conv::to_string(root), "eta @ root");
}

TEST(ConversionRules, TableIsWellFormed) {
  std::set<std::string> seen;
  for (const auto& r : conv::rule_table()) {
    EXPECT_TRUE(seen.insert(r.name).second) << "duplicate rule " << r.name;
    EXPECT_NE(r.equation.find(" = "), std::string::npos) << r.name;
    EXPECT_EQ(conv::find_rule(r.name), &r);
    for (const auto& [follow, path] : r.then) EXPECT_NE(conv::find_rule(follow), nullptr) << follow;
  }
  EXPECT_EQ(conv::find_rule("no-such-rule"), nullptr);
}

// Every step of every corpus normalization replays, and only names rules
// from the table.
TEST(ConversionReplay, CorpusTracesReplay) {
  struct File {
    const char* name;
    Mode mode;
    bool cumulative;
  };
  std::set<std::string> names = rule_names();
  std::set<std::string> used;
  std::size_t equations = 0;
  for (File f : {File{"equations-corpus-tower.gat", Mode::Tower, false},
                 File{"equations-corpus-tower-cumulative.gat", Mode::Tower, true},
                 File{"equations-corpus-up.gat", Mode::Up, false},
                 File{"equations-corpus-up-cumulative.gat", Mode::Up, true}}) {
    kernel::Session session;
    session.flags.mode = f.mode;
    session.flags.cumulative = f.cumulative;
    for (const Decl& d : parse(slurp(fs::path(GATCWF_SOURCE_DIR) / "data" / f.name), f.mode)) {
      if (d.kind == Decl::Kind::CheckEq) {
        Sort sort = kernel::elaborate_sort(session.sig, *d.sort, session.level_ctx, session.flags);
        for (const Expr& side : {d.lhs, d.rhs}) {
          Expr start = kernel::check(session.sig, side, session.level_ctx, sort, session.flags).expr;
          conv::NormalForm nf = conv::normalize_expr(session.sig, start, {10000, true});
          EXPECT_EQ(conv::replay(session.sig, start, nf.trace, nf.expr), "") << f.name << ": " << d.name;
          for (const auto& step : nf.trace) {
            EXPECT_TRUE(names.count(step.rule)) << step.rule;
            used.insert(step.rule);
          }
        }
        ++equations;
      }
      ASSERT_EQ(kernel::check_decl(session, d).status, kernel::Status::Ok) << f.name << ": " << print(d);
    }
  }
  EXPECT_GT(equations, 100u);
  EXPECT_GT(used.size(), 40u);
}

TEST(ConversionReplay, TamperedTracesAreRejected) {
  Env env(Mode::Tower, kTowerPrelude);
  Expr start = env.elab("app(lam(q(G, A)), a)[id(G)]");
  conv::NormalForm nf = conv::normalize_expr(env.session.sig, start, {10000, true});
  ASSERT_EQ(conv::replay(env.session.sig, start, nf.trace, nf.expr), "");
  ASSERT_GE(nf.trace.size(), 2u);

  auto dropped = nf.trace;
  dropped.erase(dropped.begin());
  EXPECT_NE(conv::replay(env.session.sig, start, dropped, nf.expr), "");

  auto renamed = nf.trace;
  renamed.front().rule = "eta";
  EXPECT_NE(conv::replay(env.session.sig, start, renamed, nf.expr), "");

  EXPECT_NE(conv::replay(env.session.sig, start, nf.trace, env.elab("a[id(G)]")), "");
}

// Reflexivity, symmetry and transitivity on generated terms of one type, and
// congruence under a substitution context.
TEST(ConversionProperties, EquivalenceAndCongruence) {
  for (Mode mode : {Mode::Tower, Mode::Up}) {
    oracle::GenConfig config{mode, true, 3, 2, 20, mode == Mode::Tower};
    Signature sig = oracle::prelude_signature(config);
    kernel::Flags flags;
    flags.mode = mode;
    flags.cumulative = true;
    oracle::Generator gen(config, 41);
    std::size_t yes = 0, no = 0;
    for (int i = 0; i < 150; ++i) {
      oracle::Redex r = gen.redex();
      if (oracle::is_type(r.x)) continue;
      std::uint32_t n = r.target.n;
      Expr x = oracle::render(r.x, r.target);
      Expr g = oracle::render_sub(r.g, r.source, r.target);
      Expr e1 = kernel::synth(sig, subst(x, g), n, flags).expr;
      Expr e2 = oracle::render(oracle::hsubst(r.x, r.g, n), r.source);
      kernel::Typed t1 = kernel::synth(sig, e1, n, flags);
      auto other = gen.term_of(r.source, oracle::eval(sig, t1.sort.type), 8);
      if (!other) continue;
      Expr e3 = oracle::render(*other, r.source);

      std::vector<Expr> es = {e1, e2, e3};
      conv::Verdict v[3][3];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) v[a][b] = conv::convertible(sig, es[a], es[b]);
      }
      for (int a = 0; a < 3; ++a) {
        EXPECT_EQ(v[a][a], conv::Verdict::Yes);
        for (int b = 0; b < 3; ++b) {
          ASSERT_NE(v[a][b], conv::Verdict::Unknown);
          EXPECT_EQ(v[a][b], v[b][a]);
          for (int c = 0; c < 3; ++c) {
            if (v[a][b] == conv::Verdict::Yes && v[b][c] == conv::Verdict::Yes) {
              EXPECT_EQ(v[a][c], conv::Verdict::Yes) << print(es[a]) << " / " << print(es[c]);
            }
          }
        }
      }
      (v[0][2] == conv::Verdict::Yes ? yes : no)++;

      // e1 ~ e2, so both stay convertible under a further substitution.
      auto [outer, h] = gen.substitution(r.source, 6);
      Expr hx = oracle::render_sub(h, outer, r.source);
      Expr c1 = kernel::synth(sig, subst(e1, hx), n, flags).expr;
      Expr c2 = kernel::synth(sig, subst(e2, hx), n, flags).expr;
      EXPECT_EQ(conv::convertible(sig, c1, c2), conv::Verdict::Yes) << print(c1);
    }
    EXPECT_GT(yes + no, 50u);
  }
}
