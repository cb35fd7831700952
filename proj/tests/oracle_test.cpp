#include <gtest/gtest.h>

#include <set>

#include "gatcwf/conversion.hpp"
#include "gatcwf/kernel.hpp"
#include "gatcwf/oracle.hpp"

namespace o = gatcwf::oracle;
using namespace gatcwf;

namespace {

kernel::Flags flags_for(const o::GenConfig& c) {
  kernel::Flags f;
  f.mode = c.mode;
  f.cumulative = c.cumulative;
  return f;
}

UIdx nat(std::uint32_t k) { return UIdx(k); }

o::Base weak(std::uint32_t j) {
  o::Base b;
  b.weak = j;
  return b;
}

// Checks one redex against the kernel and the conversion engine.
void check_redex(const Signature& sig, const kernel::Flags& flags, const o::Redex& r) {
  std::uint32_t n = r.target.n;
  Expr x = o::render(r.x, r.target);
  Expr g = o::render_sub(r.g, r.source, r.target);
  kernel::Typed redex = kernel::synth(sig, subst(x, g), n, flags);
  Expr result = o::render(o::hsubst(r.x, r.g, n), r.source);
  kernel::Typed typed = kernel::synth(sig, result, n, flags);
  EXPECT_TRUE(kernel::sort_equal(typed.sort, redex.sort))
      << to_string(typed.sort) << " vs " << to_string(redex.sort) << " for " << print(subst(x, g));
  EXPECT_EQ(conv::convertible(sig, redex.expr, typed.expr, {10000, false}), conv::Verdict::Yes)
      << print(redex.expr) << "  vs  " << print(typed.expr);
}

void agreement(o::GenConfig config, std::uint64_t seed, int count) {
  Signature sig = o::prelude_signature(config);
  kernel::Flags flags = flags_for(config);
  o::Generator gen(config, seed);
  for (int i = 0; i < count; ++i) {
    o::Redex r = gen.redex();
    ASSERT_LE(o::size(r.x) + o::size(r.g), config.max_size);
    ASSERT_NO_FATAL_FAILURE(check_redex(sig, flags, r)) << "instance " << i;
    if (::testing::Test::HasFailure()) return;
  }
}

}  // namespace

TEST(OracleExamples, PiPushesUnderTheLiftedSubstitution) {
  // Pi(A, B)[g] = Pi(A[g], B[g^dagger]) with A, B constants over G.
  o::Term a = o::ty_const("C", weak(0));
  o::Term b = o::ty_const("C", weak(1));
  o::Sub g = o::weakening(1);
  o::Term r = o::hsubst_ty(o::ty_pi(a, b), g, 0);
  ASSERT_EQ(r->kind, o::Node::Kind::Pi);
  EXPECT_TRUE(o::same(r->args[0], o::ty_const("C", weak(1))));
  EXPECT_TRUE(o::same(r->args[1], o::hsubst(b, o::lift_sub(g, 0), 0)));
  EXPECT_TRUE(o::same(r->args[1], o::ty_const("C", weak(2))));
}

TEST(OracleExamples, UniverseIsStable) {
  o::Sub g = o::cons(o::empty_sub(), o::tm_ucode(nat(0), nat(1)));
  EXPECT_TRUE(o::same(o::hsubst_ty(o::ty_univ(nat(2)), g, 0), o::ty_univ(nat(2))));
}

TEST(OracleExamples, IdentityIsNeutral) {
  o::Term a = o::ty_pi(o::ty_univ(nat(0)), o::ty_el(nat(0), o::tm_var(0)));
  EXPECT_TRUE(o::same(o::hsubst_ty(a, o::identity(), 0), a));
}

TEST(OracleExamples, VariableProjectsThePair) {
  o::Term a = o::tm_ucode(nat(0), nat(1));
  o::Sub g = o::cons(o::empty_sub(), a);
  EXPECT_TRUE(o::same(o::hsubst_tm(o::tm_var(0), g, 0), a));
}

TEST(OracleExamples, LambdaUsesTheLiftedSubstitution) {
  o::Term body = o::tm_var(1);
  o::Term lam = o::tm_lam(o::ty_univ(nat(0)), body);
  o::Sub g = o::cons(o::empty_sub(), o::tm_ucode(nat(0), nat(1)));
  o::Term r = o::hsubst_tm(lam, g, 0);
  ASSERT_EQ(r->kind, o::Node::Kind::Lam);
  EXPECT_TRUE(o::same(r->args[1], o::hsubst(o::tm_ucode(nat(0), nat(1)), o::weakening(1), 0)));
}

TEST(OracleExamples, UniverseCodeIsStable) {
  o::Sub g = o::weakening(2);
  EXPECT_TRUE(o::same(o::hsubst_tm(o::tm_ucode(nat(0), nat(2)), g, 0), o::tm_ucode(nat(0), nat(2))));
}

TEST(OracleExamples, SortMisuseIsRejected) {
  EXPECT_THROW(o::hsubst_ty(o::tm_var(0), o::identity(), 0), o::OracleError);
  EXPECT_THROW(o::hsubst_tm(o::ty_univ(nat(0)), o::identity(), 0), o::OracleError);
  // A variable beyond the end of a closing substitution.
  EXPECT_THROW(o::hsubst(o::tm_var(1), o::cons(o::empty_sub(), o::tm_ucode(nat(0), nat(1))), 0), o::OracleError);
}

TEST(OracleAgreement, Tower) { agreement({Mode::Tower, false, 3, 2, 20, true}, 11, 300); }
TEST(OracleAgreement, TowerCumulative) { agreement({Mode::Tower, true, 3, 2, 20, true}, 12, 300); }
TEST(OracleAgreement, Up) { agreement({Mode::Up, false, 3, 2, 20, false}, 13, 300); }
TEST(OracleAgreement, UpCumulative) { agreement({Mode::Up, true, 3, 2, 20, false}, 14, 300); }

TEST(OracleAgreement, ReadBackOfNormalForms) {
  // hsubst(eval(nf(x)), eval(nf(g))) is convertible with x[g].
  for (auto mode : {Mode::Tower, Mode::Up}) {
    o::GenConfig config{mode, true, 3, 2, 20, mode == Mode::Tower};
    Signature sig = o::prelude_signature(config);
    kernel::Flags flags = flags_for(config);
    o::Generator gen(config, 21);
    for (int i = 0; i < 200; ++i) {
      o::Redex r = gen.redex();
      std::uint32_t n = r.target.n;
      Expr x = o::render(r.x, r.target);
      Expr g = o::render_sub(r.g, r.source, r.target);
      Expr xn = conv::normalize_expr(sig, x).expr;
      Expr gn = conv::normalize_expr(sig, g).expr;
      o::Term via = o::hsubst(o::eval(sig, xn), o::eval_sub(sig, gn), n);
      Expr redex = kernel::synth(sig, subst(x, g), n, flags).expr;
      ASSERT_EQ(conv::convertible(sig, redex, o::render(via, r.source)), conv::Verdict::Yes) << print(redex);
    }
  }
}

TEST(OracleProperties, RenderThenEvalIsIdentity) {
  for (auto mode : {Mode::Tower, Mode::Up}) {
    o::GenConfig config{mode, true, 3, 2, 20, mode == Mode::Tower};
    Signature sig = o::prelude_signature(config);
    o::Generator gen(config, 31);
    for (int i = 0; i < 200; ++i) {
      o::Redex r = gen.redex();
      EXPECT_TRUE(o::same(o::eval(sig, o::render(r.x, r.target)), r.x));
      EXPECT_TRUE(o::same(o::eval_sub(sig, o::render_sub(r.g, r.source, r.target)), r.g));
      o::Ctx back = o::eval_ctx(sig, o::render_ctx(r.target));
      ASSERT_EQ(back.types.size(), r.target.types.size());
      EXPECT_EQ(back.base, r.target.base);
      EXPECT_EQ(back.n, r.target.n);
    }
  }
}

TEST(OracleProperties, CompositionLaw) {
  // A[g o d] and A[g][d] agree, both inside the oracle and through conversion.
  for (auto mode : {Mode::Tower, Mode::Up}) {
    o::GenConfig config{mode, false, 3, 2, 20, mode == Mode::Tower};
    Signature sig = o::prelude_signature(config);
    o::Generator gen(config, 41);
    for (int i = 0; i < 200; ++i) {
      std::uint32_t n = gen.level_ctx();
      o::Ctx target = gen.context(n);
      o::Term a = gen.type(target, 6);
      auto [mid, g] = gen.substitution(target, 6);
      auto [source, d] = gen.substitution(mid, 6);
      o::Term twice = o::hsubst_ty(o::hsubst_ty(a, g, n), d, n);
      o::Term once = o::hsubst_ty(a, o::compose(g, d, n), n);
      EXPECT_TRUE(o::same(twice, once));
      EXPECT_EQ(conv::convertible(sig, o::render(twice, source), o::render(once, source)), conv::Verdict::Yes);
      Expr engine = subst(subst(o::render(a, target), o::render_sub(g, mid, target)), o::render_sub(d, source, mid));
      EXPECT_EQ(conv::convertible(sig, engine, o::render(once, source)), conv::Verdict::Yes);
    }
  }
}

TEST(OracleProperties, LevelSubstitutionFunctorLaw) {
  // G[s o t] = G[s][t] for the eager evaluator and the conversion engine.
  o::GenConfig config{Mode::Up, true, 3, 2, 20, false};
  Signature sig;
  o::Generator gen(config, 51);
  for (int i = 0; i < 300; ++i) {
    std::uint32_t n = 1 + i % 2;
    std::uint32_t m = 1 + (i / 2) % 2;
    std::uint32_t k = 1 + (i / 4) % 2;
    o::Ctx c = gen.context(n);
    levels::LevelSubst s = gen.level_subst(m, n);
    levels::LevelSubst t = gen.level_subst(k, m);
    o::Ctx twice = o::lsub(o::lsub(c, s), t);
    o::Ctx once = o::lsub(c, levels::lsubst_comp(s, t));
    ASSERT_EQ(twice.types.size(), once.types.size());
    for (std::size_t j = 0; j < once.types.size(); ++j) EXPECT_TRUE(o::same(twice.types[j], once.types[j]));
    Expr engine = lsubst(lsubst(o::render_ctx(c), s), t);
    EXPECT_EQ(conv::convertible(sig, engine, o::render_ctx(once)), conv::Verdict::Yes) << print(engine);
    EXPECT_EQ(conv::convertible(sig, lsubst(o::render_ctx(c), levels::lsubst_comp(s, t)), o::render_ctx(twice)),
              conv::Verdict::Yes);
  }
}

TEST(Externalization, ClosedTermsAreClassified) {
  o::ExternalView view = o::internal_cwf();
  auto one = view.classify(parse_expr("one", Mode::Tower));
  EXPECT_EQ(one.kind, o::ExternalKind::Ctx);

  auto idh = view.classify(parse_expr("idh[< <>(1), one; Ctx >]", Mode::Tower));
  EXPECT_EQ(idh.kind, o::ExternalKind::Hom);
  ASSERT_EQ(idh.indices.size(), 2u);
  EXPECT_EQ(print(idh.indices[0]), "one");
  EXPECT_EQ(print(idh.indices[1]), "one");
}

TEST(Externalization, TypesAndTermsOfTheInternalModel) {
  Signature sig = o::internal_cwf().signature();
  kernel::Session session{sig, 0, {}};
  for (const auto& d : parse("postulate tm t0 : Ty[< <>(1), one; Ctx >] in 1;\n"
                             "postulate tm e0 : Tm[< < <>(1), one; Ctx >, t0; Ty >] in 1;\n",
                             Mode::Tower)) {
    ASSERT_EQ(kernel::check_decl(session, d).status, kernel::Status::Ok);
  }
  o::ExternalView view(session.sig);
  auto ty = view.classify(parse_expr("t0", Mode::Tower));
  EXPECT_EQ(ty.kind, o::ExternalKind::Ty);
  ASSERT_EQ(ty.indices.size(), 1u);
  auto tm = view.classify(parse_expr("e0", Mode::Tower));
  EXPECT_EQ(tm.kind, o::ExternalKind::Tm);
  ASSERT_EQ(tm.indices.size(), 2u);
  EXPECT_EQ(print(tm.indices[1]), "t0");
}

TEST(Externalization, OpenAndForeignExpressionsAreRejected) {
  o::ExternalView view = o::internal_cwf();
  EXPECT_THROW(view.classify(parse_expr("q(1, Ctx)", Mode::Tower)), o::OracleError);
  EXPECT_THROW(view.classify(parse_expr("nope", Mode::Tower)), o::OracleError);
  EXPECT_THROW(view.classify(parse_expr("Ctx", Mode::Tower)), o::OracleError);
}

namespace {

void collect(const o::Term& t, std::set<o::Node::Kind>& seen) {
  seen.insert(t->kind);
  for (const auto& a : t->args) collect(a, seen);
}

}  // namespace

TEST(OracleGenerator, CoversEveryConstructor) {
  using NK = o::Node::Kind;
  std::set<NK> seen;
  std::set<o::Base::Kind> bases;
  std::size_t nonempty_spines = 0;
  for (auto mode : {Mode::Tower, Mode::Up}) {
    o::GenConfig config{mode, true, 3, 2, 20, mode == Mode::Tower};
    o::Generator gen(config, 61);
    for (int i = 0; i < 1000; ++i) {
      o::Redex r = gen.redex();
      collect(r.x, seen);
      for (const auto& e : r.g.entries) collect(e, seen);
      bases.insert(r.g.base.kind);
      if (!r.g.entries.empty()) ++nonempty_spines;
    }
  }
  for (NK k : {NK::Pi, NK::Univ, NK::El, NK::Forall, NK::TyConst, NK::Var, NK::Lam, NK::App, NK::PiCode,
               NK::PiCodeCumul, NK::UCode, NK::Lift, NK::LLam, NK::LApp, NK::TmConst}) {
    EXPECT_TRUE(seen.count(k)) << "constructor " << static_cast<int>(k) << " never generated";
  }
  EXPECT_EQ(bases.size(), 3u);
  EXPECT_GT(nonempty_spines, 200u);
}
