#include <gtest/gtest.h>

#include <random>

#include "gatcwf/levels.hpp"
#include "support/level_closure.hpp"

using namespace gatcwf::levels;

namespace {

LevelTerm v(std::uint32_t i) { return var(i); }
LevelNF nf(LevelNF::Atoms atoms) { return LevelNF(std::move(atoms)); }

LevelTerm random_term(std::mt19937_64& rng, std::uint32_t vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 2 : 0);
  switch (pick(rng)) {
    case 1: return next(random_term(rng, vars, depth - 1));
    case 2: return join(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1));
    default: return var(std::uniform_int_distribution<std::uint32_t>(0, vars - 1)(rng));
  }
}

// Rewrites one random subterm with one of the five laws, in either direction
// where the pattern matches. Returns the input when nothing applies.
LevelTerm rewrite_once(std::mt19937_64& rng, const LevelTerm& t) {
  std::uniform_int_distribution<int> coin(0, 3);
  if (t->tag == LevelNode::Tag::Join && coin(rng) == 0) {
    return join(rewrite_once(rng, t->lhs), rewrite_once(rng, t->rhs));
  }
  if (t->tag == LevelNode::Tag::Next && coin(rng) == 0) return next(rewrite_once(rng, t->lhs));
  std::vector<LevelTerm> options;
  options.push_back(join(t, t));                 // l = l \/ l
  if (t->tag == LevelNode::Tag::Join) {
    options.push_back(join(t->rhs, t->lhs));
    if (t->lhs->tag == LevelNode::Tag::Join) options.push_back(join(t->lhs->lhs, join(t->lhs->rhs, t->rhs)));
    if (t->rhs->tag == LevelNode::Tag::Join) options.push_back(join(join(t->lhs, t->rhs->lhs), t->rhs->rhs));
    if (structurally_equal(t->lhs, t->rhs)) options.push_back(t->lhs);
    if (t->rhs->tag == LevelNode::Tag::Next && structurally_equal(t->lhs, t->rhs->lhs)) options.push_back(t->rhs);
    if (t->lhs->tag == LevelNode::Tag::Next && t->rhs->tag == LevelNode::Tag::Next) {
      options.push_back(next(join(t->lhs->lhs, t->rhs->lhs)));
    }
  }
  if (t->tag == LevelNode::Tag::Next) {
    options.push_back(join(t->lhs, t));  // l^+ = l \/ l^+
    if (t->lhs->tag == LevelNode::Tag::Join) options.push_back(join(next(t->lhs->lhs), next(t->lhs->rhs)));
  }
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

}  // namespace

TEST(LevelNormalize, Examples) {
  EXPECT_EQ(normalize({1}, join(v(0), next(v(0)))), nf({{0, 1}}));
  EXPECT_EQ(normalize({2}, join(v(0), v(1))), normalize({2}, join(v(1), v(0))));
  EXPECT_EQ(normalize({2}, join(v(0), v(1))), nf({{0, 0}, {1, 0}}));
  EXPECT_EQ(normalize({1}, v(0)), nf({{0, 0}}));
  EXPECT_EQ(normalize({2}, next(join(v(0), v(1)))), nf({{0, 1}, {1, 1}}));
}

TEST(LevelNormalize, AbsorptionKeepsOneAtomPerVariable) {
  EXPECT_EQ(normalize({1}, join(next(next(v(0))), v(0))), nf({{0, 2}}));
  EXPECT_EQ(normalize({3}, join(v(2), join(next(v(0)), v(2)))), nf({{0, 1}, {2, 0}}));
}

TEST(LevelNormalize, ScopeIsEnforced) {
  EXPECT_THROW(normalize({1}, v(1)), ScopeError);
  EXPECT_THROW(normalize({0}, v(0)), ScopeError);
  EXPECT_THROW(level_eq({1}, v(0), next(v(3))), ScopeError);
}

TEST(LevelNormalize, NoClosedLevels) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) EXPECT_THROW(check_scope({0}, random_term(rng, 2, 3)), ScopeError);
}

TEST(LevelNormalize, Idempotent) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    LevelTerm t = random_term(rng, 3, 4);
    LevelNF once = normalize({3}, t);
    EXPECT_EQ(normalize({3}, once.to_term()), once) << to_string(t);
  }
}

TEST(LevelNormalize, InvariantUnderLawRewriting) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    LevelTerm t = random_term(rng, 2, 3);
    LevelTerm u = t;
    for (int k = 0; k < 6; ++k) u = rewrite_once(rng, u);
    EXPECT_EQ(normalize({2}, t), normalize({2}, u)) << to_string(t) << " ~> " << to_string(u);
  }
}

TEST(LevelEq, Examples) {
  EXPECT_TRUE(level_eq({1}, join(v(0), v(0)), v(0)));
  EXPECT_FALSE(level_eq({1}, v(0), next(v(0))));
  EXPECT_TRUE(level_eq({2}, join(next(v(1)), v(0)), join(v(0), next(v(1)))));
}

TEST(LeqCheck, Examples) {
  EXPECT_TRUE(leq_check({1}, join(next(v(0)), v(0)), next(v(0))).has_value());
  EXPECT_FALSE(leq_check({2}, v(0), v(1)).has_value());
  auto w = leq_check({2}, join(v(0), v(1)), join(v(0), v(1)));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->level, normalize({2}, join(v(0), v(1))));
}

TEST(LtCheck, Examples) {
  EXPECT_TRUE(lt_check({1}, v(0), next(v(0))).has_value());
  EXPECT_FALSE(lt_check({1}, v(0), v(0)).has_value());
  EXPECT_TRUE(lt_check({1}, v(0), next(next(v(0)))).has_value());
  EXPECT_FALSE(lt_check({2}, v(0), next(v(1))).has_value());
  EXPECT_TRUE(lt_check({2}, v(0), join(next(v(0)), v(1))).has_value());
}

TEST(LtCheck, StrictOrderOnRandomTriples) {
  std::mt19937_64 rng(17);
  int transitive_instances = 0;
  for (int i = 0; i < 3000; ++i) {
    LevelTerm a = random_term(rng, 2, 3), b = random_term(rng, 2, 3), c = random_term(rng, 2, 3);
    if (i % 2 == 0) {
      b = join(next(a), b);
      c = join(next(b), c);
    }
    EXPECT_FALSE(lt_check({2}, a, a).has_value()) << to_string(a);
    if (lt_check({2}, a, b) && lt_check({2}, b, c)) {
      ++transitive_instances;
      EXPECT_TRUE(lt_check({2}, a, c).has_value()) << to_string(a) << " " << to_string(b) << " " << to_string(c);
    }
  }
  EXPECT_GT(transitive_instances, 1000);
}

// Every pair of terms over two variables with at most three constructors.
TEST(LevelBruteForce, AgreesWithCongruenceClosure) {
  gatcwf::testing::LevelClosure closure(2, 5);
  std::vector<std::uint32_t> small;
  for (std::uint32_t k = 0; k <= 3; ++k) {
    for (std::uint32_t id : closure.terms_with(k)) small.push_back(id);
  }
  ASSERT_EQ(small.size(), 2u + 6u + 30u + 186u);
  std::size_t disagreements = 0, equal_pairs = 0;
  for (std::uint32_t x : small) {
    for (std::uint32_t y : small) {
      bool brute = closure.equal(x, y);
      LevelTerm lx = closure.to_term(x), ly = closure.to_term(y);
      bool fast = level_eq({2}, lx, ly);
      equal_pairs += brute;
      if (brute != fast) {
        ++disagreements;
        ADD_FAILURE() << to_string(lx) << " vs " << to_string(ly) << ": closure " << brute << ", level_eq " << fast;
        if (disagreements > 5) return;
      }
      auto w1 = leq_check({2}, lx, ly);
      EXPECT_EQ(w1.has_value(), fast);
      if (w1) {
        auto w2 = leq_check({2}, ly, lx);
        ASSERT_TRUE(w2.has_value());
        EXPECT_EQ(*w1, *w2);
        EXPECT_EQ(w1->level, normalize({2}, lx));
      }
    }
  }
  EXPECT_GT(equal_pairs, small.size());
}

TEST(LevelSubst, Examples) {
  LevelSubst s({1}, {next(v(0))});
  LevelTerm out = lsubst_apply(s, join(v(0), v(0)));
  EXPECT_TRUE(structurally_equal(out, join(next(v(0)), next(v(0)))));
  LevelTerm l = join(v(1), next(v(0)));
  EXPECT_TRUE(level_eq({2}, lsubst_apply(lsubst_id({2}), l), l));
  EXPECT_EQ(lsubst_empty({0}).entries().size(), lsubst_id({0}).entries().size());
  EXPECT_TRUE(lsubst_eq(lsubst_empty({0}), lsubst_id({0})));
}

TEST(LevelSubst, UcwfEquations) {
  std::mt19937_64 rng(19);
  auto random_subst = [&](std::uint32_t source, std::uint32_t target) {
    std::vector<LevelTerm> entries;
    for (std::uint32_t i = 0; i < target; ++i) entries.push_back(random_term(rng, source, 2));
    return LevelSubst({source}, entries);
  };
  for (int i = 0; i < 200; ++i) {
    LevelSubst sigma = random_subst(3, 2);  // lhom(3, 2)
    LevelSubst tau = random_subst(2, 3);    // lhom(2, 3)
    LevelSubst ups = random_subst(3, 2);    // lhom(3, 2)
    LevelTerm l = random_term(rng, 3, 2);
    LevelTerm k = random_term(rng, 2, 3);

    EXPECT_TRUE(lsubst_eq(lsubst_comp(lsubst_id({2}), sigma), sigma));
    EXPECT_TRUE(lsubst_eq(lsubst_comp(sigma, lsubst_id({3})), sigma));
    EXPECT_TRUE(lsubst_eq(lsubst_comp(lsubst_comp(sigma, tau), ups), lsubst_comp(sigma, lsubst_comp(tau, ups))));
    EXPECT_TRUE(level_eq({2}, lsubst_apply(lsubst_id({2}), k), k));
    EXPECT_TRUE(level_eq({3}, lsubst_apply(lsubst_comp(tau, sigma), k), lsubst_apply(sigma, lsubst_apply(tau, k))));
    EXPECT_TRUE(lsubst_eq(lsubst_comp(lsubst_empty({2}), sigma), lsubst_empty({3})));
    EXPECT_TRUE(lsubst_eq(lsubst_comp(lsubst_p({2}), lsubst_pair(sigma, l)), sigma));
    EXPECT_TRUE(level_eq({3}, lsubst_apply(lsubst_pair(sigma, l), lsubst_q({2})), l));
    EXPECT_TRUE(lsubst_eq(lsubst_comp(lsubst_pair(tau, k), sigma),
                          lsubst_pair(lsubst_comp(tau, sigma), lsubst_apply(sigma, k))));
    EXPECT_TRUE(lsubst_eq(lsubst_id({3}), lsubst_pair(lsubst_p({2}), lsubst_q({2}))));

    LevelTerm a = random_term(rng, 2, 2), b = random_term(rng, 2, 2);
    EXPECT_TRUE(level_eq({3}, lsubst_apply(sigma, join(a, b)), join(lsubst_apply(sigma, a), lsubst_apply(sigma, b))));
    EXPECT_TRUE(level_eq({3}, lsubst_apply(sigma, next(a)), next(lsubst_apply(sigma, a))));
  }
}

TEST(LevelSubst, ArityIsChecked) {
  LevelSubst sigma({3}, {v(0), v(1)});
  EXPECT_THROW(lsubst_comp(sigma, lsubst_id({2})), ArityError);
}
