#pragma once

// Judgmental equality by normalize-and-compare. Every equation of both
// theories is an oriented, named rewrite rule; normalization is innermost and
// records a replayable trace.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatcwf/signature.hpp"
#include "gatcwf/syntax.hpp"

namespace gatcwf::conv {

using Path = std::vector<std::uint32_t>;

/// `0.1.0`, or `root` for the empty path.
std::string to_string(const Path& path);

struct Step {
  std::string rule;
  Path path;
  Expr before;  // subterm at `path` before the step
  Expr after;
};

/// `<rule-name> @ <path>`.
std::string to_string(const Step& step);

struct NormalForm {
  Expr expr;
  std::vector<Step> trace;
};

enum class Orientation { LeftToRight, RightToLeft };

struct RuleEnv {
  const Signature& sig;
};

/// A single oriented equation. `apply` rewrites at the root or declines.
struct Rule {
  std::string name;
  std::string equation;  // the equation as stated, left = right
  Orientation orientation;
  std::function<std::optional<Expr>(const Expr&, const RuleEnv&)> apply;
  /// False for rules only used inside a fixed multi-step contraction.
  bool automatic = true;
  /// Steps applied right after this rule, at paths relative to the redex,
  /// without normalizing in between.
  std::vector<std::pair<std::string, Path>> then;
};

const std::vector<Rule>& rule_table();
const Rule* find_rule(const std::string& name);

struct Options {
  std::size_t fuel = 10000;
  bool trace = false;
};

class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(std::vector<Step> partial)
      : std::runtime_error("conversion fuel exhausted"), partial_(std::move(partial)) {}
  const std::vector<Step>& partial_trace() const { return partial_; }

 private:
  std::vector<Step> partial_;
};

enum class Verdict { Yes, No, Unknown };
std::string to_string(Verdict v);

/// One normalization session. Fuel is shared by every call on the same engine.
class Engine {
 public:
  Engine(const Signature& sig, Options options);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Throws FuelExhausted.
  NormalForm normalize(const Expr& e);
  std::size_t steps_used() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

NormalForm normalize_expr(const Signature& sig, const Expr& e, Options options = {});

/// Canonical spine form of a substitution: the normal form, with an outermost
/// identity at an extended context unfolded to `< p, q >`.
Expr whnf_subst(const Signature& sig, const Expr& g, Options options = {});

struct Comparison {
  Verdict verdict = Verdict::Unknown;
  NormalForm lhs;
  NormalForm rhs;
};

/// Both sides share one fuel budget.
Comparison compare(const Signature& sig, const Expr& a, const Expr& b, Options options = {});
Verdict convertible(const Signature& sig, const Expr& a, const Expr& b, Options options = {});

/// Re-applies each traced rule at its path and checks the chain reaches `end`.
/// Returns an empty string on success, else a description of the first fault.
std::string replay(const Signature& sig, const Expr& start, const std::vector<Step>& trace, const Expr& end);

/// Subterm at a path, and replacement at a path.
Expr subterm(const Expr& e, const Path& path);
Expr replace_at(const Expr& e, const Path& path, std::size_t depth, const Expr& with);

// Strengthening, exposed for the eta rules and for tests.

/// Inverse of weakening by `p` at term depth `k`: fails if variable `k` occurs.
std::optional<Expr> strengthen_term(const Expr& e, std::uint32_t k);
/// Inverse of weakening by `lp` below `d` level binders.
std::optional<Expr> strengthen_level(const Expr& e, std::uint32_t d);

}  // namespace gatcwf::conv
