#pragma once

// Universe levels: terms built from de Bruijn variables, successor and join,
// their semilattice normal forms, and explicit level substitutions.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gatcwf::levels {

/// Number of level variables in scope (the `n` of `n : lctx`).
struct LevelCtx {
  std::uint32_t size = 0;

  friend bool operator==(LevelCtx, LevelCtx) = default;
};

struct LevelNode;
using LevelTerm = std::shared_ptr<const LevelNode>;

struct LevelNode {
  enum class Tag { Var, Next, Join };
  Tag tag;
  std::uint32_t index = 0;  // Var only
  LevelTerm lhs;            // Next, Join
  LevelTerm rhs;            // Join
};

LevelTerm var(std::uint32_t index);
LevelTerm next(LevelTerm arg);
LevelTerm join(LevelTerm lhs, LevelTerm rhs);

/// Thrown when a level variable is not bound by the ambient level context.
class ScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when level substitutions are composed or applied at the wrong arity.
class ArityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical form `a_{i1}^{+p1} \/ ... \/ a_{ik}^{+pk}` with i1 < ... < ik.
/// One atom per variable: `a^{+p} \/ a^{+q}` collapses to `a^{+max(p,q)}`.
class LevelNF {
 public:
  using Atoms = std::map<std::uint32_t, std::uint32_t>;

  explicit LevelNF(Atoms atoms);

  const Atoms& atoms() const { return atoms_; }
  LevelNF join(const LevelNF& other) const;
  LevelNF next() const;
  /// Canonical read-back: atoms in ascending order, right-nested joins.
  LevelTerm to_term() const;

  friend bool operator==(const LevelNF&, const LevelNF&) = default;
  friend auto operator<=>(const LevelNF&, const LevelNF&) = default;

 private:
  Atoms atoms_;
};

/// Proof of `leq_n(l, l')`. Carries the shared normal form; there is at most
/// one witness per pair, mirroring `r(l)`.
struct LeqWitness {
  LevelNF level;

  friend bool operator==(const LeqWitness&, const LeqWitness&) = default;
};

/// An element of `lhom(source, target)`: `target` level terms over `source`
/// variables. `entries()[i]` is the image of variable `i`.
class LevelSubst {
 public:
  LevelSubst(LevelCtx source, std::vector<LevelTerm> entries);

  LevelCtx source() const { return source_; }
  LevelCtx target() const { return {static_cast<std::uint32_t>(entries_.size())}; }
  const std::vector<LevelTerm>& entries() const { return entries_; }

 private:
  LevelCtx source_;
  std::vector<LevelTerm> entries_;
};

void check_scope(LevelCtx n, const LevelTerm& l);

LevelNF normalize(LevelCtx n, const LevelTerm& l);
bool level_eq(LevelCtx n, const LevelTerm& l, const LevelTerm& r);
std::optional<LeqWitness> leq_check(LevelCtx n, const LevelTerm& l, const LevelTerm& r);
/// `l < m`, i.e. `leq_n(l^+ \/ m, m)`.
std::optional<LeqWitness> lt_check(LevelCtx n, const LevelTerm& l, const LevelTerm& m);

/// Normal form without a scope bound; used where terms are already checked.
LevelNF normal_form(const LevelTerm& l);
/// Replace `l` by the read-back of its normal form.
LevelTerm canonical(const LevelTerm& l);
/// Largest variable index plus one (0 means no variables, which cannot occur).
std::uint32_t scope_size(const LevelTerm& l);

LevelTerm lsubst_apply(const LevelSubst& sigma, const LevelTerm& l);

LevelSubst lsubst_id(LevelCtx n);
/// `sigma o tau`; requires `tau.target() == sigma.source()`.
LevelSubst lsubst_comp(const LevelSubst& sigma, const LevelSubst& tau);
LevelSubst lsubst_empty(LevelCtx n);
LevelSubst lsubst_pair(const LevelSubst& sigma, LevelTerm l);
/// Weakening `lp_n : lhom(s(n), n)`.
LevelSubst lsubst_p(LevelCtx n);
/// The fresh variable `lq_n : ltm(s(n))`.
LevelTerm lsubst_q(LevelCtx n);
/// `sigma^dagger = <sigma o lp, lq>`.
LevelSubst lsubst_lift(const LevelSubst& sigma);

/// Pointwise equality of entries up to normal form.
bool lsubst_eq(const LevelSubst& a, const LevelSubst& b);
bool is_identity(const LevelSubst& sigma);
LevelSubst canonical(const LevelSubst& sigma);

/// Rename variables: indices >= cutoff are shifted by `by`.
LevelTerm shift(const LevelTerm& l, std::uint32_t cutoff, std::int32_t by);
/// Remove variable `index`: fails if it occurs, decrements indices above it.
std::optional<LevelTerm> strengthen(const LevelTerm& l, std::uint32_t index);

bool structurally_equal(const LevelTerm& a, const LevelTerm& b);
std::size_t size(const LevelTerm& l);

/// Surface rendering, e.g. `a0 \/ a1^+`.
std::string to_string(const LevelTerm& l);
std::string to_string(const LevelNF& nf);
std::string to_string(const LevelSubst& sigma);

/// The algebraic laws of the ucwf of levels, by name. The presentation
/// cross-check uses this to account for equations decided here rather than by
/// the expression rewriter.
const std::vector<std::string>& law_names();
/// Operator symbols realized by this module (name, number of official arguments).
/// Proofs of level inequalities are erased by the kernel; `leq-lsub` and
/// `lt-trans` name the proofs that guards are stable and transitive.
const std::vector<std::pair<std::string, int>>& operator_table();

}  // namespace gatcwf::levels
