#pragma once

// Implicit substitution on substitution-free terms.
//
// Terms use de Bruijn indices and ordinary capture-avoiding substitution, so
// this module shares no rewriting code with the conversion engine. Results are
// rendered back to fully annotated kernel expressions for comparison.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatcwf/kernel.hpp"
#include "gatcwf/levels.hpp"
#include "gatcwf/signature.hpp"
#include "gatcwf/syntax.hpp"

namespace gatcwf::oracle {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node;
using Term = std::shared_ptr<const Node>;

/// The base of a substitution spine: `<>`, a weakening `p o ... o p` (j
/// factors, `id` when j = 0), or a postulated substitution after a base.
struct Base {
  enum class Kind { Empty, Weak, Hom };
  Kind kind = Kind::Weak;
  std::uint32_t weak = 0;
  std::string name;             // Hom
  std::shared_ptr<const Base> inner;  // Hom: name o inner
};

/// `< ... < base, a1 >, ..., ak >`; `entries.back()` is the last component.
struct Sub {
  Base base;
  std::vector<Term> entries;
};

struct Node {
  enum class Kind {
    // types
    Pi, Univ, El, Forall, TyConst,
    // terms
    Var, Lam, App, PiCode, PiCodeCumul, UCode, Lift, LLam, LApp, TmConst,
  };
  Kind kind;
  std::vector<Term> args;   // Pi: A, B; El: a; Lam: A, b; App: c, a; codes: a, b; Forall, LLam: body
  std::vector<UIdx> levels;
  std::uint32_t index = 0;  // Var
  std::string name;         // constants
  Base base;                // constants: substitution into their context
};

Term ty_pi(Term a, Term b);
Term ty_univ(UIdx l);
Term ty_el(UIdx l, Term a);
Term ty_forall(Term b);
Term ty_const(std::string name, Base base = {});
Term tm_var(std::uint32_t k);
Term tm_lam(Term domain, Term body);
Term tm_app(Term c, Term a);
Term tm_pi_code(UIdx l, UIdx l2, Term a, Term b);
Term tm_pi_code_cumul(UIdx l, Term a, Term b);
Term tm_ucode(UIdx l, UIdx m);
Term tm_lift(UIdx l, UIdx m, Term a);
Term tm_llam(Term body);
Term tm_lapp(Term c, UIdx l);
Term tm_const(std::string name, Base base = {});

bool is_type(const Term& t);
/// Structural equality, levels compared by normal form.
bool same(const Term& a, const Term& b);
bool same(const Sub& a, const Sub& b);
std::size_t size(const Term& t);
std::size_t size(const Sub& g);

/// A context `base . A1 . ... . Am` over `n` level variables. `base` is a
/// postulated context name, or empty for `1`.
struct Ctx {
  std::uint32_t n = 0;
  std::string base;
  std::vector<Term> types;
};

Ctx extend(Ctx c, Term a);

Sub identity();
Sub weakening(std::uint32_t j);
Sub empty_sub();
Sub cons(Sub g, Term a);
/// `g o d`.
Sub compose(const Sub& g, const Sub& d, std::uint32_t n);

/// `A[g]`, `a[g]` over `n` level variables.
Term hsubst_ty(const Term& a, const Sub& g, std::uint32_t n);
Term hsubst_tm(const Term& a, const Sub& g, std::uint32_t n);
Term hsubst(const Term& x, const Sub& g, std::uint32_t n);
/// `g^dagger = < g o p, q >`.
Sub lift_sub(const Sub& g, std::uint32_t n);

/// Eager level substitution `x[@sigma]`.
Term lsub(const Term& x, const levels::LevelSubst& sigma);
Sub lsub(const Sub& g, const levels::LevelSubst& sigma);
Ctx lsub(const Ctx& c, const levels::LevelSubst& sigma);

// ---- rendering to kernel expressions

Expr render_ctx(const Ctx& c);
Expr render(const Term& x, const Ctx& c);
/// `g : hom(source, target)`.
Expr render_sub(const Sub& g, const Ctx& source, const Ctx& target);

// ---- reading canonical kernel expressions back

/// Evaluate an elaborated expression; explicit substitutions are carried out.
Term eval(const Signature& sig, const Expr& e);
Sub eval_sub(const Signature& sig, const Expr& g);
Ctx eval_ctx(const Signature& sig, const Expr& c);

// ---- random well-sorted instances

struct GenConfig {
  Mode mode = Mode::Tower;
  bool cumulative = false;
  std::uint32_t universes = 3;       // tower: indices below this bound
  std::uint32_t max_level_vars = 2;  // up
  std::size_t max_size = 20;
  /// Tower only: postulate `G`, `C : ty(G)`, `c : tm(G, C)` and `h : hom(G, G)`.
  bool postulates = true;
};

/// Declarations matching `GenConfig::postulates`, in the kernel file syntax.
std::string prelude(const GenConfig& config);
Signature prelude_signature(const GenConfig& config);

/// `x[g]` with `x : ty(target)` or `tm(target, _)` and `g : hom(source, target)`.
struct Redex {
  Ctx source;
  Ctx target;
  Term x;
  Sub g;
};

class Generator {
 public:
  Generator(GenConfig config, std::uint64_t seed);

  Ctx context(std::uint32_t n);
  Term type(const Ctx& c, std::size_t size);
  /// A term and its type.
  std::pair<Term, Term> term(const Ctx& c, std::size_t size);
  std::optional<Term> term_of(const Ctx& c, const Term& type, std::size_t size);
  /// A substitution into `target` from a fresh context.
  std::pair<Ctx, Sub> substitution(const Ctx& target, std::size_t size);
  Redex redex();
  levels::LevelSubst level_subst(std::uint32_t source, std::uint32_t target);
  std::uint32_t level_ctx();

  const GenConfig& config() const { return config_; }

 private:
  UIdx level(std::uint32_t n);
  std::size_t pick(std::size_t bound);
  bool coin(double p);

  GenConfig config_;
  std::mt19937_64 rng_;
};

// ---- externalization

enum class ExternalKind { Ctx, Hom, Ty, Tm };

/// Membership of a closed internal term in one of the external sets.
struct Classification {
  ExternalKind kind;
  Expr type;                 // the internal type of the term at context 1
  std::vector<Expr> indices; // Hom: source, target; Ty: context; Tm: context, type
};

class ExternalView {
 public:
  /// The four internal sorts are read from `sig` under the names `Ctx`,
  /// `Hom`, `Ty` and `Tm`.
  explicit ExternalView(Signature sig, kernel::Flags flags = {});
  /// Throws OracleError for open or ill-sorted expressions and for terms of
  /// any other type.
  Classification classify(const Expr& e) const;
  const Signature& signature() const { return sig_; }

 private:
  Signature sig_;
  kernel::Flags flags_;
};

/// Kernel source postulating the sorts and a few operators of an internal cwf.
std::string internal_cwf_source();
ExternalView internal_cwf();

}  // namespace gatcwf::oracle
