#pragma once

// Raw and elaborated expressions of the explicit-substitution calculus.
//
// One node type covers all four syntactic categories (contexts, substitutions,
// types, terms). The category of a node is fixed by its kind except for
// `Ref`/`Const`, `Subst` and `LSubst`, whose category follows from their
// operand. Annotation children (the official arguments usually left implicit,
// such as the context of `id`) may be null in parsed input; elaboration fills
// them in.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gatcwf/levels.hpp"

namespace gatcwf {

enum class Mode { Tower, Up };

std::string to_string(Mode mode);

/// A universe index: an external natural in the tower theory, a level term
/// in the polymorphic theory.
class UIdx {
 public:
  UIdx() : value_(std::uint32_t{0}) {}
  explicit UIdx(std::uint32_t nat) : value_(nat) {}
  explicit UIdx(levels::LevelTerm level) : value_(std::move(level)) {}

  bool is_nat() const { return std::holds_alternative<std::uint32_t>(value_); }
  std::uint32_t nat() const { return std::get<std::uint32_t>(value_); }
  const levels::LevelTerm& level() const { return std::get<levels::LevelTerm>(value_); }

 private:
  std::variant<std::uint32_t, levels::LevelTerm> value_;
};

/// `l \/ l'` in either theory (max for naturals).
UIdx join(const UIdx& a, const UIdx& b);
/// Equality up to the level normal form.
bool uidx_equal(const UIdx& a, const UIdx& b);
UIdx canonical(const UIdx& u);
std::string to_string(const UIdx& u);

/// Level substitutions as written in source files. Elaboration evaluates them
/// to a concrete `levels::LevelSubst` once the ambient level context is known.
struct LSubstExpr;
using LSubstExprPtr = std::shared_ptr<const LSubstExpr>;

struct LSubstExpr {
  enum class Kind { Id, P, Empty, Pair, Comp, Tuple };
  Kind kind;
  LSubstExprPtr lhs;                         // Pair: sigma, Comp: outer
  LSubstExprPtr rhs;                         // Comp: inner
  std::vector<levels::LevelTerm> entries;    // Pair: [l], Tuple: images of a0, a1, ...
};

/// Evaluate at source size `source` (the level context the substitution is used in).
levels::LevelSubst evaluate(const LSubstExpr& s, levels::LevelCtx source);
bool lsubst_expr_equal(const LSubstExpr& a, const LSubstExpr& b);
std::string to_string(const LSubstExpr& s);

enum class Kind {
  // contexts
  Unit,     // 1                        annotation: level context size (n)
  Ext,      // G . A                    args: G, A
  // substitutions
  Id,       // id(G)                    args: G?
  Comp,     // g o d                    args: g, d
  Empty,    // <>(G)                    args: G?
  Pair,     // < g, a ; A >             args: g, a, A?
  P,        // p(G, A)                  args: G?, A?
  // types
  Pi,       // Pi(A, B)                 args: A, B
  Univ,     // U(l ; G)                 args: G?          levels: l
  El,       // El(l, a)                 args: a           levels: l
  Forall,   // forall(B ; G)            args: B, G?
  // terms
  Q,        // q(G, A)                  args: G?, A?
  Lam,      // lam(b)                   args: b
  App,      // app(c, a)                args: c, a
  PiCode,   // pi{l,l'}(a, b)           args: a, b        levels: l, l'
  PiCodeCumul,  // pi{l}(a, b)          args: a, b        levels: l
  UCode,    // ucode{l,m}(G)            args: G?          levels: l, m
  Lift,     // lift{l,m}(a)             args: a           levels: l, m
  LLam,     // llam(b ; G)              args: b, G?
  LApp,     // lapp(c, l)               args: c           levels: l
  // shared
  Subst,    // x[g]                     args: x, g
  LSubst,   // x[@s]                    args: x           lsubst or lsubst_expr
  Ref,      // name as written; resolved by elaboration
  Const,    // postulated constant
};

std::string to_string(Kind kind);

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  std::vector<Expr> args;
  std::vector<UIdx> levels;
  std::string name;                         // Ref, Const
  std::optional<std::uint32_t> level_ctx;   // Unit
  LSubstExprPtr lsubst_expr;                // LSubst as parsed
  std::optional<levels::LevelSubst> lsubst; // LSubst after elaboration
};

Expr make(Kind kind, std::vector<Expr> args = {}, std::vector<UIdx> levels = {});

// Constructors for the elaborated (fully annotated) form.
Expr unit(std::optional<std::uint32_t> n);
Expr ext(Expr ctx, Expr ty);
Expr id(Expr ctx);
Expr comp(Expr g, Expr d);
Expr empty(Expr ctx);
Expr pair(Expr g, Expr a, Expr ty);
Expr proj(Expr ctx, Expr ty);
Expr pi(Expr a, Expr b);
Expr univ(UIdx l, Expr ctx);
Expr el(UIdx l, Expr a);
Expr forall(Expr b, Expr ctx);
Expr var(Expr ctx, Expr ty);
Expr lam(Expr b);
Expr app(Expr c, Expr a);
Expr pi_code(UIdx l, UIdx l2, Expr a, Expr b);
Expr pi_code_cumul(UIdx l, Expr a, Expr b);
Expr ucode(UIdx l, UIdx m, Expr ctx);
Expr lift(UIdx l, UIdx m, Expr a);
Expr llam(Expr b, Expr ctx);
Expr lapp(Expr c, UIdx l);
Expr subst(Expr x, Expr g);
Expr lsubst(Expr x, levels::LevelSubst sigma);
Expr lsubst_raw(Expr x, LSubstExprPtr sigma);
Expr ref(std::string name);
Expr constant(std::string name);

/// Copy of `e` with child `i` replaced.
Expr with_arg(const Expr& e, std::size_t i, Expr child);
Expr with_args(const Expr& e, std::vector<Expr> args);
Expr with_levels(const Expr& e, std::vector<UIdx> levels);

/// Structural equality; level slots and level substitutions compare by normal form.
bool equal(const Expr& a, const Expr& b);
std::size_t size(const Expr& e);
/// Universe-level bookkeeping: every level slot replaced by its canonical form.
Expr canonical_levels(const Expr& e);

/// The surface constructs that only exist in the polymorphic theory.
bool is_up_only(Kind kind);

// ---------------------------------------------------------------------------
// Sorts and declarations

enum class SortKind { Ctx, Hom, Ty, Tm };

/// `ctx`, `hom(src, tgt)`, `ty(ctx)` or `tm(ctx, type)`. Expression slots are
/// used according to the kind. `level_ctx` is the `n` index (0 in the tower).
struct Sort {
  SortKind kind = SortKind::Ctx;
  std::uint32_t level_ctx = 0;
  Expr ctx;   // Hom: source; Ty, Tm: context
  Expr tgt;   // Hom: target
  Expr type;  // Tm: type
};

std::string to_string(const Sort& s);

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct Decl {
  enum class Kind { LevelCtx, PostulateCtx, PostulateTy, PostulateTm, PostulateHom, Def, Check, CheckEq };
  Kind kind;
  std::string name;              // postulate/def name, or check label
  SourcePos pos;
  std::uint32_t level_ctx = 0;   // LevelCtx
  Expr lhs;                      // def body, check subject, check-eq lhs, postulate type/ctx
  Expr rhs;                      // check-eq rhs, postulate tm context, postulate hom target
  std::optional<Sort> sort;      // check, check-eq, annotated def
};

// ---------------------------------------------------------------------------
// Parsing and printing

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Thrown for a construct that does not exist in the selected theory.
class ModeError : public std::runtime_error {
 public:
  ModeError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

std::vector<Decl> parse(const std::string& text, Mode mode);
Expr parse_expr(const std::string& text, Mode mode);
Sort parse_sort(const std::string& text, Mode mode);

std::string print(const Expr& e);
std::string print(const Decl& d);
std::string print(const std::vector<Decl>& decls);

}  // namespace gatcwf
