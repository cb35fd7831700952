#pragma once

// Sort synthesis and declaration checking for both theories.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatcwf/conversion.hpp"
#include "gatcwf/signature.hpp"
#include "gatcwf/syntax.hpp"

namespace gatcwf::kernel {

struct Flags {
  Mode mode = Mode::Tower;
  bool cumulative = false;
  /// Tower only: universe indices must be below this bound.
  std::optional<std::uint32_t> max_universe;
  std::size_t fuel = 10000;
  bool trace = false;
};

enum class ErrorKind {
  SortMismatch,
  GuardFailed,
  ModeViolation,
  UnknownConversion,
  ScopeError,
  DuplicateName,
  UnknownName,
  CannotInfer,
  UniverseOutOfRange,
  NotConvertible,
  ParseError,
};

std::string to_string(ErrorKind kind);

class KernelError : public std::runtime_error {
 public:
  KernelError(ErrorKind kind, std::string path, const std::string& message)
      : std::runtime_error(message), kind_(kind), path_(std::move(path)) {}
  ErrorKind kind() const { return kind_; }
  /// Constructor trail from the root of the checked expression.
  const std::string& path() const { return path_; }

 private:
  ErrorKind kind_;
  std::string path_;
};

/// An elaborated expression (all official arguments filled) with its sort.
struct Typed {
  Expr expr;
  Sort sort;
};

/// Expected-sort information used to fill elided arguments.
struct Hint {
  Expr ctx;   // Hom: source; Ty, Tm: context
  Expr tgt;   // Hom: target
  Expr type;  // Tm: type
};

Typed synth(const Signature& sig, const Expr& e, std::uint32_t level_ctx, const Flags& flags);
Typed check(const Signature& sig, const Expr& e, std::uint32_t level_ctx, const Sort& expected, const Flags& flags);
/// Elaborate the expressions embedded in a sort and normalize them.
Sort elaborate_sort(const Signature& sig, const Sort& raw, std::uint32_t level_ctx, const Flags& flags);
bool sort_equal(const Sort& a, const Sort& b);

enum class Status { Ok, Refuted, Unknown };
std::string to_string(Status s);

struct DeclReport {
  std::string name;
  Decl::Kind kind = Decl::Kind::Check;
  SourcePos pos;
  Status status = Status::Ok;
  std::optional<Sort> sort;
  std::optional<ErrorKind> error;
  std::string error_path;
  std::string message;
  conv::Verdict verdict = conv::Verdict::Yes;  // CheckEq only
  std::vector<conv::Step> lhs_trace;
  std::vector<conv::Step> rhs_trace;
  Expr lhs_nf;
  Expr rhs_nf;
  std::size_t steps = 0;
};

/// Checking state threaded through a file.
struct Session {
  Signature sig;
  std::uint32_t level_ctx = 0;
  Flags flags;
};

DeclReport check_decl(Session& session, const Decl& decl);

/// One entry per operator symbol the kernel types: name, number of official
/// arguments in the level-indexed theory, and whether it exists in the tower.
struct TypingRule {
  std::string name;
  int arity;
  bool in_tower;
  bool needs_cumulative;
};

const std::vector<TypingRule>& typing_rules();

}  // namespace gatcwf::kernel
