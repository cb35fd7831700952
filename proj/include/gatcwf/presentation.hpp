#pragma once

// Presentations of generalized algebraic theories as data: sort symbols,
// operator symbols and equations, with a bounded well-formedness checker.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gatcwf::presentation {

/// First-order term. A variable is a term without arguments whose head is
/// bound by the surrounding telescope.
struct Term {
  std::string head;
  std::vector<Term> args;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Binding {
  std::string name;
  Term sort;

  friend bool operator==(const Binding&, const Binding&) = default;
};

using Telescope = std::vector<Binding>;

struct SortDecl {
  std::string name;
  Telescope tele;

  friend bool operator==(const SortDecl&, const SortDecl&) = default;
};

struct OpDecl {
  std::string name;
  Telescope tele;
  Term result;

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

/// `name` is optional; a `.suffix` distinguishes instances of one rule.
struct EqDecl {
  std::string name;
  Telescope tele;
  Term lhs;
  Term rhs;
  Term sort;

  friend bool operator==(const EqDecl&, const EqDecl&) = default;
};

struct Decl {
  std::variant<SortDecl, OpDecl, EqDecl> item;
  int line = 0;

  friend bool operator==(const Decl& a, const Decl& b) { return a.item == b.item; }
};

struct Presentation {
  std::vector<Decl> decls;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Presentation parse(const std::string& text);
std::string print(const Term& t);
std::string print(const Presentation& p);
/// Display name of a declaration; unnamed equations get `eq@<index>`.
std::string decl_name(const Decl& d, std::size_t index);

enum class Verdict { Ok, SortMismatch, Unknown, DuplicateName, UnscopedVariable, ArityMismatch };
std::string to_string(Verdict v);

struct DeclVerdict {
  std::string name;
  int line = 0;
  Verdict verdict = Verdict::Ok;
  std::string message;
  std::size_t steps = 0;
};

struct CheckReport {
  std::vector<DeclVerdict> decls;
  bool all_ok() const;
  bool any_unknown() const;
};

/// Scoping, arity and sort checking. Sorts are compared after rewriting with
/// the equations declared so far, left to right, within `fuel` steps per
/// comparison. Permutative equations are sort-checked but never used as rules.
CheckReport check_presentation(const Presentation& p, std::size_t fuel = 10000);

/// The finitary fragment of the tower with universes `U_0 .. U_{n-1}`.
/// Declarations are grouped by stage so that `n` is a prefix of `n + 1`.
Presentation truncate_tower(std::uint32_t n, bool cumulative = false);

/// Mismatches between the presentation and the kernel's typing and rewrite
/// tables. Empty means the two agree. Level-indexed presentations are
/// compared in both directions; tower presentations only towards the kernel.
std::vector<std::string> cross_check(const Presentation& p);

/// Check files and print one line per declaration. Returns an exit code
/// following the checker's convention.
int run(const std::vector<std::string>& files, std::size_t fuel, bool cross, bool json, std::ostream& out,
        std::ostream& err);

}  // namespace gatcwf::presentation
