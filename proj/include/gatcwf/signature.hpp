#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "gatcwf/syntax.hpp"

namespace gatcwf {

/// A postulated constant or a transparent definition. Sorts are stored with
/// their embedded expressions in normal form.
struct Entry {
  enum class Kind { Postulate, Definition };
  Kind kind = Kind::Postulate;
  std::string name;
  Sort sort;
  Expr body;  // Definition only (elaborated)
};

/// Immutable map from names to entries; `extend` returns a new signature and
/// leaves the original untouched.
class Signature {
 public:
  Signature() : entries_(std::make_shared<const Map>()) {}

  const Entry* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  Signature extend(Entry entry) const;
  std::size_t size() const { return entries_->size(); }

 private:
  using Map = std::map<std::string, Entry>;
  explicit Signature(std::shared_ptr<const Map> m) : entries_(std::move(m)) {}
  std::shared_ptr<const Map> entries_;
};

// Syntactic sort information for elaborated expressions. These read the
// annotations elaboration fills in; they never normalize.

/// Which of the four sorts an expression inhabits.
SortKind category(const Signature& sig, const Expr& e);
/// The level context index `n` an expression lives over.
std::uint32_t level_of(const Signature& sig, const Expr& e);
/// Source context of a substitution.
Expr source_of(const Signature& sig, const Expr& g);
/// Target context of a substitution. Pairs need their type annotation.
Expr target_of(const Signature& sig, const Expr& g);
/// Context of a type or term.
Expr context_of(const Signature& sig, const Expr& e);

/// View a context as `G . A`, pushing level substitutions through extension.
std::optional<std::pair<Expr, Expr>> as_ext(const Expr& ctx);
/// Whether a context is `1` possibly under level substitutions.
bool is_unit_ctx(const Expr& ctx);

}  // namespace gatcwf
