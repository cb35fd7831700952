#include "gatcwf/levels.hpp"

#include <algorithm>
#include <sstream>

namespace gatcwf::levels {

LevelTerm var(std::uint32_t index) {
  return std::make_shared<const LevelNode>(LevelNode{LevelNode::Tag::Var, index, nullptr, nullptr});
}

LevelTerm next(LevelTerm arg) {
  return std::make_shared<const LevelNode>(LevelNode{LevelNode::Tag::Next, 0, std::move(arg), nullptr});
}

LevelTerm join(LevelTerm lhs, LevelTerm rhs) {
  return std::make_shared<const LevelNode>(
      LevelNode{LevelNode::Tag::Join, 0, std::move(lhs), std::move(rhs)});
}

LevelNF::LevelNF(Atoms atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("level normal form must have at least one atom");
}

LevelNF LevelNF::join(const LevelNF& other) const {
  Atoms merged = atoms_;
  for (auto [v, p] : other.atoms_) {
    auto [it, inserted] = merged.emplace(v, p);
    if (!inserted) it->second = std::max(it->second, p);
  }
  return LevelNF(std::move(merged));
}

LevelNF LevelNF::next() const {
  Atoms bumped = atoms_;
  for (auto& [v, p] : bumped) ++p;
  return LevelNF(std::move(bumped));
}

LevelTerm LevelNF::to_term() const {
  std::vector<LevelTerm> parts;
  for (auto [v, p] : atoms_) {
    LevelTerm t = var(v);
    for (std::uint32_t i = 0; i < p; ++i) t = levels::next(t);
    parts.push_back(std::move(t));
  }
  LevelTerm acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = levels::join(*it, acc);
  return acc;
}

LevelSubst::LevelSubst(LevelCtx source, std::vector<LevelTerm> entries)
    : source_(source), entries_(std::move(entries)) {}

void check_scope(LevelCtx n, const LevelTerm& l) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      if (l->index >= n.size) {
        throw ScopeError("level variable a" + std::to_string(l->index) + " is not bound in a level context of size " +
                         std::to_string(n.size));
      }
      return;
    case LevelNode::Tag::Next:
      check_scope(n, l->lhs);
      return;
    case LevelNode::Tag::Join:
      check_scope(n, l->lhs);
      check_scope(n, l->rhs);
      return;
  }
}

LevelNF normal_form(const LevelTerm& l) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      return LevelNF({{l->index, 0}});
    case LevelNode::Tag::Next:
      return normal_form(l->lhs).next();
    case LevelNode::Tag::Join:
      return normal_form(l->lhs).join(normal_form(l->rhs));
  }
  throw std::logic_error("bad level node");
}

LevelNF normalize(LevelCtx n, const LevelTerm& l) {
  check_scope(n, l);
  return normal_form(l);
}

bool level_eq(LevelCtx n, const LevelTerm& l, const LevelTerm& r) {
  return normalize(n, l) == normalize(n, r);
}

std::optional<LeqWitness> leq_check(LevelCtx n, const LevelTerm& l, const LevelTerm& r) {
  LevelNF a = normalize(n, l);
  if (a != normalize(n, r)) return std::nullopt;
  return LeqWitness{std::move(a)};
}

std::optional<LeqWitness> lt_check(LevelCtx n, const LevelTerm& l, const LevelTerm& m) {
  return leq_check(n, join(next(l), m), m);
}

LevelTerm canonical(const LevelTerm& l) { return normal_form(l).to_term(); }

std::uint32_t scope_size(const LevelTerm& l) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      return l->index + 1;
    case LevelNode::Tag::Next:
      return scope_size(l->lhs);
    case LevelNode::Tag::Join:
      return std::max(scope_size(l->lhs), scope_size(l->rhs));
  }
  return 0;
}

LevelTerm lsubst_apply(const LevelSubst& sigma, const LevelTerm& l) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      if (l->index >= sigma.entries().size()) {
        throw ScopeError("level variable a" + std::to_string(l->index) + " is outside the domain of a substitution of length " +
                         std::to_string(sigma.entries().size()));
      }
      return sigma.entries()[l->index];
    case LevelNode::Tag::Next:
      return next(lsubst_apply(sigma, l->lhs));
    case LevelNode::Tag::Join:
      return join(lsubst_apply(sigma, l->lhs), lsubst_apply(sigma, l->rhs));
  }
  throw std::logic_error("bad level node");
}

LevelSubst lsubst_id(LevelCtx n) {
  std::vector<LevelTerm> entries;
  for (std::uint32_t i = 0; i < n.size; ++i) entries.push_back(var(i));
  return LevelSubst(n, std::move(entries));
}

LevelSubst lsubst_comp(const LevelSubst& sigma, const LevelSubst& tau) {
  if (tau.target() != sigma.source()) {
    throw ArityError("cannot compose level substitutions: inner target " + std::to_string(tau.target().size) +
                     " differs from outer source " + std::to_string(sigma.source().size));
  }
  std::vector<LevelTerm> entries;
  for (const auto& e : sigma.entries()) entries.push_back(lsubst_apply(tau, e));
  return LevelSubst(tau.source(), std::move(entries));
}

LevelSubst lsubst_empty(LevelCtx n) { return LevelSubst(n, {}); }

LevelSubst lsubst_pair(const LevelSubst& sigma, LevelTerm l) {
  check_scope(sigma.source(), l);
  std::vector<LevelTerm> entries;
  entries.reserve(sigma.entries().size() + 1);
  entries.push_back(std::move(l));
  entries.insert(entries.end(), sigma.entries().begin(), sigma.entries().end());
  return LevelSubst(sigma.source(), std::move(entries));
}

LevelSubst lsubst_p(LevelCtx n) {
  std::vector<LevelTerm> entries;
  for (std::uint32_t i = 0; i < n.size; ++i) entries.push_back(var(i + 1));
  return LevelSubst({n.size + 1}, std::move(entries));
}

LevelTerm lsubst_q(LevelCtx) { return var(0); }

LevelSubst lsubst_lift(const LevelSubst& sigma) {
  return lsubst_pair(lsubst_comp(sigma, lsubst_p(sigma.source())), var(0));
}

bool lsubst_eq(const LevelSubst& a, const LevelSubst& b) {
  if (a.source() != b.source() || a.target() != b.target()) return false;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    if (normal_form(a.entries()[i]) != normal_form(b.entries()[i])) return false;
  }
  return true;
}

bool is_identity(const LevelSubst& sigma) {
  return sigma.source() == sigma.target() && lsubst_eq(sigma, lsubst_id(sigma.source()));
}

LevelSubst canonical(const LevelSubst& sigma) {
  std::vector<LevelTerm> entries;
  for (const auto& e : sigma.entries()) entries.push_back(canonical(e));
  return LevelSubst(sigma.source(), std::move(entries));
}

LevelTerm shift(const LevelTerm& l, std::uint32_t cutoff, std::int32_t by) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      return l->index >= cutoff ? var(static_cast<std::uint32_t>(static_cast<std::int64_t>(l->index) + by)) : l;
    case LevelNode::Tag::Next:
      return next(shift(l->lhs, cutoff, by));
    case LevelNode::Tag::Join:
      return join(shift(l->lhs, cutoff, by), shift(l->rhs, cutoff, by));
  }
  return l;
}

std::optional<LevelTerm> strengthen(const LevelTerm& l, std::uint32_t index) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      if (l->index == index) return std::nullopt;
      return l->index > index ? var(l->index - 1) : l;
    case LevelNode::Tag::Next: {
      auto a = strengthen(l->lhs, index);
      if (!a) return std::nullopt;
      return next(*a);
    }
    case LevelNode::Tag::Join: {
      auto a = strengthen(l->lhs, index);
      if (!a) return std::nullopt;
      auto b = strengthen(l->rhs, index);
      if (!b) return std::nullopt;
      return join(*a, *b);
    }
  }
  return std::nullopt;
}

bool structurally_equal(const LevelTerm& a, const LevelTerm& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case LevelNode::Tag::Var:
      return a->index == b->index;
    case LevelNode::Tag::Next:
      return structurally_equal(a->lhs, b->lhs);
    case LevelNode::Tag::Join:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
  return false;
}

std::size_t size(const LevelTerm& l) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      return 1;
    case LevelNode::Tag::Next:
      return 1 + size(l->lhs);
    case LevelNode::Tag::Join:
      return 1 + size(l->lhs) + size(l->rhs);
  }
  return 0;
}

namespace {

// Join binds loosest and is right-associative in the printed form; a join on
// the left or under a successor needs parentheses.
void render(std::ostream& os, const LevelTerm& l) {
  switch (l->tag) {
    case LevelNode::Tag::Var:
      os << 'a' << l->index;
      return;
    case LevelNode::Tag::Next:
      if (l->lhs->tag == LevelNode::Tag::Join) {
        os << '(';
        render(os, l->lhs);
        os << ')';
      } else {
        render(os, l->lhs);
      }
      os << "^+";
      return;
    case LevelNode::Tag::Join:
      if (l->lhs->tag == LevelNode::Tag::Join) {
        os << '(';
        render(os, l->lhs);
        os << ')';
      } else {
        render(os, l->lhs);
      }
      os << " \\/ ";
      render(os, l->rhs);
      return;
  }
}

}  // namespace

std::string to_string(const LevelTerm& l) {
  std::ostringstream os;
  render(os, l);
  return os.str();
}

std::string to_string(const LevelNF& nf) { return to_string(nf.to_term()); }

std::string to_string(const LevelSubst& sigma) {
  std::string out = "(";
  for (std::size_t i = 0; i < sigma.entries().size(); ++i) {
    if (i) out += ", ";
    out += to_string(sigma.entries()[i]);
  }
  return out + ")";
}

const std::vector<std::string>& law_names() {
  static const std::vector<std::string> names = {
      "lcomp-id-l", "lcomp-id-r", "lcomp-assoc", "lsub-lid",  "lsub-lcomp", "lid-zero",
      "lempty-comp", "lp-pair",   "lq-pair",     "lpair-comp", "lid-succ",
      "join-assoc", "join-comm",  "join-idem",   "join-next", "next-join",
      "join-lsub",  "next-lsub",
  };
  return names;
}

const std::vector<std::pair<std::string, int>>& operator_table() {
  static const std::vector<std::pair<std::string, int>> ops = {
      {"lid", 1},  {"lcomp", 5}, {"lsub", 4}, {"lzero", 0}, {"lempty", 1}, {"lsucc", 1},
      {"lpair", 4}, {"lp", 1},    {"lq", 1},   {"next", 2},  {"join", 3},   {"r", 2},
      {"leq-lsub", 6}, {"lt-trans", 6},
  };
  return ops;
}

}  // namespace gatcwf::levels
