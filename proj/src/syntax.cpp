#include <stdexcept>

#include "gatcwf/syntax.hpp"

namespace gatcwf {

std::string to_string(Mode mode) { return mode == Mode::Tower ? "tower" : "up"; }

UIdx join(const UIdx& a, const UIdx& b) {
  if (a.is_nat() != b.is_nat()) throw std::logic_error("mixed universe index kinds");
  if (a.is_nat()) return UIdx(std::max(a.nat(), b.nat()));
  return UIdx(levels::join(a.level(), b.level()));
}

bool uidx_equal(const UIdx& a, const UIdx& b) {
  if (a.is_nat() != b.is_nat()) return false;
  if (a.is_nat()) return a.nat() == b.nat();
  return levels::normal_form(a.level()) == levels::normal_form(b.level());
}

UIdx canonical(const UIdx& u) { return u.is_nat() ? u : UIdx(levels::canonical(u.level())); }

std::string to_string(const UIdx& u) {
  return u.is_nat() ? std::to_string(u.nat()) : levels::to_string(u.level());
}

levels::LevelSubst evaluate(const LSubstExpr& s, levels::LevelCtx source) {
  using K = LSubstExpr::Kind;
  switch (s.kind) {
    case K::Id:
      return levels::lsubst_id(source);
    case K::P:
      if (source.size == 0) throw levels::ArityError("lp needs a nonempty level context");
      return levels::lsubst_p({source.size - 1});
    case K::Empty:
      return levels::lsubst_empty(source);
    case K::Pair:
      return levels::lsubst_pair(evaluate(*s.lhs, source), s.entries.at(0));
    case K::Comp: {
      auto inner = evaluate(*s.rhs, source);
      return levels::lsubst_comp(evaluate(*s.lhs, inner.target()), inner);
    }
    case K::Tuple:
      for (const auto& e : s.entries) levels::check_scope(source, e);
      return levels::LevelSubst(source, s.entries);
  }
  throw std::logic_error("bad level substitution");
}

bool lsubst_expr_equal(const LSubstExpr& a, const LSubstExpr& b) {
  if (a.kind != b.kind || a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (!levels::structurally_equal(a.entries[i], b.entries[i])) return false;
  }
  if (bool(a.lhs) != bool(b.lhs) || bool(a.rhs) != bool(b.rhs)) return false;
  if (a.lhs && !lsubst_expr_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !lsubst_expr_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

std::string to_string(const LSubstExpr& s) {
  using K = LSubstExpr::Kind;
  switch (s.kind) {
    case K::Id:
      return "lid";
    case K::P:
      return "lp";
    case K::Empty:
      return "<>";
    case K::Pair:
      return "< " + to_string(*s.lhs) + ", " + levels::to_string(s.entries.at(0)) + " >";
    case K::Comp: {
      std::string lhs = to_string(*s.lhs);
      if (s.lhs->kind == K::Comp) lhs = "(" + lhs + ")";
      return lhs + " o " + to_string(*s.rhs);
    }
    case K::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < s.entries.size(); ++i) {
        if (i) out += ", ";
        out += levels::to_string(s.entries[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::Unit: return "Unit";
    case Kind::Ext: return "Ext";
    case Kind::Id: return "Id";
    case Kind::Comp: return "Comp";
    case Kind::Empty: return "Empty";
    case Kind::Pair: return "Pair";
    case Kind::P: return "P";
    case Kind::Pi: return "Pi";
    case Kind::Univ: return "Univ";
    case Kind::El: return "El";
    case Kind::Forall: return "Forall";
    case Kind::Q: return "Q";
    case Kind::Lam: return "Lam";
    case Kind::App: return "App";
    case Kind::PiCode: return "PiCode";
    case Kind::PiCodeCumul: return "PiCodeCumul";
    case Kind::UCode: return "UCode";
    case Kind::Lift: return "Lift";
    case Kind::LLam: return "LLam";
    case Kind::LApp: return "LApp";
    case Kind::Subst: return "Subst";
    case Kind::LSubst: return "LSubst";
    case Kind::Ref: return "Ref";
    case Kind::Const: return "Const";
  }
  return "?";
}

Expr make(Kind kind, std::vector<Expr> args, std::vector<UIdx> levels) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->levels = std::move(levels);
  return n;
}

Expr unit(std::optional<std::uint32_t> n) {
  auto e = std::make_shared<Node>();
  e->kind = Kind::Unit;
  e->level_ctx = n;
  return e;
}
Expr ext(Expr ctx, Expr ty) { return make(Kind::Ext, {std::move(ctx), std::move(ty)}); }
Expr id(Expr ctx) { return make(Kind::Id, {std::move(ctx)}); }
Expr comp(Expr g, Expr d) { return make(Kind::Comp, {std::move(g), std::move(d)}); }
Expr empty(Expr ctx) { return make(Kind::Empty, {std::move(ctx)}); }
Expr pair(Expr g, Expr a, Expr ty) { return make(Kind::Pair, {std::move(g), std::move(a), std::move(ty)}); }
Expr proj(Expr ctx, Expr ty) { return make(Kind::P, {std::move(ctx), std::move(ty)}); }
Expr pi(Expr a, Expr b) { return make(Kind::Pi, {std::move(a), std::move(b)}); }
Expr univ(UIdx l, Expr ctx) { return make(Kind::Univ, {std::move(ctx)}, {std::move(l)}); }
Expr el(UIdx l, Expr a) { return make(Kind::El, {std::move(a)}, {std::move(l)}); }
Expr forall(Expr b, Expr ctx) { return make(Kind::Forall, {std::move(b), std::move(ctx)}); }
Expr var(Expr ctx, Expr ty) { return make(Kind::Q, {std::move(ctx), std::move(ty)}); }
Expr lam(Expr b) { return make(Kind::Lam, {std::move(b)}); }
Expr app(Expr c, Expr a) { return make(Kind::App, {std::move(c), std::move(a)}); }
Expr pi_code(UIdx l, UIdx l2, Expr a, Expr b) {
  return make(Kind::PiCode, {std::move(a), std::move(b)}, {std::move(l), std::move(l2)});
}
Expr pi_code_cumul(UIdx l, Expr a, Expr b) {
  return make(Kind::PiCodeCumul, {std::move(a), std::move(b)}, {std::move(l)});
}
Expr ucode(UIdx l, UIdx m, Expr ctx) { return make(Kind::UCode, {std::move(ctx)}, {std::move(l), std::move(m)}); }
Expr lift(UIdx l, UIdx m, Expr a) { return make(Kind::Lift, {std::move(a)}, {std::move(l), std::move(m)}); }
Expr llam(Expr b, Expr ctx) { return make(Kind::LLam, {std::move(b), std::move(ctx)}); }
Expr lapp(Expr c, UIdx l) { return make(Kind::LApp, {std::move(c)}, {std::move(l)}); }
Expr subst(Expr x, Expr g) { return make(Kind::Subst, {std::move(x), std::move(g)}); }

Expr lsubst(Expr x, levels::LevelSubst sigma) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LSubst;
  n->args = {std::move(x)};
  n->lsubst = std::move(sigma);
  return n;
}

Expr lsubst_raw(Expr x, LSubstExprPtr sigma) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LSubst;
  n->args = {std::move(x)};
  n->lsubst_expr = std::move(sigma);
  return n;
}

Expr ref(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ref;
  n->name = std::move(name);
  return n;
}

Expr constant(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->name = std::move(name);
  return n;
}

Expr with_arg(const Expr& e, std::size_t i, Expr child) {
  auto n = std::make_shared<Node>(*e);
  n->args.at(i) = std::move(child);
  return n;
}

Expr with_args(const Expr& e, std::vector<Expr> args) {
  auto n = std::make_shared<Node>(*e);
  n->args = std::move(args);
  return n;
}

Expr with_levels(const Expr& e, std::vector<UIdx> levels) {
  auto n = std::make_shared<Node>(*e);
  n->levels = std::move(levels);
  return n;
}

bool equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->level_ctx != b->level_ctx) return false;
  if (a->args.size() != b->args.size() || a->levels.size() != b->levels.size()) return false;
  for (std::size_t i = 0; i < a->levels.size(); ++i) {
    if (!uidx_equal(a->levels[i], b->levels[i])) return false;
  }
  if (a->lsubst.has_value() != b->lsubst.has_value()) return false;
  if (a->lsubst && !levels::lsubst_eq(*a->lsubst, *b->lsubst)) return false;
  if (bool(a->lsubst_expr) != bool(b->lsubst_expr)) return false;
  if (a->lsubst_expr && !lsubst_expr_equal(*a->lsubst_expr, *b->lsubst_expr)) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!equal(a->args[i], b->args[i])) return false;
  }
  return true;
}

std::size_t size(const Expr& e) {
  if (!e) return 0;
  std::size_t s = 1;
  for (const auto& c : e->args) s += size(c);
  return s;
}

Expr canonical_levels(const Expr& e) {
  if (!e) return e;
  auto n = std::make_shared<Node>(*e);
  for (auto& l : n->levels) l = canonical(l);
  if (n->lsubst) n->lsubst = levels::canonical(*n->lsubst);
  for (auto& c : n->args) c = canonical_levels(c);
  return n;
}

bool is_up_only(Kind kind) {
  return kind == Kind::Forall || kind == Kind::LLam || kind == Kind::LApp || kind == Kind::LSubst;
}

ParseError::ParseError(SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos) {}

ModeError::ModeError(SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos) {}

std::string to_string(const Sort& s) {
  std::string n = s.level_ctx ? "_" + std::to_string(s.level_ctx) : "";
  switch (s.kind) {
    case SortKind::Ctx:
      return "ctx" + n;
    case SortKind::Hom:
      return "hom" + n + "(" + print(s.ctx) + ", " + print(s.tgt) + ")";
    case SortKind::Ty:
      return "ty" + n + "(" + print(s.ctx) + ")";
    case SortKind::Tm:
      return "tm" + n + "(" + print(s.ctx) + ", " + print(s.type) + ")";
  }
  return "?";
}

}  // namespace gatcwf
