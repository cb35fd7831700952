#include "gatcwf/kernel.hpp"

namespace gatcwf::kernel {

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::GuardFailed: return "GuardFailed";
    case ErrorKind::ModeViolation: return "ModeViolation";
    case ErrorKind::UnknownConversion: return "UnknownConversion";
    case ErrorKind::ScopeError: return "ScopeError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::CannotInfer: return "CannotInfer";
    case ErrorKind::UniverseOutOfRange: return "UniverseOutOfRange";
    case ErrorKind::NotConvertible: return "NotConvertible";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "?";
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Ok: return "OK";
    case Status::Refuted: return "Refuted";
    case Status::Unknown: return "Unknown";
  }
  return "?";
}

bool sort_equal(const Sort& a, const Sort& b) {
  if (a.kind != b.kind || a.level_ctx != b.level_ctx) return false;
  switch (a.kind) {
    case SortKind::Ctx: return true;
    case SortKind::Hom: return equal(a.ctx, b.ctx) && equal(a.tgt, b.tgt);
    case SortKind::Ty: return equal(a.ctx, b.ctx);
    case SortKind::Tm: return equal(a.ctx, b.ctx) && equal(a.type, b.type);
  }
  return false;
}

namespace {

Sort tm_sort(std::uint32_t n, Expr ctx, Expr type) { return Sort{SortKind::Tm, n, std::move(ctx), {}, std::move(type)}; }

const char* kind_word(SortKind k) {
  switch (k) {
    case SortKind::Ctx: return "a context";
    case SortKind::Hom: return "a substitution";
    case SortKind::Ty: return "a type";
    case SortKind::Tm: return "a term";
  }
  return "?";
}

class Elaborator {
 public:
  Elaborator(const Signature& sig, const Flags& flags)
      : sig_(sig), flags_(flags), engine_(sig, conv::Options{flags.fuel, false}) {}

  Typed elab(const Expr& e, std::uint32_t n, const Hint& hint) {
    Trail t(this, e->kind == Kind::Ref ? e->name : to_string(e->kind));
    switch (e->kind) {
      case Kind::Ref:
      case Kind::Const: return elab_ref(e, n);
      case Kind::Unit: return {unit(n), Sort{SortKind::Ctx, n, {}, {}, {}}};
      case Kind::Ext: return elab_ext(e, n);
      case Kind::Id: return elab_id(e, n, hint);
      case Kind::Comp: return elab_comp(e, n, hint);
      case Kind::Empty: return elab_empty(e, n, hint);
      case Kind::Pair: return elab_pair(e, n, hint);
      case Kind::P: return elab_p(e, n, hint);
      case Kind::Q: return elab_q(e, n, hint);
      case Kind::Pi: return elab_pi(e, n, hint);
      case Kind::Univ: return elab_univ(e, n, hint);
      case Kind::El: return elab_el(e, n, hint);
      case Kind::Forall: return elab_forall(e, n, hint);
      case Kind::Lam: return elab_lam(e, n, hint);
      case Kind::App: return elab_app(e, n, hint);
      case Kind::PiCode: return elab_picode(e, n, hint, false);
      case Kind::PiCodeCumul: return elab_picode(e, n, hint, true);
      case Kind::UCode: return elab_ucode(e, n, hint);
      case Kind::Lift: return elab_lift(e, n, hint);
      case Kind::LLam: return elab_llam(e, n, hint);
      case Kind::LApp: return elab_lapp(e, n, hint);
      case Kind::Subst: return elab_subst(e, n, hint);
      case Kind::LSubst: return elab_lsubst(e, n);
    }
    fail(ErrorKind::SortMismatch, "unsupported expression");
  }

  Expr nf(const Expr& e) {
    try {
      return engine_.normalize(e).expr;
    } catch (const conv::FuelExhausted&) {
      fail(ErrorKind::UnknownConversion, "conversion fuel exhausted while normalizing a sort");
    }
  }

  Sort elab_sort(const Sort& raw, std::uint32_t n) {
    Sort s{raw.kind, n, {}, {}, {}};
    switch (raw.kind) {
      case SortKind::Ctx:
        break;
      case SortKind::Hom:
        s.ctx = expect_ctx(raw.ctx, n);
        s.tgt = expect_ctx(raw.tgt, n);
        break;
      case SortKind::Ty:
        s.ctx = expect_ctx(raw.ctx, n);
        break;
      case SortKind::Tm: {
        s.ctx = expect_ctx(raw.ctx, n);
        Typed a = expect_kind(raw.type, n, Hint{s.ctx, {}, {}}, SortKind::Ty);
        same(a.sort.ctx, s.ctx, "context of the type");
        s.type = nf(a.expr);
        break;
      }
    }
    return s;
  }

  Hint hint_of(const Sort& s) const { return Hint{s.ctx, s.tgt, s.type}; }

  void compare_sort(const Sort& actual, const Sort& expected) {
    if (actual.kind != expected.kind) {
      fail(ErrorKind::SortMismatch, std::string("expected ") + kind_word(expected.kind) + ", found " +
                                        kind_word(actual.kind) + " of sort " + to_string(actual));
    }
    if (!sort_equal(actual, expected)) {
      fail(ErrorKind::SortMismatch, "expected sort " + to_string(expected) + ", found " + to_string(actual));
    }
  }

  [[noreturn]] void fail(ErrorKind kind, const std::string& message) const {
    std::string path;
    for (const auto& s : trail_) {
      if (!path.empty()) path += '/';
      path += s;
    }
    throw KernelError(kind, path, message);
  }

 private:
  struct Trail {
    Trail(Elaborator* el, std::string what) : el_(el) { el_->trail_.push_back(std::move(what)); }
    ~Trail() { el_->trail_.pop_back(); }
    Elaborator* el_;
  };

  // ---- helpers

  Typed expect_kind(const Expr& e, std::uint32_t n, const Hint& hint, SortKind k) {
    Typed t = elab(e, n, hint);
    if (t.sort.kind != k) {
      fail(ErrorKind::SortMismatch, std::string("expected ") + kind_word(k) + ", found " + kind_word(t.sort.kind) +
                                        " '" + print(e) + "'");
    }
    return t;
  }

  Expr expect_ctx(const Expr& e, std::uint32_t n) { return nf(expect_kind(e, n, {}, SortKind::Ctx).expr); }

  void same(const Expr& actual, const Expr& expected, const std::string& what) {
    if (!equal(actual, expected)) {
      fail(ErrorKind::SortMismatch, what + ": expected " + print(expected) + ", found " + print(actual));
    }
  }

  // Annotation slot, or the hinted value, or failure.
  Expr annot_ctx(const Expr& slot, const Expr& hinted, std::uint32_t n, const char* what) {
    if (slot) return expect_ctx(slot, n);
    if (hinted) return hinted;
    fail(ErrorKind::CannotInfer, std::string("cannot infer the context of ") + what + "; write it explicitly");
  }

  void check_mode_up(const char* what) const {
    if (flags_.mode != Mode::Up) fail(ErrorKind::ModeViolation, std::string(what) + " requires --mode up");
  }

  void check_cumulative(const char* what) const {
    if (!flags_.cumulative) fail(ErrorKind::ModeViolation, std::string(what) + " requires --cumulative");
  }

  void check_level(const UIdx& l, std::uint32_t n) const {
    if (flags_.mode == Mode::Tower) {
      if (!l.is_nat()) fail(ErrorKind::ModeViolation, "level terms require --mode up");
      if (flags_.max_universe && l.nat() >= *flags_.max_universe) {
        fail(ErrorKind::UniverseOutOfRange, "universe index out of range: " + std::to_string(l.nat()) +
                                                " (truncation has " + std::to_string(*flags_.max_universe) +
                                                " universes)");
      }
      return;
    }
    if (l.is_nat()) fail(ErrorKind::ModeViolation, "universe literals require --mode tower");
    try {
      levels::check_scope({n}, l.level());
    } catch (const levels::ScopeError& ex) {
      fail(ErrorKind::ScopeError, ex.what());
    }
  }

  void check_lt(const UIdx& l, const UIdx& m, std::uint32_t n) const {
    bool ok = l.is_nat() ? l.nat() < m.nat() : levels::lt_check({n}, l.level(), m.level()).has_value();
    if (!ok) fail(ErrorKind::GuardFailed, "guard " + to_string(l) + " < " + to_string(m) + " does not hold");
  }

  Expr univ_nf(const UIdx& l, const Expr& ctx) { return nf(univ(l, ctx)); }

  // ---- constructors

  Typed elab_ref(const Expr& e, std::uint32_t n) {
    const Entry* entry = sig_.find(e->name);
    if (!entry) fail(ErrorKind::UnknownName, "unknown name '" + e->name + "'");
    if (entry->sort.level_ctx != n) {
      fail(ErrorKind::SortMismatch, "'" + e->name + "' lives over level context " +
                                        std::to_string(entry->sort.level_ctx) + ", used over " + std::to_string(n) +
                                        "; apply a level substitution");
    }
    if (entry->kind == Entry::Kind::Definition) return {entry->body, entry->sort};
    return {constant(e->name), entry->sort};
  }

  Typed elab_ext(const Expr& e, std::uint32_t n) {
    Typed g = expect_kind(e->args[0], n, {}, SortKind::Ctx);
    Expr gn = nf(g.expr);
    Typed a = expect_kind(e->args[1], n, Hint{gn, {}, {}}, SortKind::Ty);
    same(a.sort.ctx, gn, "context of the extending type");
    return {ext(g.expr, a.expr), Sort{SortKind::Ctx, n, {}, {}, {}}};
  }

  Typed elab_id(const Expr& e, std::uint32_t n, const Hint& hint) {
    Expr g = annot_ctx(e->args[0], hint.ctx, n, "id");
    return {id(g), Sort{SortKind::Hom, n, g, g, {}}};
  }

  Typed elab_empty(const Expr& e, std::uint32_t n, const Hint& hint) {
    Expr g = annot_ctx(e->args[0], hint.ctx, n, "<>");
    return {empty(g), Sort{SortKind::Hom, n, g, unit(n), {}}};
  }

  Typed elab_comp(const Expr& e, std::uint32_t n, const Hint& hint) {
    std::optional<Typed> d;
    std::optional<Typed> g;
    try {
      d = expect_kind(e->args[1], n, Hint{hint.ctx, {}, {}}, SortKind::Hom);
    } catch (const KernelError& ex) {
      if (ex.kind() != ErrorKind::CannotInfer) throw;
      g = expect_kind(e->args[0], n, Hint{{}, hint.tgt, {}}, SortKind::Hom);
      d = expect_kind(e->args[1], n, Hint{hint.ctx, g->sort.ctx, {}}, SortKind::Hom);
    }
    if (!g) g = expect_kind(e->args[0], n, Hint{d->sort.tgt, hint.tgt, {}}, SortKind::Hom);
    same(g->sort.ctx, d->sort.tgt, "source of the left factor");
    return {comp(g->expr, d->expr), Sort{SortKind::Hom, n, d->sort.ctx, g->sort.tgt, {}}};
  }

  Typed elab_pair(const Expr& e, std::uint32_t n, const Hint& hint) {
    Typed g = expect_kind(e->args[0], n, Hint{hint.ctx, {}, {}}, SortKind::Hom);
    Expr ty;
    Expr ty_nf;
    if (e->args[2]) {
      Typed t = expect_kind(e->args[2], n, Hint{g.sort.tgt, {}, {}}, SortKind::Ty);
      same(t.sort.ctx, g.sort.tgt, "context of the pair's type");
      ty = t.expr;
      ty_nf = nf(ty);
    } else if (hint.tgt) {
      auto ext_parts = as_ext(hint.tgt);
      if (!ext_parts) fail(ErrorKind::SortMismatch, "a pair targets an extended context, expected " + print(hint.tgt));
      ty = ext_parts->second;
      ty_nf = ty;
    }
    Expr expected_a = ty ? nf(subst(ty, g.expr)) : Expr{};
    Typed a = expect_kind(e->args[1], n, Hint{g.sort.ctx, {}, expected_a}, SortKind::Tm);
    same(a.sort.ctx, g.sort.ctx, "context of the pair's term");
    if (!ty) {
      // < id, a > needs no annotation: A[id] is the type of a.
      if (nf(g.expr)->kind != Kind::Id) {
        fail(ErrorKind::CannotInfer, "cannot infer the type of the pair's last component; write < g, a; A >");
      }
      ty = a.sort.type;
      ty_nf = ty;
      expected_a = ty;
    }
    same(a.sort.type, expected_a, "type of the pair's term");
    return {pair(g.expr, a.expr, ty), Sort{SortKind::Hom, n, g.sort.ctx, nf(ext(g.sort.tgt, ty_nf)), {}}};
  }

  std::pair<Expr, Expr> ext_annots(const Expr& e, std::uint32_t n, const Expr& hinted, const char* what) {
    if (e->args[0] || e->args[1]) {
      if (!e->args[0] || !e->args[1]) fail(ErrorKind::CannotInfer, std::string(what) + " takes both annotations");
      Expr g = expect_ctx(e->args[0], n);
      Typed a = expect_kind(e->args[1], n, Hint{g, {}, {}}, SortKind::Ty);
      same(a.sort.ctx, g, std::string("context of ") + what + "'s type");
      return {g, nf(a.expr)};
    }
    if (!hinted) fail(ErrorKind::CannotInfer, std::string("cannot infer the annotations of ") + what);
    auto parts = as_ext(hinted);
    if (!parts) fail(ErrorKind::SortMismatch, std::string(what) + " lives over an extended context, not " + print(hinted));
    return *parts;
  }

  Typed elab_p(const Expr& e, std::uint32_t n, const Hint& hint) {
    auto [g, a] = ext_annots(e, n, hint.ctx, "p");
    return {proj(g, a), Sort{SortKind::Hom, n, nf(ext(g, a)), g, {}}};
  }

  Typed elab_q(const Expr& e, std::uint32_t n, const Hint& hint) {
    auto [g, a] = ext_annots(e, n, hint.ctx, "q");
    return {var(g, a), tm_sort(n, nf(ext(g, a)), nf(subst(a, proj(g, a))))};
  }

  Typed elab_pi(const Expr& e, std::uint32_t n, const Hint& hint) {
    Typed a = expect_kind(e->args[0], n, Hint{hint.ctx, {}, {}}, SortKind::Ty);
    Expr inner = nf(ext(a.sort.ctx, a.expr));
    Typed b = expect_kind(e->args[1], n, Hint{inner, {}, {}}, SortKind::Ty);
    same(b.sort.ctx, inner, "context of the codomain");
    return {pi(a.expr, b.expr), Sort{SortKind::Ty, n, a.sort.ctx, {}, {}}};
  }

  Typed elab_univ(const Expr& e, std::uint32_t n, const Hint& hint) {
    check_level(e->levels[0], n);
    Expr g = annot_ctx(e->args[0], hint.ctx, n, "U");
    return {univ(e->levels[0], g), Sort{SortKind::Ty, n, g, {}, {}}};
  }

  Typed elab_el(const Expr& e, std::uint32_t n, const Hint& hint) {
    const UIdx& l = e->levels[0];
    check_level(l, n);
    Expr want = hint.ctx ? univ_nf(l, hint.ctx) : Expr{};
    Typed a = expect_kind(e->args[0], n, Hint{hint.ctx, {}, want}, SortKind::Tm);
    same(a.sort.type, univ_nf(l, a.sort.ctx), "type of the decoded code");
    return {el(l, a.expr), Sort{SortKind::Ty, n, a.sort.ctx, {}, {}}};
  }

  Typed elab_picode(const Expr& e, std::uint32_t n, const Hint& hint, bool cumulative) {
    if (cumulative) check_cumulative("pi{l}");
    const UIdx& l = e->levels[0];
    const UIdx& l2 = cumulative ? e->levels[0] : e->levels[1];
    check_level(l, n);
    check_level(l2, n);
    Expr want_a = hint.ctx ? univ_nf(l, hint.ctx) : Expr{};
    Typed a = expect_kind(e->args[0], n, Hint{hint.ctx, {}, want_a}, SortKind::Tm);
    Expr g = a.sort.ctx;
    same(a.sort.type, univ_nf(l, g), "type of the domain code");
    Expr inner = nf(ext(g, el(l, a.expr)));
    Expr want_b = univ_nf(l2, inner);
    Typed b = expect_kind(e->args[1], n, Hint{inner, {}, want_b}, SortKind::Tm);
    same(b.sort.ctx, inner, "context of the codomain code");
    same(b.sort.type, want_b, "type of the codomain code");
    if (cumulative) return {pi_code_cumul(l, a.expr, b.expr), tm_sort(n, g, univ_nf(l, g))};
    return {pi_code(l, l2, a.expr, b.expr), tm_sort(n, g, univ_nf(join(l, l2), g))};
  }

  Typed elab_ucode(const Expr& e, std::uint32_t n, const Hint& hint) {
    const UIdx& l = e->levels[0];
    const UIdx& m = e->levels[1];
    check_level(l, n);
    check_level(m, n);
    check_lt(l, m, n);
    Expr g = annot_ctx(e->args[0], hint.ctx, n, "ucode");
    return {ucode(l, m, g), tm_sort(n, g, univ_nf(m, g))};
  }

  Typed elab_lift(const Expr& e, std::uint32_t n, const Hint& hint) {
    check_cumulative("lift");
    const UIdx& l = e->levels[0];
    const UIdx& m = e->levels[1];
    check_level(l, n);
    check_level(m, n);
    check_lt(l, m, n);
    Expr want = hint.ctx ? univ_nf(l, hint.ctx) : Expr{};
    Typed a = expect_kind(e->args[0], n, Hint{hint.ctx, {}, want}, SortKind::Tm);
    same(a.sort.type, univ_nf(l, a.sort.ctx), "type of the lifted code");
    return {lift(l, m, a.expr), tm_sort(n, a.sort.ctx, univ_nf(m, a.sort.ctx))};
  }

  Expr weaken_ctx(const Expr& g, std::uint32_t n) { return nf(lsubst(g, levels::lsubst_p({n}))); }

  // Recover G from G[@lp] when the context was left implicit.
  Expr unweaken_ctx(const Expr& inner) {
    auto g = conv::strengthen_level(inner, 0);
    if (!g) fail(ErrorKind::CannotInfer, "cannot infer the context of a level binder; write it explicitly");
    return nf(*g);
  }

  Typed elab_forall(const Expr& e, std::uint32_t n, const Hint& hint) {
    check_mode_up("forall");
    Expr g = e->args[1] ? expect_ctx(e->args[1], n) : hint.ctx;
    Typed b = expect_kind(e->args[0], n + 1, Hint{g ? weaken_ctx(g, n) : Expr{}, {}, {}}, SortKind::Ty);
    if (!g) g = unweaken_ctx(b.sort.ctx);
    same(b.sort.ctx, weaken_ctx(g, n), "context of the quantified type");
    return {forall(b.expr, g), Sort{SortKind::Ty, n, g, {}, {}}};
  }

  Typed elab_lam(const Expr& e, std::uint32_t n, const Hint& hint) {
    Expr inner;
    Expr body_type;
    if (hint.ctx && hint.type && hint.type->kind == Kind::Pi) {
      inner = nf(ext(hint.ctx, hint.type->args[0]));
      body_type = hint.type->args[1];
    }
    Typed b = expect_kind(e->args[0], n, Hint{inner, {}, body_type}, SortKind::Tm);
    auto parts = as_ext(b.sort.ctx);
    if (!parts) fail(ErrorKind::SortMismatch, "the body of lam must live over an extended context, found " + print(b.sort.ctx));
    return {lam(b.expr), tm_sort(n, parts->first, nf(pi(parts->second, b.sort.type)))};
  }

  Typed elab_app(const Expr& e, std::uint32_t n, const Hint& hint) {
    Typed c;
    try {
      c = expect_kind(e->args[0], n, Hint{hint.ctx, {}, {}}, SortKind::Tm);
    } catch (const KernelError& ex) {
      if (ex.kind() != ErrorKind::CannotInfer) throw;
      // Argument first: its type fixes the domain of the function.
      Typed a = expect_kind(e->args[1], n, Hint{hint.ctx, {}, {}}, SortKind::Tm);
      c = expect_kind(e->args[0], n, Hint{a.sort.ctx, {}, pi(a.sort.type, nullptr)}, SortKind::Tm);
    }
    const Expr& t = c.sort.type;
    if (t->kind != Kind::Pi) fail(ErrorKind::SortMismatch, "applied term has type " + print(t) + ", not a Pi type");
    Typed a = expect_kind(e->args[1], n, Hint{c.sort.ctx, {}, t->args[0]}, SortKind::Tm);
    same(a.sort.ctx, c.sort.ctx, "context of the argument");
    same(a.sort.type, t->args[0], "type of the argument");
    Expr result = nf(subst(t->args[1], pair(id(c.sort.ctx), a.expr, t->args[0])));
    return {app(c.expr, a.expr), tm_sort(n, c.sort.ctx, result)};
  }

  Typed elab_llam(const Expr& e, std::uint32_t n, const Hint& hint) {
    check_mode_up("llam");
    Expr g = e->args[1] ? expect_ctx(e->args[1], n) : hint.ctx;
    Expr body_type;
    if (hint.type && hint.type->kind == Kind::Forall) body_type = hint.type->args[0];
    Typed b = expect_kind(e->args[0], n + 1, Hint{g ? weaken_ctx(g, n) : Expr{}, {}, body_type}, SortKind::Tm);
    if (!g) g = unweaken_ctx(b.sort.ctx);
    same(b.sort.ctx, weaken_ctx(g, n), "context of the level abstraction's body");
    return {llam(b.expr, g), tm_sort(n, g, nf(forall(b.sort.type, g)))};
  }

  Typed elab_lapp(const Expr& e, std::uint32_t n, const Hint& hint) {
    check_mode_up("lapp");
    const UIdx& l = e->levels[0];
    check_level(l, n);
    Typed c = expect_kind(e->args[0], n, Hint{hint.ctx, {}, {}}, SortKind::Tm);
    const Expr& t = c.sort.type;
    if (t->kind != Kind::Forall) fail(ErrorKind::SortMismatch, "level-applied term has type " + print(t) + ", not forall");
    auto inst = levels::lsubst_pair(levels::lsubst_id({n}), l.level());
    return {lapp(c.expr, l), tm_sort(n, c.sort.ctx, nf(lsubst(t->args[0], inst)))};
  }

  Typed elab_subst(const Expr& e, std::uint32_t n, const Hint& hint) {
    const Expr& x_raw = e->args[0];
    const Expr& g_raw = e->args[1];
    std::optional<Typed> x;
    try {
      x = elab(x_raw, n, {});
    } catch (const KernelError& ex) {
      if (ex.kind() != ErrorKind::CannotInfer) throw;
    }
    Typed g = expect_kind(g_raw, n, Hint{hint.ctx, x ? x->sort.ctx : Expr{}, {}}, SortKind::Hom);
    if (!x) x = elab(x_raw, n, Hint{g.sort.tgt, {}, {}});
    switch (x->sort.kind) {
      case SortKind::Ctx:
      case SortKind::Hom:
        fail(ErrorKind::SortMismatch, std::string("substitution applies to types and terms, not to ") +
                                          kind_word(x->sort.kind) + "; use 'o' to compose");
      case SortKind::Ty:
        same(x->sort.ctx, g.sort.tgt, "target of the substitution");
        return {subst(x->expr, g.expr), Sort{SortKind::Ty, n, g.sort.ctx, {}, {}}};
      case SortKind::Tm:
        same(x->sort.ctx, g.sort.tgt, "target of the substitution");
        return {subst(x->expr, g.expr), tm_sort(n, g.sort.ctx, nf(subst(x->sort.type, g.expr)))};
    }
    fail(ErrorKind::SortMismatch, "bad substitution");
  }

  Typed elab_lsubst(const Expr& e, std::uint32_t n) {
    check_mode_up("level substitution");
    std::optional<levels::LevelSubst> sigma = e->lsubst;
    if (!sigma) {
      try {
        sigma = evaluate(*e->lsubst_expr, {n});
      } catch (const levels::ScopeError& ex) {
        fail(ErrorKind::ScopeError, ex.what());
      } catch (const levels::ArityError& ex) {
        fail(ErrorKind::ScopeError, ex.what());
      }
    }
    if (sigma->source().size != n) fail(ErrorKind::ScopeError, "level substitution has the wrong source");
    Typed x = elab(e->args[0], sigma->target().size, {});
    const Sort& s = x.sort;
    Sort out{s.kind, n, {}, {}, {}};
    auto apply = [&](const Expr& part) { return part ? nf(lsubst(part, *sigma)) : part; };
    out.ctx = apply(s.ctx);
    out.tgt = apply(s.tgt);
    out.type = apply(s.type);
    return {lsubst(x.expr, *sigma), out};
  }

  const Signature& sig_;
  const Flags& flags_;
  conv::Engine engine_;
  std::vector<std::string> trail_;
};

}  // namespace

Typed synth(const Signature& sig, const Expr& e, std::uint32_t level_ctx, const Flags& flags) {
  Elaborator el(sig, flags);
  return el.elab(e, level_ctx, {});
}

Typed check(const Signature& sig, const Expr& e, std::uint32_t level_ctx, const Sort& expected, const Flags& flags) {
  Elaborator el(sig, flags);
  Typed t = el.elab(e, level_ctx, el.hint_of(expected));
  el.compare_sort(t.sort, expected);
  return t;
}

Sort elaborate_sort(const Signature& sig, const Sort& raw, std::uint32_t level_ctx, const Flags& flags) {
  Elaborator el(sig, flags);
  return el.elab_sort(raw, level_ctx);
}

namespace {

void add_entry(Session& s, const Decl& d, Entry entry) {
  if (s.sig.contains(d.name)) {
    throw KernelError(ErrorKind::DuplicateName, d.name, "'" + d.name + "' is already declared");
  }
  s.sig = s.sig.extend(std::move(entry));
}

void fill_error(DeclReport& r, ErrorKind kind, const std::string& path, const std::string& message) {
  r.error = kind;
  r.error_path = path;
  r.message = message;
  r.status = kind == ErrorKind::UnknownConversion ? Status::Unknown : Status::Refuted;
}

}  // namespace

DeclReport check_decl(Session& session, const Decl& d) {
  DeclReport r;
  r.name = d.name;
  r.kind = d.kind;
  r.pos = d.pos;
  const Flags& flags = session.flags;
  std::uint32_t n = session.level_ctx;
  try {
    Elaborator el(session.sig, flags);
    switch (d.kind) {
      case Decl::Kind::LevelCtx:
        if (flags.mode != Mode::Up && d.level_ctx != 0) {
          throw KernelError(ErrorKind::ModeViolation, "", "level contexts require --mode up");
        }
        session.level_ctx = d.level_ctx;
        break;
      case Decl::Kind::PostulateCtx: {
        Sort s{SortKind::Ctx, n, {}, {}, {}};
        add_entry(session, d, Entry{Entry::Kind::Postulate, d.name, s, {}});
        r.sort = s;
        break;
      }
      case Decl::Kind::PostulateTy: {
        Sort raw{SortKind::Ty, n, d.lhs, {}, {}};
        Sort s = el.elab_sort(raw, n);
        add_entry(session, d, Entry{Entry::Kind::Postulate, d.name, s, {}});
        r.sort = s;
        break;
      }
      case Decl::Kind::PostulateTm: {
        Sort raw{SortKind::Tm, n, d.rhs, {}, d.lhs};
        Sort s = el.elab_sort(raw, n);
        add_entry(session, d, Entry{Entry::Kind::Postulate, d.name, s, {}});
        r.sort = s;
        break;
      }
      case Decl::Kind::PostulateHom: {
        Sort raw{SortKind::Hom, n, d.lhs, d.rhs, {}};
        Sort s = el.elab_sort(raw, n);
        add_entry(session, d, Entry{Entry::Kind::Postulate, d.name, s, {}});
        r.sort = s;
        break;
      }
      case Decl::Kind::Def: {
        Typed t;
        if (d.sort) {
          Sort expected = el.elab_sort(*d.sort, n);
          t = el.elab(d.lhs, n, el.hint_of(expected));
          el.compare_sort(t.sort, expected);
        } else {
          t = el.elab(d.lhs, n, {});
        }
        add_entry(session, d, Entry{Entry::Kind::Definition, d.name, t.sort, t.expr});
        r.sort = t.sort;
        break;
      }
      case Decl::Kind::Check: {
        Sort expected = el.elab_sort(*d.sort, n);
        Typed t = el.elab(d.lhs, n, el.hint_of(expected));
        el.compare_sort(t.sort, expected);
        r.sort = t.sort;
        break;
      }
      case Decl::Kind::CheckEq: {
        Sort expected = el.elab_sort(*d.sort, n);
        Typed lhs = el.elab(d.lhs, n, el.hint_of(expected));
        el.compare_sort(lhs.sort, expected);
        Typed rhs = el.elab(d.rhs, n, el.hint_of(expected));
        el.compare_sort(rhs.sort, expected);
        r.sort = expected;
        conv::Options opts{flags.fuel, flags.trace};
        conv::Engine engine(session.sig, opts);
        conv::Comparison cmp;
        try {
          cmp.lhs = engine.normalize(lhs.expr);
          cmp.rhs = engine.normalize(rhs.expr);
          cmp.verdict = equal(cmp.lhs.expr, cmp.rhs.expr) ? conv::Verdict::Yes : conv::Verdict::No;
        } catch (const conv::FuelExhausted& ex) {
          cmp.verdict = conv::Verdict::Unknown;
          const auto& partial = ex.partial_trace();
          if (!cmp.lhs.expr) {
            cmp.lhs.trace = partial;
          } else {
            cmp.rhs.trace.assign(partial.begin() + static_cast<std::ptrdiff_t>(cmp.lhs.trace.size()), partial.end());
          }
        }
        r.steps = engine.steps_used();
        r.verdict = cmp.verdict;
        r.lhs_trace = std::move(cmp.lhs.trace);
        r.rhs_trace = std::move(cmp.rhs.trace);
        r.lhs_nf = cmp.lhs.expr;
        r.rhs_nf = cmp.rhs.expr;
        if (cmp.verdict == conv::Verdict::No) {
          fill_error(r, ErrorKind::NotConvertible, "",
                     "sides are not convertible: " + print(r.lhs_nf) + " vs " + print(r.rhs_nf));
        } else if (cmp.verdict == conv::Verdict::Unknown) {
          fill_error(r, ErrorKind::UnknownConversion, "", "conversion fuel exhausted");
        }
        break;
      }
    }
  } catch (const KernelError& ex) {
    fill_error(r, ex.kind(), ex.path(), ex.what());
    if (ex.kind() == ErrorKind::UnknownConversion) r.verdict = conv::Verdict::Unknown;
  }
  return r;
}

const std::vector<TypingRule>& typing_rules() {
  static const std::vector<TypingRule> rules = {
      {"one", 1, true, false},           {"ext", 3, true, false},       {"id", 2, true, false},
      {"comp", 6, true, false},          {"empty", 2, true, false},     {"pair", 6, true, false},
      {"p", 3, true, false},             {"q", 3, true, false},         {"ty-sub", 5, true, false},
      {"tm-sub", 6, true, false},        {"Pi", 4, true, false},        {"lam", 5, true, false},
      {"app", 6, true, false},           {"U", 3, true, false},         {"El", 4, true, false},
      {"pi-code", 6, true, false},       {"ucode", 5, true, false},     {"lift", 6, true, true},
      {"pi-code-cumul", 5, true, true},  {"forall", 3, false, false},   {"llam", 4, false, false},
      {"lapp", 5, false, false},         {"ctx-lsub", 4, false, false}, {"hom-lsub", 6, false, false},
      {"ty-lsub", 5, false, false},      {"tm-lsub", 6, false, false},
  };
  return rules;
}

}  // namespace gatcwf::kernel
