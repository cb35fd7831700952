#include "gatcwf/oracle.hpp"

#include <sstream>

namespace gatcwf::oracle {

using K = Node::Kind;

namespace {

Term mk(K kind, std::vector<Term> args = {}, std::vector<UIdx> lv = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->levels = std::move(lv);
  return n;
}

Term with(const Term& x, std::vector<Term> args) {
  auto n = std::make_shared<Node>(*x);
  n->args = std::move(args);
  return n;
}

UIdx apply_level(const levels::LevelSubst& s, const UIdx& u) {
  if (u.is_nat()) return u;
  return UIdx(levels::lsubst_apply(s, u.level()));
}

bool same_base(const Base& a, const Base& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Base::Kind::Empty: return true;
    case Base::Kind::Weak: return a.weak == b.weak;
    case Base::Kind::Hom: return a.name == b.name && same_base(*a.inner, *b.inner);
  }
  return false;
}

}  // namespace

Term ty_pi(Term a, Term b) { return mk(K::Pi, {std::move(a), std::move(b)}); }
Term ty_univ(UIdx l) { return mk(K::Univ, {}, {std::move(l)}); }
Term ty_el(UIdx l, Term a) { return mk(K::El, {std::move(a)}, {std::move(l)}); }
Term ty_forall(Term b) { return mk(K::Forall, {std::move(b)}); }
Term ty_const(std::string name, Base base) {
  auto n = std::make_shared<Node>(Node{K::TyConst, {}, {}, 0, std::move(name), std::move(base)});
  return n;
}
Term tm_var(std::uint32_t k) {
  auto n = std::make_shared<Node>(Node{K::Var, {}, {}, k, {}, {}});
  return n;
}
Term tm_lam(Term domain, Term body) { return mk(K::Lam, {std::move(domain), std::move(body)}); }
Term tm_app(Term c, Term a) { return mk(K::App, {std::move(c), std::move(a)}); }
Term tm_pi_code(UIdx l, UIdx l2, Term a, Term b) {
  return mk(K::PiCode, {std::move(a), std::move(b)}, {std::move(l), std::move(l2)});
}
Term tm_pi_code_cumul(UIdx l, Term a, Term b) { return mk(K::PiCodeCumul, {std::move(a), std::move(b)}, {std::move(l)}); }
Term tm_ucode(UIdx l, UIdx m) { return mk(K::UCode, {}, {std::move(l), std::move(m)}); }
Term tm_lift(UIdx l, UIdx m, Term a) { return mk(K::Lift, {std::move(a)}, {std::move(l), std::move(m)}); }
Term tm_llam(Term body) { return mk(K::LLam, {std::move(body)}); }
Term tm_lapp(Term c, UIdx l) { return mk(K::LApp, {std::move(c)}, {std::move(l)}); }
Term tm_const(std::string name, Base base) {
  auto n = std::make_shared<Node>(Node{K::TmConst, {}, {}, 0, std::move(name), std::move(base)});
  return n;
}

bool is_type(const Term& t) {
  switch (t->kind) {
    case K::Pi:
    case K::Univ:
    case K::El:
    case K::Forall:
    case K::TyConst: return true;
    default: return false;
  }
}

bool same(const Term& a, const Term& b) {
  if (a->kind != b->kind || a->index != b->index || a->name != b->name) return false;
  if (a->args.size() != b->args.size() || a->levels.size() != b->levels.size()) return false;
  if ((a->kind == K::TyConst || a->kind == K::TmConst) && !same_base(a->base, b->base)) return false;
  for (std::size_t i = 0; i < a->levels.size(); ++i) {
    if (!uidx_equal(a->levels[i], b->levels[i])) return false;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!same(a->args[i], b->args[i])) return false;
  }
  return true;
}

bool same(const Sub& a, const Sub& b) {
  if (!same_base(a.base, b.base) || a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (!same(a.entries[i], b.entries[i])) return false;
  }
  return true;
}

std::size_t size(const Term& t) {
  std::size_t s = 1;
  for (const auto& a : t->args) s += size(a);
  return s;
}

std::size_t size(const Sub& g) {
  std::size_t s = 1;
  for (const auto& e : g.entries) s += 1 + size(e);
  return s;
}

Ctx extend(Ctx c, Term a) {
  c.types.push_back(std::move(a));
  return c;
}

// ---------------------------------------------------------------- substitution

Sub identity() { return weakening(0); }

Sub weakening(std::uint32_t j) {
  Sub s;
  s.base.kind = Base::Kind::Weak;
  s.base.weak = j;
  return s;
}

Sub empty_sub() {
  Sub s;
  s.base.kind = Base::Kind::Empty;
  return s;
}

Sub cons(Sub g, Term a) {
  g.entries.push_back(std::move(a));
  return g;
}

namespace {

// `b o d` where `b` targets the base of its spine.
Sub compose_base(const Base& b, const Sub& d) {
  switch (b.kind) {
    case Base::Kind::Empty: return empty_sub();
    case Base::Kind::Weak: {
      std::size_t m = d.entries.size();
      if (b.weak <= m) {
        Sub r{d.base, {}};
        r.entries.assign(d.entries.begin(), d.entries.end() - b.weak);
        return r;
      }
      std::uint32_t rest = b.weak - static_cast<std::uint32_t>(m);
      switch (d.base.kind) {
        case Base::Kind::Weak: return weakening(rest + d.base.weak);
        case Base::Kind::Empty:
        case Base::Kind::Hom: throw OracleError("weakening past the base of a substitution");
      }
      break;
    }
    case Base::Kind::Hom: {
      Sub inner = compose_base(*b.inner, d);
      if (!inner.entries.empty()) throw OracleError("postulated substitution applied to a non-base spine");
      Sub r;
      r.base.kind = Base::Kind::Hom;
      r.base.name = b.name;
      r.base.inner = std::make_shared<const Base>(inner.base);
      return r;
    }
  }
  throw OracleError("bad substitution base");
}

Base base_after(const Base& b, const Sub& g) {
  Sub r = compose_base(b, g);
  if (!r.entries.empty()) throw OracleError("constant context is not a base context");
  return r.base;
}

Term lookup(std::uint32_t k, const Sub& g) {
  std::size_t m = g.entries.size();
  if (k < m) return g.entries[m - 1 - k];
  if (g.base.kind != Base::Kind::Weak) throw OracleError("variable out of range of the substitution");
  return tm_var(k - static_cast<std::uint32_t>(m) + g.base.weak);
}

}  // namespace

Sub compose(const Sub& g, const Sub& d, std::uint32_t n) {
  Sub r = compose_base(g.base, d);
  for (const auto& e : g.entries) r.entries.push_back(hsubst(e, d, n));
  return r;
}

Sub lift_sub(const Sub& g, std::uint32_t n) { return cons(compose(g, weakening(1), n), tm_var(0)); }

Term hsubst(const Term& x, const Sub& g, std::uint32_t n) {
  switch (x->kind) {
    case K::Var: return lookup(x->index, g);
    case K::Univ:
    case K::UCode: return x;
    case K::TyConst:
    case K::TmConst: {
      auto c = std::make_shared<Node>(*x);
      c->base = base_after(x->base, g);
      return c;
    }
    case K::Pi:
    case K::Lam:
    case K::PiCode:
    case K::PiCodeCumul: return with(x, {hsubst(x->args[0], g, n), hsubst(x->args[1], lift_sub(g, n), n)});
    case K::El:
    case K::Lift:
    case K::LApp: return with(x, {hsubst(x->args[0], g, n)});
    case K::App: return with(x, {hsubst(x->args[0], g, n), hsubst(x->args[1], g, n)});
    case K::Forall:
    case K::LLam: return with(x, {hsubst(x->args[0], lsub(g, levels::lsubst_p({n})), n + 1)});
  }
  throw OracleError("bad term");
}

Term hsubst_ty(const Term& a, const Sub& g, std::uint32_t n) {
  if (!is_type(a)) throw OracleError("hsubst_ty applied to a term");
  return hsubst(a, g, n);
}

Term hsubst_tm(const Term& a, const Sub& g, std::uint32_t n) {
  if (is_type(a)) throw OracleError("hsubst_tm applied to a type");
  return hsubst(a, g, n);
}

Term lsub(const Term& x, const levels::LevelSubst& sigma) {
  auto c = std::make_shared<Node>(*x);
  for (auto& l : c->levels) l = apply_level(sigma, l);
  bool binder = x->kind == K::Forall || x->kind == K::LLam;
  levels::LevelSubst inner = binder ? levels::lsubst_lift(sigma) : sigma;
  for (auto& a : c->args) a = lsub(a, inner);
  return c;
}

Sub lsub(const Sub& g, const levels::LevelSubst& sigma) {
  Sub r{g.base, {}};
  for (const auto& e : g.entries) r.entries.push_back(lsub(e, sigma));
  return r;
}

Ctx lsub(const Ctx& c, const levels::LevelSubst& sigma) {
  Ctx r{sigma.source().size, c.base, {}};
  for (const auto& t : c.types) r.types.push_back(lsub(t, sigma));
  return r;
}

// ---------------------------------------------------------------- rendering

namespace {

Ctx prefix(const Ctx& c, std::size_t len) {
  Ctx r{c.n, c.base, {}};
  r.types.assign(c.types.begin(), c.types.begin() + static_cast<std::ptrdiff_t>(len));
  return r;
}

Ctx raise(const Ctx& c) { return lsub(c, levels::lsubst_p({c.n})); }

// hom(c, prefix(c, m - j))
Expr weaken_expr(const Ctx& c, std::uint32_t j) {
  std::size_t m = c.types.size();
  if (j == 0) return id(render_ctx(c));
  if (j > m) throw OracleError("weakening past the base context");
  Expr g;
  for (std::size_t t = m - j + 1; t <= m; ++t) {
    Ctx before = prefix(c, t - 1);
    Expr factor = proj(render_ctx(before), render(c.types[t - 1], before));
    g = g ? comp(g, factor) : factor;
  }
  return g;
}

Expr render_base(const Base& b, const Ctx& source) {
  switch (b.kind) {
    case Base::Kind::Empty: return empty(render_ctx(source));
    case Base::Kind::Weak: return weaken_expr(source, b.weak);
    case Base::Kind::Hom: {
      const Base& in = *b.inner;
      if (in.kind == Base::Kind::Weak && in.weak == 0) return constant(b.name);
      return comp(constant(b.name), render_base(in, source));
    }
  }
  throw OracleError("bad base");
}

Expr render_const(const Term& x, const Ctx& c) {
  if (x->base.kind == Base::Kind::Weak && x->base.weak == 0) return constant(x->name);
  return subst(constant(x->name), render_base(x->base, c));
}

}  // namespace

Expr render_ctx(const Ctx& c) {
  Expr e = c.base.empty() ? unit(c.n) : constant(c.base);
  for (std::size_t i = 0; i < c.types.size(); ++i) e = ext(e, render(c.types[i], prefix(c, i)));
  return e;
}

Expr render(const Term& x, const Ctx& c) {
  const auto& a = x->args;
  switch (x->kind) {
    case K::Pi: return pi(render(a[0], c), render(a[1], extend(c, a[0])));
    case K::Univ: return univ(x->levels[0], render_ctx(c));
    case K::El: return el(x->levels[0], render(a[0], c));
    case K::Forall: return forall(render(a[0], raise(c)), render_ctx(c));
    case K::TyConst:
    case K::TmConst: return render_const(x, c);
    case K::Var: {
      std::size_t m = c.types.size();
      if (x->index >= m) throw OracleError("variable out of scope");
      std::size_t i = m - 1 - x->index;
      Ctx before = prefix(c, i);
      Expr q = var(render_ctx(before), render(c.types[i], before));
      if (x->index == 0) return q;
      return subst(q, weaken_expr(c, x->index));
    }
    case K::Lam: return lam(render(a[1], extend(c, a[0])));
    case K::App: return app(render(a[0], c), render(a[1], c));
    case K::PiCode:
      return pi_code(x->levels[0], x->levels[1], render(a[0], c),
                     render(a[1], extend(c, ty_el(x->levels[0], a[0]))));
    case K::PiCodeCumul:
      return pi_code_cumul(x->levels[0], render(a[0], c), render(a[1], extend(c, ty_el(x->levels[0], a[0]))));
    case K::UCode: return ucode(x->levels[0], x->levels[1], render_ctx(c));
    case K::Lift: return lift(x->levels[0], x->levels[1], render(a[0], c));
    case K::LLam: return llam(render(a[0], raise(c)), render_ctx(c));
    case K::LApp: return lapp(render(a[0], c), x->levels[0]);
  }
  throw OracleError("bad term");
}

Expr render_sub(const Sub& g, const Ctx& source, const Ctx& target) {
  std::size_t m = g.entries.size();
  if (m > target.types.size()) throw OracleError("substitution longer than its target");
  Expr r = render_base(g.base, source);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t t = target.types.size() - m + i;
    Ctx before = prefix(target, t);
    r = pair(r, render(g.entries[i], source), render(target.types[t], before));
  }
  return r;
}

// ---------------------------------------------------------------- read-back

Term eval(const Signature& sig, const Expr& e) {
  const auto& a = e->args;
  switch (e->kind) {
    case Kind::Const: {
      const Entry* entry = sig.find(e->name);
      if (!entry) throw OracleError("unknown constant " + e->name);
      if (entry->sort.kind == SortKind::Ty) return ty_const(e->name);
      if (entry->sort.kind == SortKind::Tm) return tm_const(e->name);
      throw OracleError(e->name + " is not a type or term constant");
    }
    case Kind::Subst: return hsubst(eval(sig, a[0]), eval_sub(sig, a[1]), level_of(sig, e));
    case Kind::LSubst: return lsub(eval(sig, a[0]), *e->lsubst);
    case Kind::Pi: return ty_pi(eval(sig, a[0]), eval(sig, a[1]));
    case Kind::Univ: return ty_univ(e->levels[0]);
    case Kind::El: return ty_el(e->levels[0], eval(sig, a[0]));
    case Kind::Forall: return ty_forall(eval(sig, a[0]));
    case Kind::Q: return tm_var(0);
    case Kind::Lam: {
      auto parts = as_ext(context_of(sig, a[0]));
      if (!parts) throw OracleError("lam body over a non-extended context");
      return tm_lam(eval(sig, parts->second), eval(sig, a[0]));
    }
    case Kind::App: return tm_app(eval(sig, a[0]), eval(sig, a[1]));
    case Kind::PiCode: return tm_pi_code(e->levels[0], e->levels[1], eval(sig, a[0]), eval(sig, a[1]));
    case Kind::PiCodeCumul: return tm_pi_code_cumul(e->levels[0], eval(sig, a[0]), eval(sig, a[1]));
    case Kind::UCode: return tm_ucode(e->levels[0], e->levels[1]);
    case Kind::Lift: return tm_lift(e->levels[0], e->levels[1], eval(sig, a[0]));
    case Kind::LLam: return tm_llam(eval(sig, a[0]));
    case Kind::LApp: return tm_lapp(eval(sig, a[0]), e->levels[0]);
    default: throw OracleError("not a type or term: " + print(e));
  }
}

Sub eval_sub(const Signature& sig, const Expr& g) {
  const auto& a = g->args;
  switch (g->kind) {
    case Kind::Id: return identity();
    case Kind::P: return weakening(1);
    case Kind::Empty: return empty_sub();
    case Kind::Pair: return cons(eval_sub(sig, a[0]), eval(sig, a[1]));
    case Kind::Comp: return compose(eval_sub(sig, a[0]), eval_sub(sig, a[1]), level_of(sig, g));
    case Kind::LSubst: return lsub(eval_sub(sig, a[0]), *g->lsubst);
    case Kind::Const: {
      Sub s;
      s.base.kind = Base::Kind::Hom;
      s.base.name = g->name;
      s.base.inner = std::make_shared<const Base>(identity().base);
      return s;
    }
    default: throw OracleError("not a substitution: " + print(g));
  }
}

Ctx eval_ctx(const Signature& sig, const Expr& c) {
  switch (c->kind) {
    case Kind::Unit: return Ctx{c->level_ctx.value_or(0), {}, {}};
    case Kind::Ext: return extend(eval_ctx(sig, c->args[0]), eval(sig, c->args[1]));
    case Kind::Const: return Ctx{0, c->name, {}};
    case Kind::LSubst: return lsub(eval_ctx(sig, c->args[0]), *c->lsubst);
    default: throw OracleError("not a context: " + print(c));
  }
}

// ---------------------------------------------------------------- generation

std::string prelude(const GenConfig& config) {
  if (config.mode != Mode::Tower || !config.postulates) return {};
  return "postulate ctx G;\n"
         "postulate ty C in G;\n"
         "postulate tm c : C in G;\n"
         "postulate hom h : G -> G;\n";
}

Signature prelude_signature(const GenConfig& config) {
  kernel::Session session;
  session.flags.mode = config.mode;
  session.flags.cumulative = config.cumulative;
  for (const auto& d : parse(prelude(config), config.mode)) {
    auto r = kernel::check_decl(session, d);
    if (r.status != kernel::Status::Ok) throw OracleError("prelude rejected: " + r.message);
  }
  return session.sig;
}

Generator::Generator(GenConfig config, std::uint64_t seed) : config_(config), rng_(seed) {}

std::size_t Generator::pick(std::size_t bound) {
  return bound == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng_);
}

bool Generator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

std::uint32_t Generator::level_ctx() {
  if (config_.mode == Mode::Tower) return 0;
  return 1 + static_cast<std::uint32_t>(pick(config_.max_level_vars));
}

UIdx Generator::level(std::uint32_t n) {
  if (config_.mode == Mode::Tower) return UIdx(static_cast<std::uint32_t>(pick(config_.universes)));
  auto atom = [&] {
    auto l = levels::var(static_cast<std::uint32_t>(pick(n)));
    if (coin(0.3)) l = levels::next(l);
    return l;
  };
  auto l = atom();
  if (coin(0.3)) l = levels::join(l, atom());
  return UIdx(l);
}

levels::LevelSubst Generator::level_subst(std::uint32_t source, std::uint32_t target) {
  std::vector<levels::LevelTerm> entries;
  for (std::uint32_t i = 0; i < target; ++i) entries.push_back(level(source).level());
  return levels::LevelSubst({source}, std::move(entries));
}

Ctx Generator::context(std::uint32_t n) {
  Ctx c{n, {}, {}};
  if (config_.mode == Mode::Tower && config_.postulates && coin(0.5)) c.base = "G";
  std::size_t k = pick(3);
  for (std::size_t i = 0; i < k; ++i) c.types.push_back(type(c, 1 + pick(3)));
  return c;
}

namespace {

Base into_base(const Ctx& c, bool through_h) {
  Base b;
  b.kind = Base::Kind::Weak;
  b.weak = static_cast<std::uint32_t>(c.types.size());
  if (!through_h) return b;
  Base h;
  h.kind = Base::Kind::Hom;
  h.name = "h";
  h.inner = std::make_shared<const Base>(b);
  return h;
}

Term var_type(const Ctx& c, std::uint32_t k) {
  std::size_t m = c.types.size();
  return hsubst(c.types[m - 1 - k], weakening(k + 1), c.n);
}

}  // namespace

Term Generator::type(const Ctx& c, std::size_t size) {
  std::uint32_t n = c.n;
  bool have_levels = config_.mode == Mode::Tower || n > 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    switch (pick(size <= 1 ? 2 : 5)) {
      case 0:
        if (c.base == "G") return ty_const("C", into_base(c, coin(0.3)));
        if (have_levels) return ty_univ(level(n));
        break;
      case 1:
        if (have_levels) return ty_univ(level(n));
        break;
      case 2:
        if (have_levels) {
          UIdx l = level(n);
          if (auto a = term_of(c, ty_univ(l), size - 1)) return ty_el(l, *a);
        }
        break;
      case 3: {
        std::size_t s1 = 1 + pick(size - 1);
        Term a = type(c, s1);
        Term b = type(extend(c, a), size - s1 > 0 ? size - s1 : 1);
        return ty_pi(a, b);
      }
      case 4:
        if (config_.mode == Mode::Up && n < config_.max_level_vars) {
          return ty_forall(type(raise(c), size - 1));
        }
        break;
    }
  }
  if (c.base == "G") return ty_const("C", into_base(c, false));
  return ty_univ(level(n));
}

std::optional<Term> Generator::term_of(const Ctx& c, const Term& t, std::size_t size) {
  std::vector<Term> options;
  for (std::uint32_t k = 0; k < c.types.size(); ++k) {
    if (same(var_type(c, k), t)) options.push_back(tm_var(k));
  }
  if (t->kind == K::TyConst && t->name == "C") options.push_back(tm_const("c", t->base));
  if (size > 1) {
    switch (t->kind) {
      case K::Pi:
        if (auto b = term_of(extend(c, t->args[0]), t->args[1], size - 1)) options.push_back(tm_lam(t->args[0], *b));
        break;
      case K::Forall:
        if (auto b = term_of(raise(c), t->args[0], size - 1)) options.push_back(tm_llam(*b));
        break;
      case K::Univ: {
        const UIdx& m = t->levels[0];
        if (config_.mode == Mode::Tower) {
          std::uint32_t mv = m.nat();
          if (mv > 0) {
            UIdx l(static_cast<std::uint32_t>(pick(mv)));
            options.push_back(tm_ucode(l, m));
            if (config_.cumulative && size > 2) {
              if (auto a = term_of(c, ty_univ(l), size - 1)) options.push_back(tm_lift(l, m, *a));
            }
          }
          UIdx l = coin(0.5) ? m : UIdx(static_cast<std::uint32_t>(pick(mv + 1)));
          UIdx l2 = uidx_equal(l, m) ? UIdx(static_cast<std::uint32_t>(pick(mv + 1))) : m;
          if (size > 2) {
            if (auto a = term_of(c, ty_univ(l), (size - 1) / 2)) {
              if (auto b = term_of(extend(c, ty_el(l, *a)), ty_univ(l2), (size - 1) / 2)) {
                options.push_back(tm_pi_code(l, l2, *a, *b));
              }
            }
          }
        } else {
          UIdx l = level(c.n);
          if (levels::lt_check({c.n}, l.level(), m.level())) {
            options.push_back(tm_ucode(l, m));
            if (config_.cumulative && size > 2) {
              if (auto a = term_of(c, ty_univ(l), size - 1)) options.push_back(tm_lift(l, m, *a));
            }
          }
          if (size > 2) {
            if (auto a = term_of(c, ty_univ(m), (size - 1) / 2)) {
              if (auto b = term_of(extend(c, ty_el(m, *a)), ty_univ(m), (size - 1) / 2)) {
                options.push_back(tm_pi_code(m, m, *a, *b));
              }
            }
          }
        }
        if (config_.cumulative && size > 2) {
          if (auto a = term_of(c, t, (size - 1) / 2)) {
            if (auto b = term_of(extend(c, ty_el(m, *a)), t, (size - 1) / 2)) {
              options.push_back(tm_pi_code_cumul(m, *a, *b));
            }
          }
        }
        break;
      }
      default:
        break;
    }
  }
  if (options.empty()) return std::nullopt;
  return options[pick(options.size())];
}

std::pair<Term, Term> Generator::term(const Ctx& c, std::size_t size) {
  std::uint32_t n = c.n;
  for (int attempt = 0; attempt < 8; ++attempt) {
    switch (pick(4)) {
      case 0:
        if (!c.types.empty()) {
          auto k = static_cast<std::uint32_t>(pick(c.types.size()));
          return {tm_var(k), var_type(c, k)};
        }
        break;
      case 1:
        if (size >= 4) {
          std::size_t s = (size - 1) / 3;
          Term a = type(c, std::max<std::size_t>(1, s / 2));
          Term b = type(extend(c, a), std::max<std::size_t>(1, s / 2));
          auto f = term_of(c, ty_pi(a, b), s + 1);
          auto x = term_of(c, a, s);
          if (f && x) return {tm_app(*f, *x), hsubst(b, cons(identity(), *x), n)};
        }
        break;
      case 2:
        if (config_.mode == Mode::Up && n < config_.max_level_vars && size >= 3) {
          Term b = type(raise(c), std::max<std::size_t>(1, (size - 1) / 2));
          if (auto f = term_of(c, ty_forall(b), (size - 1) / 2 + 1)) {
            UIdx l = level(n);
            return {tm_lapp(*f, l), lsub(b, levels::lsubst_pair(levels::lsubst_id({n}), l.level()))};
          }
        }
        break;
      case 3: {
        Term t = type(c, std::max<std::size_t>(1, size / 2));
        if (auto x = term_of(c, t, size - size / 2)) return {*x, t};
        break;
      }
    }
  }
  if (c.base == "G") {
    Base b = into_base(c, false);
    return {tm_const("c", b), ty_const("C", b)};
  }
  if (config_.mode == Mode::Tower) {
    UIdx top(config_.universes - 1);
    return {tm_ucode(UIdx(0u), top), ty_univ(top)};
  }
  auto l = levels::var(0);
  return {tm_ucode(UIdx(l), UIdx(levels::next(l))), ty_univ(UIdx(levels::next(l)))};
}

std::pair<Ctx, Sub> Generator::substitution(const Ctx& target, std::size_t size) {
  std::uint32_t n = target.n;
  std::size_t m = target.types.size();
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::size_t split = attempt == 15 ? m : pick(m + 1);
    Ctx base_ctx = prefix(target, split);
    Ctx source;
    Sub g;
    if (split == 0 && target.base.empty() && coin(0.4)) {
      source = context(n);
      g = empty_sub();
    } else {
      source = base_ctx;
      std::size_t j = pick(3);
      for (std::size_t i = 0; i < j; ++i) source = extend(source, type(source, 1 + pick(2)));
      g = weakening(static_cast<std::uint32_t>(j));
      if (split == 0 && target.base == "G" && coin(0.4)) {
        Base h;
        h.kind = Base::Kind::Hom;
        h.name = "h";
        h.inner = std::make_shared<const Base>(g.base);
        g.base = h;
      }
    }
    bool ok = true;
    std::size_t budget = size / std::max<std::size_t>(1, m - split + 1);
    for (std::size_t i = split; i < m && ok; ++i) {
      Term want = hsubst(target.types[i], g, n);
      auto a = term_of(source, want, std::max<std::size_t>(1, budget));
      if (!a) {
        ok = false;
        break;
      }
      g = cons(g, *a);
    }
    if (ok) return {source, g};
  }
  throw OracleError("could not generate a substitution");
}

Redex Generator::redex() {
  std::uint32_t n = level_ctx();
  std::size_t half = config_.max_size / 2;
  for (;;) {
    Ctx target = context(n);
    Term x = coin(0.5) ? type(target, 1 + pick(half)) : term(target, 1 + pick(half)).first;
    auto [source, g] = substitution(target, half);
    if (size(x) + size(g) <= config_.max_size) return Redex{source, target, x, g};
  }
}

// ---------------------------------------------------------------- externalization

std::string internal_cwf_source() {
  return "postulate ty Ctx in 1;\n"
         "postulate ty Hom in 1 . Ctx . Ctx[p(1, Ctx)];\n"
         "postulate ty Ty in 1 . Ctx;\n"
         "postulate ty Tm in 1 . Ctx . Ty;\n"
         "postulate tm one : Ctx in 1;\n"
         "postulate tm ext : Ctx[p(1, Ctx) o p(1 . Ctx, Ty)] in 1 . Ctx . Ty;\n"
         "postulate tm idh : Hom[< < <>(1 . Ctx), q(1, Ctx); Ctx >, q(1, Ctx); Ctx[p(1, Ctx)] >] in 1 . Ctx;\n";
}

ExternalView::ExternalView(Signature sig, kernel::Flags flags) : sig_(std::move(sig)), flags_(flags) {}

ExternalView internal_cwf() {
  kernel::Session session;
  for (const auto& d : parse(internal_cwf_source(), Mode::Tower)) {
    auto r = kernel::check_decl(session, d);
    if (r.status != kernel::Status::Ok) throw OracleError("internal cwf rejected: " + r.message);
  }
  return ExternalView(session.sig);
}

namespace {

// Components of `< ... < <>, x1 >, ..., xk >`.
std::optional<std::vector<Expr>> spine(const Expr& g) {
  std::vector<Expr> out;
  Expr cur = g;
  while (cur->kind == Kind::Pair) {
    out.push_back(cur->args[1]);
    cur = cur->args[0];
  }
  if (cur->kind != Kind::Empty) return std::nullopt;
  return std::vector<Expr>(out.rbegin(), out.rend());
}

}  // namespace

Classification ExternalView::classify(const Expr& e) const {
  kernel::Typed t;
  try {
    t = kernel::synth(sig_, e, 0, flags_);
  } catch (const kernel::KernelError& ex) {
    throw OracleError(std::string("not well sorted: ") + ex.what());
  }
  if (t.sort.kind != SortKind::Tm) throw OracleError("not a term of the internal theory");
  if (!is_unit_ctx(t.sort.ctx)) throw OracleError("not closed: lives over " + print(t.sort.ctx));
  const Expr& ty = t.sort.type;
  if (ty->kind == Kind::Const && ty->name == "Ctx") return {ExternalKind::Ctx, ty, {}};
  if (ty->kind == Kind::Subst && ty->args[0]->kind == Kind::Const) {
    const std::string& head = ty->args[0]->name;
    auto parts = spine(conv::whnf_subst(sig_, ty->args[1]));
    if (parts) {
      if (head == "Hom" && parts->size() == 2) return {ExternalKind::Hom, ty, *parts};
      if (head == "Ty" && parts->size() == 1) return {ExternalKind::Ty, ty, *parts};
      if (head == "Tm" && parts->size() == 2) return {ExternalKind::Tm, ty, *parts};
    }
  }
  throw OracleError("type " + print(ty) + " is not one of the internal sorts");
}

}  // namespace gatcwf::oracle
