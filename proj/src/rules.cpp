#include "gatcwf/conversion.hpp"

namespace gatcwf::conv {
namespace {

using Opt = std::optional<Expr>;

bool is(const Expr& e, Kind k) { return e && e->kind == k; }

// gamma^dagger for the binder of type `a` in the target of `g`.
Expr dagger(const Signature& sig, const Expr& g, const Expr& a) {
  Expr delta = source_of(sig, g);
  Expr a_g = subst(a, g);
  return pair(comp(g, proj(delta, a_g)), var(delta, a_g), a);
}

// g[@lp] for g over level context n.
Expr weaken_levels(const Signature& sig, const Expr& g) {
  return lsubst(g, levels::lsubst_p({level_of(sig, g)}));
}

UIdx lsub_level(const UIdx& l, const levels::LevelSubst& s) { return UIdx(levels::lsubst_apply(s, l.level())); }

std::vector<UIdx> lsub_levels(const Expr& e, const levels::LevelSubst& s) {
  std::vector<UIdx> out;
  for (const auto& l : e->levels) out.push_back(lsub_level(l, s));
  return out;
}

// Push a level substitution into every child; levels get l[s].
Expr push_lsubst(const Expr& e, const levels::LevelSubst& s) {
  std::vector<Expr> args;
  for (const auto& a : e->args) args.push_back(a ? lsubst(a, s) : a);
  return with_levels(with_args(e, std::move(args)), lsub_levels(e, s));
}

const char* cat_prefix(SortKind k) {
  switch (k) {
    case SortKind::Ctx: return "ctx";
    case SortKind::Hom: return "hom";
    case SortKind::Ty: return "ty";
    case SortKind::Tm: return "tm";
  }
  return "?";
}

struct Builder {
  std::vector<Rule> rules;

  void add(std::string name, std::string eq, Orientation o,
           std::function<Opt(const Expr&, const RuleEnv&)> f, bool automatic = true) {
    rules.push_back(Rule{std::move(name), std::move(eq), o, std::move(f), automatic, {}});
  }
  void l2r(std::string name, std::string eq, std::function<Opt(const Expr&, const RuleEnv&)> f) {
    add(std::move(name), std::move(eq), Orientation::LeftToRight, std::move(f));
  }
  void r2l(std::string name, std::string eq, std::function<Opt(const Expr&, const RuleEnv&)> f,
           bool automatic = true) {
    add(std::move(name), std::move(eq), Orientation::RightToLeft, std::move(f), automatic);
  }
};

// `id(G)`, or `<>(1)`, which `id-unit` makes the identity on `1`.
bool is_identity_hom(const Expr& g) {
  return is(g, Kind::Id) || (is(g, Kind::Empty) && g->args[0] && is_unit_ctx(g->args[0]));
}

// Rules whose left-hand side is x[g] with x of a given category.
void substitution_laws(Builder& b) {
  for (SortKind k : {SortKind::Ty, SortKind::Tm}) {
    std::string c = cat_prefix(k);
    std::string v = k == SortKind::Ty ? "A" : "a";
    b.l2r(c + "-sub-id", v + "[id] = " + v, [k](const Expr& e, const RuleEnv& env) -> Opt {
      if (!is(e, Kind::Subst) || !is_identity_hom(e->args[1])) return std::nullopt;
      if (category(env.sig, e) != k) return std::nullopt;
      return e->args[0];
    });
    b.r2l(c + "-sub-comp", v + "[g o d] = " + v + "[g][d]", [k](const Expr& e, const RuleEnv& env) -> Opt {
      if (!is(e, Kind::Subst) || !is(e->args[0], Kind::Subst)) return std::nullopt;
      if (category(env.sig, e) != k) return std::nullopt;
      const Expr& inner = e->args[0];
      return subst(inner->args[0], comp(inner->args[1], e->args[1]));
    });
  }
}

void category_laws(Builder& b) {
  b.l2r("comp-id-l", "id o g = g", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Comp) || !is(e->args[0], Kind::Id)) return std::nullopt;
    return e->args[1];
  });
  b.l2r("comp-id-r", "g o id = g", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Comp) || !is_identity_hom(e->args[1])) return std::nullopt;
    return e->args[0];
  });
  b.l2r("comp-assoc", "(g o d) o x = g o (d o x)", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Comp) || !is(e->args[0], Kind::Comp)) return std::nullopt;
    const Expr& l = e->args[0];
    return comp(l->args[0], comp(l->args[1], e->args[1]));
  });
  substitution_laws(b);
  b.l2r("id-unit", "id(1) = <>(1)", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Id) || !is(e->args[0], Kind::Unit)) return std::nullopt;
    return empty(e->args[0]);
  });
  b.l2r("empty-comp", "<>(G) o g = <>(D)", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Comp) || !is(e->args[0], Kind::Empty)) return std::nullopt;
    return empty(source_of(env.sig, e->args[1]));
  });
  b.l2r("p-pair", "p o < g, a > = g", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Comp) || !is(e->args[0], Kind::P) || !is(e->args[1], Kind::Pair)) return std::nullopt;
    return e->args[1]->args[0];
  });
  b.l2r("q-pair", "q[< g, a >] = a", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::Q) || !is(e->args[1], Kind::Pair)) return std::nullopt;
    return e->args[1]->args[1];
  });
  b.l2r("pair-comp", "< g, a > o d = < g o d, a[d] >", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Comp) || !is(e->args[0], Kind::Pair)) return std::nullopt;
    const Expr& pr = e->args[0];
    const Expr& d = e->args[1];
    return pair(comp(pr->args[0], d), subst(pr->args[1], d), pr->args[2]);
  });
  b.r2l("id-ext", "id(G . A) = < p, q >", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Pair) || !is(e->args[0], Kind::P) || !is(e->args[1], Kind::Q)) return std::nullopt;
    const Expr& p = e->args[0];
    const Expr& q = e->args[1];
    if (!equal(p->args[0], q->args[0]) || !equal(p->args[1], q->args[1])) return std::nullopt;
    if (!equal(p->args[1], e->args[2])) return std::nullopt;
    return id(ext(p->args[0], p->args[1]));
  });
  // Surjective pairing under a composite: < p o g, q[g] > folds back to
  // < p, q > o g, after which id-ext and comp-id-l finish the contraction.
  b.r2l("pair-comp-rl", "< g, a > o d = < g o d, a[d] >", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Pair) || !is(e->args[0], Kind::Comp) || !is(e->args[1], Kind::Subst)) return std::nullopt;
    const Expr& g = e->args[0];
    const Expr& a = e->args[1];
    if (!is(g->args[0], Kind::P) || !is(a->args[0], Kind::Q)) return std::nullopt;
    if (!equal(g->args[1], a->args[1])) return std::nullopt;
    const Expr& p = g->args[0];
    const Expr& q = a->args[0];
    if (!equal(p->args[0], q->args[0]) || !equal(p->args[1], q->args[1]) || !equal(p->args[1], e->args[2])) {
      return std::nullopt;
    }
    return comp(pair(p, q, e->args[2]), g->args[1]);
  });
}

void pi_laws(Builder& b) {
  b.l2r("pi-sub", "Pi(A, B)[g] = Pi(A[g], B[g+])", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::Pi)) return std::nullopt;
    const Expr& x = e->args[0];
    const Expr& g = e->args[1];
    return pi(subst(x->args[0], g), subst(x->args[1], dagger(env.sig, g, x->args[0])));
  });
  b.l2r("lam-sub", "lam(b)[g] = lam(b[g+])", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::Lam)) return std::nullopt;
    const Expr& body = e->args[0]->args[0];
    auto ctx = as_ext(context_of(env.sig, body));
    if (!ctx) return std::nullopt;
    return lam(subst(body, dagger(env.sig, e->args[1], ctx->second)));
  });
  b.l2r("app-sub", "app(c, a)[g] = app(c[g], a[g])", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::App)) return std::nullopt;
    const Expr& x = e->args[0];
    return app(subst(x->args[0], e->args[1]), subst(x->args[1], e->args[1]));
  });
}

void universe_laws(Builder& b) {
  b.l2r("univ-sub", "U(l; G)[g] = U(l; D)", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::Univ)) return std::nullopt;
    return univ(e->args[0]->levels[0], source_of(env.sig, e->args[1]));
  });
  b.l2r("el-sub", "El(l, a)[g] = El(l, a[g])", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::El)) return std::nullopt;
    const Expr& x = e->args[0];
    return el(x->levels[0], subst(x->args[0], e->args[1]));
  });
  b.l2r("picode-sub", "pi{l, l'}(a, b)[g] = pi{l, l'}(a[g], b[g+])", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::PiCode)) return std::nullopt;
    const Expr& x = e->args[0];
    const Expr& g = e->args[1];
    Expr dom = el(x->levels[0], x->args[0]);
    return pi_code(x->levels[0], x->levels[1], subst(x->args[0], g), subst(x->args[1], dagger(env.sig, g, dom)));
  });
  b.l2r("ucode-sub", "ucode{l, m}(G)[g] = ucode{l, m}(D)", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::UCode)) return std::nullopt;
    const Expr& x = e->args[0];
    return ucode(x->levels[0], x->levels[1], source_of(env.sig, e->args[1]));
  });
  b.l2r("lift-sub", "lift{l, m}(a)[g] = lift{l, m}(a[g])", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::Lift)) return std::nullopt;
    const Expr& x = e->args[0];
    return lift(x->levels[0], x->levels[1], subst(x->args[0], e->args[1]));
  });
  b.l2r("picode-cumul-sub", "pi{l}(a, b)[g] = pi{l}(a[g], b[g+])", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::PiCodeCumul)) return std::nullopt;
    const Expr& x = e->args[0];
    const Expr& g = e->args[1];
    Expr dom = el(x->levels[0], x->args[0]);
    return pi_code_cumul(x->levels[0], subst(x->args[0], g), subst(x->args[1], dagger(env.sig, g, dom)));
  });
}

void level_product_laws(Builder& b) {
  b.l2r("forall-sub", "forall(B)[g] = forall(B[g[@lp]])", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::Forall)) return std::nullopt;
    const Expr& g = e->args[1];
    return forall(subst(e->args[0]->args[0], weaken_levels(env.sig, g)), source_of(env.sig, g));
  });
  b.l2r("llam-sub", "llam(b)[g] = llam(b[g[@lp]])", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::LLam)) return std::nullopt;
    const Expr& g = e->args[1];
    return llam(subst(e->args[0]->args[0], weaken_levels(env.sig, g)), source_of(env.sig, g));
  });
  b.l2r("lapp-sub", "lapp(c, l)[g] = lapp(c[g], l)", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Subst) || !is(e->args[0], Kind::LApp)) return std::nullopt;
    const Expr& x = e->args[0];
    return lapp(subst(x->args[0], e->args[1]), x->levels[0]);
  });
}

// Level substitution: functor laws, then strict preservation of every
// constructor.
void level_substitution_laws(Builder& b) {
  for (SortKind k : {SortKind::Ctx, SortKind::Hom, SortKind::Ty, SortKind::Tm}) {
    std::string c = cat_prefix(k);
    b.l2r(c + "-lsub-id", "X[@lid] = X", [k](const Expr& e, const RuleEnv& env) -> Opt {
      if (!is(e, Kind::LSubst) || !levels::is_identity(*e->lsubst)) return std::nullopt;
      if (category(env.sig, e) != k) return std::nullopt;
      return e->args[0];
    });
    b.r2l(c + "-lsub-comp", "X[@s o t] = X[@s][@t]", [k](const Expr& e, const RuleEnv& env) -> Opt {
      if (!is(e, Kind::LSubst) || !is(e->args[0], Kind::LSubst)) return std::nullopt;
      if (category(env.sig, e) != k) return std::nullopt;
      const Expr& inner = e->args[0];
      return lsubst(inner->args[0], levels::lsubst_comp(*inner->lsubst, *e->lsubst));
    });
  }

  struct Push {
    const char* name;
    const char* eq;
    Kind kind;
  };
  // Constructors where the substitution distributes to every argument.
  static const Push pushes[] = {
      {"lsub-ext", "(G . A)[@s] = G[@s] . A[@s]", Kind::Ext},
      {"lsub-identity", "id(G)[@s] = id(G[@s])", Kind::Id},
      {"lsub-compose", "(g o d)[@s] = g[@s] o d[@s]", Kind::Comp},
      {"lsub-empty", "<>(G)[@s] = <>(G[@s])", Kind::Empty},
      {"lsub-pair", "< g, a >[@s] = < g[@s], a[@s] >", Kind::Pair},
      {"lsub-p", "p(G, A)[@s] = p(G[@s], A[@s])", Kind::P},
      {"lsub-q", "q(G, A)[@s] = q(G[@s], A[@s])", Kind::Q},
      {"lsub-subst", "X[g][@s] = X[@s][g[@s]]", Kind::Subst},
      {"lsub-pi", "Pi(A, B)[@s] = Pi(A[@s], B[@s])", Kind::Pi},
      {"lsub-lam", "lam(b)[@s] = lam(b[@s])", Kind::Lam},
      {"lsub-app", "app(c, a)[@s] = app(c[@s], a[@s])", Kind::App},
      {"lsub-univ", "U(l; G)[@s] = U(l[s]; G[@s])", Kind::Univ},
      {"lsub-el", "El(l, a)[@s] = El(l[s], a[@s])", Kind::El},
      {"lsub-picode", "pi{l, l'}(a, b)[@s] = pi{l[s], l'[s]}(a[@s], b[@s])", Kind::PiCode},
      {"lsub-ucode", "ucode{l, m}(G)[@s] = ucode{l[s], m[s]}(G[@s])", Kind::UCode},
      {"lsub-lift", "lift{l, m}(a)[@s] = lift{l[s], m[s]}(a[@s])", Kind::Lift},
      {"lsub-picode-cumul", "pi{l}(a, b)[@s] = pi{l[s]}(a[@s], b[@s])", Kind::PiCodeCumul},
      {"lsub-lapp", "lapp(c, l)[@s] = lapp(c[@s], l[s])", Kind::LApp},
  };
  b.l2r("lsub-unit", "1[@s] = 1", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::LSubst) || !is(e->args[0], Kind::Unit)) return std::nullopt;
    return unit(e->lsubst->source().size);
  });
  for (const auto& p : pushes) {
    Kind kind = p.kind;
    b.l2r(p.name, p.eq, [kind](const Expr& e, const RuleEnv&) -> Opt {
      if (!is(e, Kind::LSubst) || !is(e->args[0], kind)) return std::nullopt;
      return push_lsubst(e->args[0], *e->lsubst);
    });
  }
  b.l2r("lsub-forall", "forall(B; G)[@s] = forall(B[@s+]; G[@s])", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::LSubst) || !is(e->args[0], Kind::Forall)) return std::nullopt;
    const Expr& x = e->args[0];
    const auto& s = *e->lsubst;
    return forall(lsubst(x->args[0], levels::lsubst_lift(s)), lsubst(x->args[1], s));
  });
  b.l2r("lsub-llam", "llam(b; G)[@s] = llam(b[@s+]; G[@s])", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::LSubst) || !is(e->args[0], Kind::LLam)) return std::nullopt;
    const Expr& x = e->args[0];
    const auto& s = *e->lsubst;
    return llam(lsubst(x->args[0], levels::lsubst_lift(s)), lsubst(x->args[1], s));
  });
}

void computation_laws(Builder& b) {
  b.l2r("el-picode", "El(l \\/ l', pi{l, l'}(a, b)) = Pi(El(l, a), El(l', b))",
        [](const Expr& e, const RuleEnv&) -> Opt {
          if (!is(e, Kind::El) || !is(e->args[0], Kind::PiCode)) return std::nullopt;
          const Expr& c = e->args[0];
          return pi(el(c->levels[0], c->args[0]), el(c->levels[1], c->args[1]));
        });
  b.l2r("el-ucode", "El(m, ucode{l, m}(G)) = U(l; G)", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::El) || !is(e->args[0], Kind::UCode)) return std::nullopt;
    const Expr& c = e->args[0];
    return univ(c->levels[0], c->args[0]);
  });
  b.l2r("el-lift", "El(m, lift{l, m}(a)) = El(l, a)", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::El) || !is(e->args[0], Kind::Lift)) return std::nullopt;
    const Expr& c = e->args[0];
    return el(c->levels[0], c->args[0]);
  });
  b.l2r("lift-picode-cumul", "lift{l, m}(pi{l}(a, b)) = pi{m}(lift{l, m}(a), lift{l, m}(b))",
        [](const Expr& e, const RuleEnv&) -> Opt {
          if (!is(e, Kind::Lift) || !is(e->args[0], Kind::PiCodeCumul)) return std::nullopt;
          const Expr& c = e->args[0];
          const UIdx& l = e->levels[0];
          const UIdx& m = e->levels[1];
          return pi_code_cumul(m, lift(l, m, c->args[0]), lift(l, m, c->args[1]));
        });
  b.l2r("lift-ucode", "lift{l, m}(ucode{k, l}(G)) = ucode{k, m}(G)", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Lift) || !is(e->args[0], Kind::UCode)) return std::nullopt;
    const Expr& c = e->args[0];
    return ucode(c->levels[0], e->levels[1], c->args[0]);
  });
  b.l2r("el-picode-cumul", "El(l, pi{l}(a, b)) = Pi(El(l, a), El(l, b))", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::El) || !is(e->args[0], Kind::PiCodeCumul)) return std::nullopt;
    const Expr& c = e->args[0];
    return pi(el(c->levels[0], c->args[0]), el(c->levels[0], c->args[1]));
  });
  b.l2r("beta", "app(lam(b), a) = b[< id, a >]", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::App) || !is(e->args[0], Kind::Lam)) return std::nullopt;
    const Expr& body = e->args[0]->args[0];
    auto ctx = as_ext(context_of(env.sig, body));
    if (!ctx) return std::nullopt;
    return subst(body, pair(id(ctx->first), e->args[1], ctx->second));
  });
  b.l2r("lbeta", "lapp(llam(b), l) = b[@< lid, l >]", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!is(e, Kind::LApp) || !is(e->args[0], Kind::LLam)) return std::nullopt;
    const Expr& f = e->args[0];
    std::uint32_t n = level_of(env.sig, f);
    return lsubst(f->args[0], levels::lsubst_pair(levels::lsubst_id({n}), e->levels[0].level()));
  });
}

void eta_laws(Builder& b) {
  b.l2r("eta", "lam(app(c[p], q)) = c", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::Lam) || !is(e->args[0], Kind::App)) return std::nullopt;
    const Expr& ap = e->args[0];
    if (!is(ap->args[1], Kind::Q)) return std::nullopt;
    return strengthen_term(ap->args[0], 0);
  });
  b.l2r("leta", "llam(lapp(c[@lp], lq)) = c", [](const Expr& e, const RuleEnv&) -> Opt {
    if (!is(e, Kind::LLam) || !is(e->args[0], Kind::LApp)) return std::nullopt;
    const Expr& ap = e->args[0];
    if (levels::normal_form(ap->levels[0].level()) != levels::LevelNF(levels::LevelNF::Atoms{{0, 0}})) return std::nullopt;
    return strengthen_level(ap->args[0], 0);
  });
  // Any substitution into 1 equals <>: g = id o g = <> o g = <>.
  b.r2l("comp-id-l-rl", "id o g = g", [](const Expr& e, const RuleEnv& env) -> Opt {
    if (!e || category(env.sig, e) != SortKind::Hom) return std::nullopt;
    if (is(e, Kind::Empty) || is(e, Kind::Id) || is(e, Kind::Pair)) return std::nullopt;
    if (is(e, Kind::Comp) && (is(e->args[0], Kind::Id) || is(e->args[0], Kind::Empty))) return std::nullopt;
    if (!is_unit_ctx(target_of(env.sig, e))) return std::nullopt;
    return comp(id(unit(level_of(env.sig, e))), e);
  });
  b.rules.back().then = {{"id-unit", {0}}, {"empty-comp", {}}};
}

std::vector<Rule> build() {
  Builder b;
  category_laws(b);
  level_substitution_laws(b);
  pi_laws(b);
  universe_laws(b);
  level_product_laws(b);
  computation_laws(b);
  eta_laws(b);
  return std::move(b.rules);
}

}  // namespace

const std::vector<Rule>& rule_table() {
  static const std::vector<Rule> table = build();
  return table;
}

const Rule* find_rule(const std::string& name) {
  for (const auto& r : rule_table()) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace gatcwf::conv
