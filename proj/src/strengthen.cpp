#include "gatcwf/conversion.hpp"

namespace gatcwf::conv {
namespace {

using Opt = std::optional<Expr>;

// Removes the variable bound `k` binders below the current context. Contexts
// below depth k keep their shape; the removed type drops out of the chain.
class TermStrengthener {
 public:
  struct SubResult {
    Expr sub;
    int target_depth;  // -1 when the target lies outside the removed binder
  };

  Opt ctx(const Expr& c, std::uint32_t k) {
    if (!c || c->kind != Kind::Ext) return std::nullopt;
    if (k == 0) return c->args[0];
    auto rest = ctx(c->args[0], k - 1);
    auto ty = tm(c->args[1], k - 1);
    if (!rest || !ty) return std::nullopt;
    return ext(*rest, *ty);
  }

  Opt head(const Expr& h, int t) {
    if (h->kind != Kind::Q || t <= 0) return std::nullopt;
    auto c = ctx(h->args[0], t - 1);
    auto a = tm(h->args[1], t - 1);
    if (!c || !a) return std::nullopt;
    return var(*c, *a);
  }

  std::optional<SubResult> sub(const Expr& g, std::uint32_t k) {
    switch (g->kind) {
      case Kind::P: {
        if (k == 0) return SubResult{id(g->args[0]), -1};
        auto c = ctx(g->args[0], k - 1);
        auto a = tm(g->args[1], k - 1);
        if (!c || !a) return std::nullopt;
        return SubResult{proj(*c, *a), static_cast<int>(k) - 1};
      }
      case Kind::Comp: {
        auto rest = sub(g->args[1], k);
        if (!rest) return std::nullopt;
        if (rest->target_depth < 0) return SubResult{comp(g->args[0], rest->sub), -1};
        auto first = sub(g->args[0], static_cast<std::uint32_t>(rest->target_depth));
        if (!first) return std::nullopt;
        return SubResult{comp(first->sub, rest->sub), first->target_depth};
      }
      case Kind::Pair: {
        auto head_sub = sub(g->args[0], k);
        auto a = tm(g->args[1], k);
        if (!head_sub || !a) return std::nullopt;
        if (head_sub->target_depth < 0) return SubResult{pair(head_sub->sub, *a, g->args[2]), -1};
        auto ty = tm(g->args[2], static_cast<std::uint32_t>(head_sub->target_depth));
        if (!ty) return std::nullopt;
        return SubResult{pair(head_sub->sub, *a, *ty), head_sub->target_depth + 1};
      }
      case Kind::Empty: {
        auto c = ctx(g->args[0], k);
        if (!c) return std::nullopt;
        return SubResult{empty(*c), -1};
      }
      case Kind::Id: {
        auto c = ctx(g->args[0], k);
        if (!c) return std::nullopt;
        return SubResult{id(*c), static_cast<int>(k)};
      }
      default:
        return std::nullopt;
    }
  }

  Opt tm(const Expr& e, std::uint32_t k) {
    switch (e->kind) {
      case Kind::Q:
        return head(e, static_cast<int>(k));
      case Kind::Subst: {
        auto s = sub(e->args[1], k);
        if (!s) return std::nullopt;
        if (s->target_depth < 0) return subst(e->args[0], s->sub);
        auto h = head(e->args[0], s->target_depth);
        if (!h) return std::nullopt;
        return subst(*h, s->sub);
      }
      case Kind::Pi:
      case Kind::PiCode:
      case Kind::PiCodeCumul: {
        auto a = tm(e->args[0], k);
        auto b = tm(e->args[1], k + 1);
        if (!a || !b) return std::nullopt;
        return with_args(e, {*a, *b});
      }
      case Kind::Lam: {
        auto b = tm(e->args[0], k + 1);
        if (!b) return std::nullopt;
        return with_args(e, {*b});
      }
      case Kind::App: {
        auto c = tm(e->args[0], k);
        auto a = tm(e->args[1], k);
        if (!c || !a) return std::nullopt;
        return with_args(e, {*c, *a});
      }
      case Kind::El:
      case Kind::Lift:
      case Kind::LApp: {
        auto a = tm(e->args[0], k);
        if (!a) return std::nullopt;
        return with_args(e, {*a});
      }
      case Kind::Univ:
      case Kind::UCode: {
        auto c = ctx(e->args[0], k);
        if (!c) return std::nullopt;
        return with_args(e, {*c});
      }
      case Kind::Forall:
      case Kind::LLam: {
        auto b = tm(e->args[0], k);
        auto c = ctx(e->args[1], k);
        if (!b || !c) return std::nullopt;
        return with_args(e, {*b, *c});
      }
      default:
        return std::nullopt;
    }
  }
};

Opt level_str(const Expr& e, std::uint32_t d) {
  if (!e) return e;
  if (e->kind == Kind::Const) return std::nullopt;
  auto n = std::make_shared<Node>(*e);
  if (e->kind == Kind::Unit) {
    if (!e->level_ctx || *e->level_ctx == 0) return std::nullopt;
    n->level_ctx = *e->level_ctx - 1;
    return n;
  }
  for (auto& l : n->levels) {
    if (l.is_nat()) continue;
    auto s = levels::strengthen(l.level(), d);
    if (!s) return std::nullopt;
    l = UIdx(*s);
  }
  if (e->kind == Kind::LSubst) {
    const auto& sigma = *e->lsubst;
    if (sigma.source().size == 0) return std::nullopt;
    std::vector<levels::LevelTerm> entries;
    for (const auto& l : sigma.entries()) {
      auto s = levels::strengthen(l, d);
      if (!s) return std::nullopt;
      entries.push_back(*s);
    }
    n->lsubst = levels::LevelSubst({sigma.source().size - 1}, std::move(entries));
    return n;
  }
  for (std::size_t i = 0; i < n->args.size(); ++i) {
    bool binder = (e->kind == Kind::Forall || e->kind == Kind::LLam) && i == 0;
    auto c = level_str(n->args[i], binder ? d + 1 : d);
    if (!c) return std::nullopt;
    n->args[i] = *c;
  }
  return n;
}

}  // namespace

std::optional<Expr> strengthen_term(const Expr& e, std::uint32_t k) { return TermStrengthener().tm(e, k); }

std::optional<Expr> strengthen_level(const Expr& e, std::uint32_t d) { return level_str(e, d); }

}  // namespace gatcwf::conv
