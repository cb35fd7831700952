#include <stdexcept>

#include "gatcwf/signature.hpp"

namespace gatcwf {

const Entry* Signature::find(const std::string& name) const {
  auto it = entries_->find(name);
  return it == entries_->end() ? nullptr : &it->second;
}

Signature Signature::extend(Entry entry) const {
  auto next = std::make_shared<Map>(*entries_);
  std::string key = entry.name;
  (*next)[key] = std::move(entry);
  return Signature(std::move(next));
}

namespace {

const Entry& lookup(const Signature& sig, const Expr& e) {
  const Entry* entry = sig.find(e->name);
  if (!entry) throw std::logic_error("unknown constant " + e->name);
  return *entry;
}

[[noreturn]] void no_info(const char* what, const Expr& e) {
  throw std::logic_error(std::string(what) + ": unannotated " + to_string(e->kind));
}

Expr need(const Expr& e, const char* what, const Expr& owner) {
  if (!e) no_info(what, owner);
  return e;
}

}  // namespace

SortKind category(const Signature& sig, const Expr& e) {
  switch (e->kind) {
    case Kind::Unit:
    case Kind::Ext:
      return SortKind::Ctx;
    case Kind::Id:
    case Kind::Comp:
    case Kind::Empty:
    case Kind::Pair:
    case Kind::P:
      return SortKind::Hom;
    case Kind::Pi:
    case Kind::Univ:
    case Kind::El:
    case Kind::Forall:
      return SortKind::Ty;
    case Kind::Q:
    case Kind::Lam:
    case Kind::App:
    case Kind::PiCode:
    case Kind::PiCodeCumul:
    case Kind::UCode:
    case Kind::Lift:
    case Kind::LLam:
    case Kind::LApp:
      return SortKind::Tm;
    case Kind::Subst:
    case Kind::LSubst:
      return category(sig, e->args[0]);
    case Kind::Const:
      return lookup(sig, e).sort.kind;
    case Kind::Ref:
      break;
  }
  no_info("category", e);
}

std::uint32_t level_of(const Signature& sig, const Expr& e) {
  switch (e->kind) {
    case Kind::Unit:
      return e->level_ctx.value_or(0);
    case Kind::Ext:
    case Kind::Comp:
    case Kind::Pi:
    case Kind::Lam:
    case Kind::App:
    case Kind::PiCode:
    case Kind::PiCodeCumul:
    case Kind::Lift:
    case Kind::LApp:
    case Kind::El:
      return level_of(sig, e->args[0]);
    case Kind::Subst:
      return level_of(sig, e->args[1]);
    case Kind::Id:
    case Kind::Empty:
    case Kind::P:
    case Kind::Q:
    case Kind::Univ:
    case Kind::UCode:
      return level_of(sig, need(e->args[0], "level_of", e));
    case Kind::Pair:
      return level_of(sig, e->args[0]);
    case Kind::Forall:
    case Kind::LLam:
      return level_of(sig, need(e->args[1], "level_of", e));
    case Kind::LSubst:
      return e->lsubst->source().size;
    case Kind::Const:
      return lookup(sig, e).sort.level_ctx;
    case Kind::Ref:
      break;
  }
  no_info("level_of", e);
}

Expr source_of(const Signature& sig, const Expr& g) {
  switch (g->kind) {
    case Kind::Id:
    case Kind::Empty:
      return need(g->args[0], "source_of", g);
    case Kind::Comp:
      return source_of(sig, g->args[1]);
    case Kind::Pair:
      return source_of(sig, g->args[0]);
    case Kind::P:
      return ext(need(g->args[0], "source_of", g), need(g->args[1], "source_of", g));
    case Kind::LSubst:
      return lsubst(source_of(sig, g->args[0]), *g->lsubst);
    case Kind::Const:
      return lookup(sig, g).sort.ctx;
    default:
      no_info("source_of", g);
  }
}

Expr target_of(const Signature& sig, const Expr& g) {
  switch (g->kind) {
    case Kind::Id:
      return need(g->args[0], "target_of", g);
    case Kind::Empty:
      return unit(level_of(sig, g));
    case Kind::Comp:
      return target_of(sig, g->args[0]);
    case Kind::Pair:
      return ext(target_of(sig, g->args[0]), need(g->args[2], "target_of", g));
    case Kind::P:
      return need(g->args[0], "target_of", g);
    case Kind::LSubst:
      return lsubst(target_of(sig, g->args[0]), *g->lsubst);
    case Kind::Const:
      return lookup(sig, g).sort.tgt;
    default:
      no_info("target_of", g);
  }
}

Expr context_of(const Signature& sig, const Expr& e) {
  switch (e->kind) {
    case Kind::Univ:
    case Kind::UCode:
      return need(e->args[0], "context_of", e);
    case Kind::Forall:
    case Kind::LLam:
      return need(e->args[1], "context_of", e);
    case Kind::Q:
      return ext(need(e->args[0], "context_of", e), need(e->args[1], "context_of", e));
    case Kind::Pi:
    case Kind::El:
    case Kind::App:
    case Kind::PiCode:
    case Kind::PiCodeCumul:
    case Kind::Lift:
    case Kind::LApp:
      return context_of(sig, e->args[0]);
    case Kind::Lam: {
      auto inner = as_ext(context_of(sig, e->args[0]));
      if (!inner) no_info("context_of", e);
      return inner->first;
    }
    case Kind::Subst:
      return source_of(sig, e->args[1]);
    case Kind::LSubst:
      return lsubst(context_of(sig, e->args[0]), *e->lsubst);
    case Kind::Const:
      return lookup(sig, e).sort.ctx;
    default:
      no_info("context_of", e);
  }
}

std::optional<std::pair<Expr, Expr>> as_ext(const Expr& ctx) {
  if (ctx->kind == Kind::Ext) return std::make_pair(ctx->args[0], ctx->args[1]);
  if (ctx->kind == Kind::LSubst) {
    auto inner = as_ext(ctx->args[0]);
    if (!inner) return std::nullopt;
    return std::make_pair(lsubst(inner->first, *ctx->lsubst), lsubst(inner->second, *ctx->lsubst));
  }
  return std::nullopt;
}

bool is_unit_ctx(const Expr& ctx) {
  if (ctx->kind == Kind::Unit) return true;
  if (ctx->kind == Kind::LSubst) return is_unit_ctx(ctx->args[0]);
  return false;
}

}  // namespace gatcwf
