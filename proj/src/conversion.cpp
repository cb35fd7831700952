#include <unordered_map>

#include "gatcwf/conversion.hpp"

namespace gatcwf::conv {

std::string to_string(const Path& path) {
  if (path.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

std::string to_string(const Step& step) { return step.rule + " @ " + to_string(step.path); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

Expr subterm(const Expr& e, const Path& path) {
  Expr cur = e;
  for (auto i : path) {
    if (!cur || i >= cur->args.size()) return nullptr;
    cur = cur->args[i];
  }
  return cur;
}

Expr replace_at(const Expr& e, const Path& path, std::size_t depth, const Expr& with) {
  if (depth == path.size()) return with;
  return with_arg(e, path[depth], replace_at(e->args.at(path[depth]), path, depth + 1, with));
}

struct Engine::Impl {
  struct Cached {
    Expr key;  // keeps the key node alive
    Expr result;
    std::vector<Step> steps;  // paths relative to the cached node
  };

  Signature sig;
  Options options;
  RuleEnv env{sig};
  std::size_t used = 0;
  std::vector<Step> trace;
  std::unordered_map<const Node*, Cached> cache;

  Impl(const Signature& s, Options o) : sig(s), options(o) {}

  void emit(std::string rule, const Path& path, Expr before, Expr after) {
    if (used >= options.fuel) throw FuelExhausted(trace);
    ++used;
    if (options.trace) trace.push_back(Step{std::move(rule), path, std::move(before), std::move(after)});
  }

  std::optional<std::pair<const Rule*, Expr>> step_root(const Expr& e) {
    for (const auto& rule : rule_table()) {
      if (!rule.automatic) continue;
      if (auto r = rule.apply(e, env)) return std::make_pair(&rule, *r);
    }
    return std::nullopt;
  }

  Expr norm(const Expr& e, Path& path) {
    if (!e) return e;
    if (auto it = cache.find(e.get()); it != cache.end()) {
      if (options.trace) {
        for (const auto& s : it->second.steps) {
          Path full = path;
          full.insert(full.end(), s.path.begin(), s.path.end());
          trace.push_back(Step{s.rule, std::move(full), s.before, s.after});
        }
      }
      return it->second.result;
    }
    std::size_t mark = trace.size();
    Expr cur = e;
    for (;;) {
      std::vector<Expr> args = cur->args;
      bool changed = false;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i]) continue;
        path.push_back(static_cast<std::uint32_t>(i));
        Expr n = norm(args[i], path);
        path.pop_back();
        if (n != args[i]) {
          args[i] = n;
          changed = true;
        }
      }
      if (changed) cur = with_args(cur, std::move(args));
      auto r = step_root(cur);
      if (!r) break;
      emit(r->first->name, path, cur, r->second);
      cur = r->second;
      for (const auto& [name, rel] : r->first->then) {
        Expr at = subterm(cur, rel);
        auto next = at ? find_rule(name)->apply(at, env) : std::nullopt;
        if (!next) break;
        Path full = path;
        full.insert(full.end(), rel.begin(), rel.end());
        emit(name, full, at, *next);
        cur = replace_at(cur, rel, 0, *next);
      }
    }
    Cached entry{e, cur, {}};
    if (options.trace) {
      for (std::size_t i = mark; i < trace.size(); ++i) {
        Step s = trace[i];
        s.path.erase(s.path.begin(), s.path.begin() + static_cast<std::ptrdiff_t>(path.size()));
        entry.steps.push_back(std::move(s));
      }
    }
    cache.emplace(e.get(), std::move(entry));
    if (cur != e) cache.emplace(cur.get(), Cached{cur, cur, {}});
    return cur;
  }
};

Engine::Engine(const Signature& sig, Options options) : impl_(std::make_unique<Impl>(sig, options)) {}
Engine::~Engine() = default;

NormalForm Engine::normalize(const Expr& e) {
  std::size_t mark = impl_->trace.size();
  Path path;
  Expr nf = impl_->norm(e, path);
  std::vector<Step> steps(impl_->trace.begin() + static_cast<std::ptrdiff_t>(mark), impl_->trace.end());
  return NormalForm{canonical_levels(nf), std::move(steps)};
}

std::size_t Engine::steps_used() const { return impl_->used; }

NormalForm normalize_expr(const Signature& sig, const Expr& e, Options options) {
  Engine engine(sig, options);
  return engine.normalize(e);
}

Expr whnf_subst(const Signature& sig, const Expr& g, Options options) {
  Expr nf = normalize_expr(sig, g, options).expr;
  // The normal form keeps id folded; the spine form unfolds it at an extension.
  if (nf->kind == Kind::Id && nf->args[0] && nf->args[0]->kind == Kind::Ext) {
    const Expr& ctx = nf->args[0]->args[0];
    const Expr& ty = nf->args[0]->args[1];
    return pair(proj(ctx, ty), var(ctx, ty), ty);
  }
  return nf;
}

Comparison compare(const Signature& sig, const Expr& a, const Expr& b, Options options) {
  Comparison out;
  Engine engine(sig, options);
  try {
    out.lhs = engine.normalize(a);
  } catch (const FuelExhausted& ex) {
    out.lhs.trace = ex.partial_trace();
    out.verdict = Verdict::Unknown;
    return out;
  }
  try {
    out.rhs = engine.normalize(b);
  } catch (const FuelExhausted& ex) {
    out.rhs.trace.assign(ex.partial_trace().begin() + static_cast<std::ptrdiff_t>(out.lhs.trace.size()),
                         ex.partial_trace().end());
    out.verdict = Verdict::Unknown;
    return out;
  }
  out.verdict = equal(out.lhs.expr, out.rhs.expr) ? Verdict::Yes : Verdict::No;
  return out;
}

Verdict convertible(const Signature& sig, const Expr& a, const Expr& b, Options options) {
  return compare(sig, a, b, options).verdict;
}

std::string replay(const Signature& sig, const Expr& start, const std::vector<Step>& trace, const Expr& end) {
  RuleEnv env{sig};
  Expr cur = start;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Step& s = trace[i];
    std::string where = "step " + std::to_string(i) + " (" + to_string(s) + ")";
    const Rule* rule = find_rule(s.rule);
    if (!rule) return where + ": unknown rule";
    Expr at = subterm(cur, s.path);
    if (!at) return where + ": no subterm at path";
    if (!equal(at, s.before)) return where + ": subterm differs from recorded redex";
    auto r = rule->apply(at, env);
    if (!r) return where + ": rule does not apply";
    if (!equal(*r, s.after)) return where + ": rule result differs from recorded contractum";
    cur = replace_at(cur, s.path, 0, *r);
  }
  if (!equal(cur, end)) return "trace does not reach the normal form";
  return "";
}

}  // namespace gatcwf::conv
