#pragma once

// Brute-force decision of level equality: congruence closure of the
// semilattice and successor laws over every term up to a size bound.

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "gatcwf/levels.hpp"

namespace gatcwf::testing {

class LevelClosure {
 public:
  enum Op : std::uint8_t { Var, Next, Join };

  struct Node {
    Op op;
    std::uint32_t a;  // Var: index; Next, Join: first child
    std::uint32_t b;  // Join: second child
  };

  /// All terms over `vars` variables with at most `max_ops` successor and
  /// join constructors, closed under the laws within that universe.
  LevelClosure(std::uint32_t vars, std::uint32_t max_ops) {
    by_ops_.resize(max_ops + 1);
    for (std::uint32_t v = 0; v < vars; ++v) by_ops_[0].push_back(intern({Var, v, 0}));
    for (std::uint32_t k = 1; k <= max_ops; ++k) {
      for (std::uint32_t c : by_ops_[k - 1]) by_ops_[k].push_back(intern({Next, c, 0}));
      for (std::uint32_t i = 0; i <= k - 1; ++i) {
        for (std::uint32_t l : by_ops_[i]) {
          for (std::uint32_t r : by_ops_[k - 1 - i]) by_ops_[k].push_back(intern({Join, l, r}));
        }
      }
    }
    parent_.resize(nodes_.size());
    std::iota(parent_.begin(), parent_.end(), 0u);
    saturate();
  }

  std::size_t universe_size() const { return nodes_.size(); }

  /// Terms with exactly `ops` constructors.
  const std::vector<std::uint32_t>& terms_with(std::uint32_t ops) const { return by_ops_.at(ops); }

  bool equal(std::uint32_t x, std::uint32_t y) const { return find(x) == find(y); }

  levels::LevelTerm to_term(std::uint32_t id) const {
    const Node& n = nodes_[id];
    switch (n.op) {
      case Var: return levels::var(n.a);
      case Next: return levels::next(to_term(n.a));
      case Join: return levels::join(to_term(n.a), to_term(n.b));
    }
    return nullptr;
  }

 private:
  std::uint32_t intern(Node n) {
    auto key = std::make_tuple(n.op, n.a, n.b);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(n);
    index_.emplace(key, id);
    return id;
  }

  std::int64_t lookup(Op op, std::uint32_t a, std::uint32_t b = 0) const {
    auto it = index_.find(std::make_tuple(op, a, b));
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
  }

  std::uint32_t find(std::uint32_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  bool unite(std::uint32_t x, std::int64_t y) {
    if (y < 0) return false;
    std::uint32_t rx = find(x), ry = find(static_cast<std::uint32_t>(y));
    if (rx == ry) return false;
    parent_[std::max(rx, ry)] = std::min(rx, ry);
    return true;
  }

  // One pass of law instances whose both sides lie in the universe.
  bool apply_laws() {
    bool changed = false;
    for (std::uint32_t t = 0; t < nodes_.size(); ++t) {
      const Node& n = nodes_[t];
      if (n.op == Join) {
        const Node& l = nodes_[n.a];
        // (x \/ y) \/ z = x \/ (y \/ z)
        if (l.op == Join) {
          std::int64_t yz = lookup(Join, l.b, n.b);
          if (yz >= 0) changed |= unite(t, lookup(Join, l.a, static_cast<std::uint32_t>(yz)));
        }
        // x \/ y = y \/ x
        changed |= unite(t, lookup(Join, n.b, n.a));
        // x \/ x = x
        if (n.a == n.b) changed |= unite(t, n.a);
        // x \/ x^+ = x^+
        const Node& r = nodes_[n.b];
        if (r.op == Next && r.a == n.a) changed |= unite(t, n.b);
      } else if (n.op == Next) {
        // (x \/ y)^+ = x^+ \/ y^+
        const Node& c = nodes_[n.a];
        if (c.op == Join) {
          std::int64_t xp = lookup(Next, c.a), yp = lookup(Next, c.b);
          if (xp >= 0 && yp >= 0) {
            changed |= unite(t, lookup(Join, static_cast<std::uint32_t>(xp), static_cast<std::uint32_t>(yp)));
          }
        }
      }
    }
    return changed;
  }

  // Merge nodes whose children are pairwise congruent.
  bool apply_congruence() {
    bool changed = false;
    std::map<std::tuple<Op, std::uint32_t, std::uint32_t>, std::uint32_t> sig;
    for (std::uint32_t t = 0; t < nodes_.size(); ++t) {
      const Node& n = nodes_[t];
      if (n.op == Var) continue;
      auto key = std::make_tuple(n.op, find(n.a), n.op == Join ? find(n.b) : 0u);
      auto [it, fresh] = sig.emplace(key, t);
      if (!fresh) changed |= unite(t, it->second);
    }
    return changed;
  }

  void saturate() {
    for (;;) {
      bool changed = apply_laws();
      changed |= apply_congruence();
      if (!changed) return;
    }
  }

  std::vector<Node> nodes_;
  std::map<std::tuple<Op, std::uint32_t, std::uint32_t>, std::uint32_t> index_;
  std::vector<std::vector<std::uint32_t>> by_ops_;
  std::vector<std::uint32_t> parent_;
};

}  // namespace gatcwf::testing
