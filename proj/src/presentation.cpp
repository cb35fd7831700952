#include "gatcwf/presentation.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gatcwf/conversion.hpp"
#include "gatcwf/kernel.hpp"
#include "gatcwf/levels.hpp"

namespace gatcwf::presentation {

// ---------------------------------------------------------------- parsing

namespace {

struct Tok {
  enum class Type { Ident, Punct, Label, End } type;
  std::string text;
  int line;
};

std::vector<Tok> lex(const std::string& src) {
  std::vector<Tok> out;
  std::size_t i = 0;
  int line = 1;
  auto peek = [&](std::size_t k) { return i + k < src.size() ? src[i + k] : '\0'; };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '-' && peek(1) == '-') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i < src.size()) {
        char d = src[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
          s += d;
          ++i;
        } else if (d == '-' && std::isalpha(static_cast<unsigned char>(peek(1)))) {
          s += d;
          ++i;
        } else {
          break;
        }
      }
      out.push_back({Tok::Type::Ident, s, line});
    } else if (c == '[') {
      std::size_t end = src.find(']', i);
      if (end == std::string::npos) throw SyntaxError(line, "unterminated label");
      std::string s = src.substr(i + 1, end - i - 1);
      for (char d : s) {
        if (std::isspace(static_cast<unsigned char>(d))) throw SyntaxError(line, "blank in label");
      }
      if (s.empty()) throw SyntaxError(line, "empty label");
      out.push_back({Tok::Type::Label, s, line});
      i = end + 1;
    } else if (std::string("(),:;=").find(c) != std::string::npos) {
      out.push_back({Tok::Type::Punct, std::string(1, c), line});
      ++i;
    } else {
      throw SyntaxError(line, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::Type::End, "", line});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  Presentation run() {
    Presentation p;
    while (cur().type != Tok::Type::End) p.decls.push_back(decl());
    return p;
  }

 private:
  const Tok& cur() const { return toks_[pos_]; }
  bool at(const char* punct) const { return cur().type == Tok::Type::Punct && cur().text == punct; }
  void expect(const char* punct) {
    if (!at(punct)) throw SyntaxError(cur().line, std::string("expected '") + punct + "'");
    ++pos_;
  }
  std::string ident() {
    if (cur().type != Tok::Type::Ident) throw SyntaxError(cur().line, "expected identifier");
    return toks_[pos_++].text;
  }

  Decl decl() {
    int line = cur().line;
    std::string kw = ident();
    Decl d;
    d.line = line;
    if (kw == "sort") {
      SortDecl s;
      s.name = ident();
      s.tele = telescope();
      d.item = std::move(s);
    } else if (kw == "op") {
      OpDecl o;
      o.name = ident();
      o.tele = telescope();
      expect(":");
      o.result = term();
      d.item = std::move(o);
    } else if (kw == "eq") {
      EqDecl e;
      if (cur().type == Tok::Type::Label) e.name = toks_[pos_++].text;
      e.tele = telescope();
      e.lhs = term();
      expect("=");
      e.rhs = term();
      expect(":");
      e.sort = term();
      d.item = std::move(e);
    } else {
      throw SyntaxError(line, "expected 'sort', 'op' or 'eq'");
    }
    expect(";");
    return d;
  }

  Telescope telescope() {
    Telescope out;
    expect("(");
    if (at(")")) {
      ++pos_;
      return out;
    }
    for (;;) {
      std::vector<std::string> names{ident()};
      while (cur().type == Tok::Type::Ident) names.push_back(ident());
      expect(":");
      Term sort = term();
      for (auto& n : names) out.push_back(Binding{std::move(n), sort});
      if (at(")")) break;
      expect(",");
    }
    ++pos_;
    return out;
  }

  Term term() {
    Term t;
    t.head = ident();
    if (at("(")) {
      ++pos_;
      if (!at(")")) {
        for (;;) {
          t.args.push_back(term());
          if (at(")")) break;
          expect(",");
        }
      }
      ++pos_;
    }
    return t;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Presentation parse(const std::string& text) { return Parser(lex(text)).run(); }

// --------------------------------------------------------------- printing

std::string print(const Term& t) {
  if (t.args.empty()) return t.head;
  std::string out = t.head + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += print(t.args[i]);
  }
  return out + ")";
}

namespace {

std::string print_tele(const Telescope& tele) {
  std::string out = "(";
  for (std::size_t i = 0; i < tele.size(); ++i) {
    if (i) out += ", ";
    out += tele[i].name + " : " + print(tele[i].sort);
  }
  return out + ")";
}

}  // namespace

std::string print(const Presentation& p) {
  std::string out;
  for (const auto& d : p.decls) {
    if (const auto* s = std::get_if<SortDecl>(&d.item)) {
      out += "sort " + s->name + " " + print_tele(s->tele) + ";\n";
    } else if (const auto* o = std::get_if<OpDecl>(&d.item)) {
      out += "op " + o->name + " " + print_tele(o->tele) + " : " + print(o->result) + ";\n";
    } else {
      const auto& e = std::get<EqDecl>(d.item);
      out += "eq ";
      if (!e.name.empty()) out += "[" + e.name + "] ";
      out += print_tele(e.tele) + "\n  " + print(e.lhs) + "\n  = " + print(e.rhs) + "\n  : " + print(e.sort) + ";\n";
    }
  }
  return out;
}

std::string decl_name(const Decl& d, std::size_t index) {
  if (const auto* s = std::get_if<SortDecl>(&d.item)) return s->name;
  if (const auto* o = std::get_if<OpDecl>(&d.item)) return o->name;
  const auto& e = std::get<EqDecl>(d.item);
  return e.name.empty() ? "eq@" + std::to_string(index) : e.name;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "OK";
    case Verdict::SortMismatch: return "SortMismatch";
    case Verdict::Unknown: return "Unknown";
    case Verdict::DuplicateName: return "DuplicateName";
    case Verdict::UnscopedVariable: return "UnscopedVariable";
    case Verdict::ArityMismatch: return "ArityMismatch";
  }
  return "?";
}

bool CheckReport::all_ok() const {
  for (const auto& d : decls) {
    if (d.verdict != Verdict::Ok) return false;
  }
  return true;
}

bool CheckReport::any_unknown() const {
  for (const auto& d : decls) {
    if (d.verdict == Verdict::Unknown) return true;
  }
  return false;
}

// --------------------------------------------------------------- checking

namespace {

struct Failure {
  Verdict verdict;
  std::string message;
};

struct OutOfFuel {};

using Subst = std::map<std::string, Term>;

Term substitute(const Term& t, const Subst& s) {
  if (t.args.empty()) {
    if (auto it = s.find(t.head); it != s.end()) return it->second;
    return t;
  }
  Term out{t.head, {}};
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(substitute(a, s));
  return out;
}

void collect_vars(const Term& t, const std::set<std::string>& vars, std::set<std::string>& out) {
  if (t.args.empty() && vars.count(t.head)) out.insert(t.head);
  for (const auto& a : t.args) collect_vars(a, vars, out);
}

// `b` is `a` with variables renamed bijectively.
bool renaming_of(const Term& a, const Term& b, const std::set<std::string>& vars, std::map<std::string, std::string>& fwd,
                 std::map<std::string, std::string>& bwd) {
  bool va = a.args.empty() && vars.count(a.head);
  bool vb = b.args.empty() && vars.count(b.head);
  if (va || vb) {
    if (!(va && vb)) return false;
    auto [i, fresh_f] = fwd.emplace(a.head, b.head);
    auto [j, fresh_b] = bwd.emplace(b.head, a.head);
    return i->second == b.head && j->second == a.head;
  }
  if (a.head != b.head || a.args.size() != b.args.size()) return false;
  for (std::size_t k = 0; k < a.args.size(); ++k) {
    if (!renaming_of(a.args[k], b.args[k], vars, fwd, bwd)) return false;
  }
  return true;
}

struct RewriteRule {
  std::set<std::string> vars;
  Term lhs;
  Term rhs;
};

class Checker {
 public:
  explicit Checker(std::size_t fuel) : fuel_(fuel) {}

  DeclVerdict check(const Decl& d, std::size_t index) {
    DeclVerdict out;
    out.name = decl_name(d, index);
    out.line = d.line;
    steps_ = 0;
    try {
      std::visit([&](const auto& item) { check_item(item); }, d.item);
    } catch (const Failure& f) {
      out.verdict = f.verdict;
      out.message = f.message;
    } catch (const OutOfFuel&) {
      out.verdict = Verdict::Unknown;
      out.message = "fuel exhausted";
    }
    out.steps = steps_;
    return out;
  }

 private:
  using Ctx = std::map<std::string, Term>;

  void claim_symbol(const std::string& name) {
    if (sorts_.count(name) || ops_.count(name)) throw Failure{Verdict::DuplicateName, "duplicate name " + name};
  }

  Ctx telescope(const Telescope& tele) {
    Ctx ctx;
    for (const auto& b : tele) {
      if (ctx.count(b.name)) throw Failure{Verdict::DuplicateName, "variable " + b.name + " bound twice"};
      if (sorts_.count(b.name) || ops_.count(b.name)) {
        throw Failure{Verdict::DuplicateName, "variable " + b.name + " shadows a symbol"};
      }
      well_formed(b.sort, ctx);
      ctx.emplace(b.name, b.sort);
    }
    return ctx;
  }

  void check_item(const SortDecl& s) {
    claim_symbol(s.name);
    telescope(s.tele);
    sorts_.emplace(s.name, s.tele);
  }

  void check_item(const OpDecl& o) {
    claim_symbol(o.name);
    Ctx ctx = telescope(o.tele);
    well_formed(o.result, ctx);
    ops_.emplace(o.name, o);
  }

  void check_item(const EqDecl& e) {
    if (!e.name.empty()) {
      if (!labels_.insert(e.name).second) throw Failure{Verdict::DuplicateName, "duplicate equation " + e.name};
    }
    Ctx ctx = telescope(e.tele);
    well_formed(e.sort, ctx);
    Term ls = infer(e.lhs, ctx);
    Term rs = infer(e.rhs, ctx);
    expect_conv(ls, e.sort, "left-hand side");
    expect_conv(rs, e.sort, "right-hand side");
    add_rule(e);
  }

  void add_rule(const EqDecl& e) {
    RewriteRule r;
    for (const auto& b : e.tele) r.vars.insert(b.name);
    r.lhs = e.lhs;
    r.rhs = e.rhs;
    if (r.lhs.args.empty() && r.vars.count(r.lhs.head)) return;
    std::set<std::string> lv, rv;
    collect_vars(r.lhs, r.vars, lv);
    collect_vars(r.rhs, r.vars, rv);
    for (const auto& v : rv) {
      if (!lv.count(v)) return;
    }
    std::map<std::string, std::string> fwd, bwd;
    if (renaming_of(r.lhs, r.rhs, r.vars, fwd, bwd)) return;
    rules_.push_back(std::move(r));
  }

  // Instantiates a telescope with arguments, checking each one.
  Subst instantiate(const std::string& what, const Telescope& tele, const std::vector<Term>& args, const Ctx& ctx) {
    if (tele.size() != args.size()) {
      throw Failure{Verdict::ArityMismatch, what + " expects " + std::to_string(tele.size()) + " arguments, got " +
                                                std::to_string(args.size())};
    }
    Subst s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      Term got = infer(args[i], ctx);
      Term want = substitute(tele[i].sort, s);
      expect_conv(got, want, "argument " + tele[i].name + " of " + what);
      s.emplace(tele[i].name, args[i]);
    }
    return s;
  }

  void well_formed(const Term& sort, const Ctx& ctx) {
    auto it = sorts_.find(sort.head);
    if (it == sorts_.end()) {
      if (ops_.count(sort.head) || ctx.count(sort.head)) {
        throw Failure{Verdict::SortMismatch, sort.head + " is not a sort symbol"};
      }
      throw Failure{Verdict::UnscopedVariable, "unknown sort " + sort.head};
    }
    instantiate(sort.head, it->second, sort.args, ctx);
  }

  Term infer(const Term& t, const Ctx& ctx) {
    if (auto v = ctx.find(t.head); v != ctx.end()) {
      if (!t.args.empty()) throw Failure{Verdict::ArityMismatch, "variable " + t.head + " applied to arguments"};
      return v->second;
    }
    auto it = ops_.find(t.head);
    if (it == ops_.end()) {
      if (sorts_.count(t.head)) throw Failure{Verdict::SortMismatch, "sort " + t.head + " used as a term"};
      throw Failure{Verdict::UnscopedVariable, "unscoped name " + t.head};
    }
    Subst s = instantiate(t.head, it->second.tele, t.args, ctx);
    return substitute(it->second.result, s);
  }

  void expect_conv(const Term& got, const Term& want, const std::string& where) {
    if (got == want) return;
    budget_ = fuel_;
    Term a = normalize(got);
    Term b = normalize(want);
    if (a == b) return;
    throw Failure{Verdict::SortMismatch, where + ": expected " + print(b) + ", got " + print(a)};
  }

  // Innermost rewriting with the equations accepted so far.
  Term normalize(const Term& t) {
    Term cur{t.head, {}};
    cur.args.reserve(t.args.size());
    for (const auto& a : t.args) cur.args.push_back(normalize(a));
    for (;;) {
      std::optional<Term> next;
      for (const auto& r : rules_) {
        Subst s;
        if (match_root(r, cur, s)) {
          next = substitute(r.rhs, s);
          break;
        }
      }
      if (!next) return cur;
      if (budget_ == 0) throw OutOfFuel{};
      --budget_;
      ++steps_;
      cur = normalize(*next);
    }
  }

  // Matching modulo the equations at annotation positions: an argument that
  // fails to match syntactically is compared after instantiation and
  // normalization once its variables are bound elsewhere. Arguments are
  // visited right to left so principal arguments bind before annotations.
  bool match_root(const RewriteRule& r, const Term& t, Subst& s) {
    if (r.lhs.head != t.head || r.lhs.args.size() != t.args.size()) return false;
    std::vector<std::pair<const Term*, const Term*>> deferred;
    if (!match_lenient(r, r.lhs, t, s, deferred)) return false;
    for (const auto& [pat, sub] : deferred) {
      if (normalize(substitute(*pat, s)) != *sub) return false;
    }
    return true;
  }

  bool bound(const RewriteRule& r, const Term& pat, const Subst& s) const {
    std::set<std::string> vs;
    collect_vars(pat, r.vars, vs);
    for (const auto& v : vs) {
      if (!s.count(v)) return false;
    }
    return true;
  }

  bool match_strict(const RewriteRule& r, const Term& pat, const Term& t, Subst& s) const {
    if (pat.args.empty() && r.vars.count(pat.head)) {
      auto [it, fresh] = s.emplace(pat.head, t);
      return fresh || it->second == t;
    }
    if (pat.head != t.head || pat.args.size() != t.args.size()) return false;
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (!match_strict(r, pat.args[i], t.args[i], s)) return false;
    }
    return true;
  }

  bool match_lenient(const RewriteRule& r, const Term& pat, const Term& t, Subst& s,
                     std::vector<std::pair<const Term*, const Term*>>& deferred) const {
    std::vector<std::size_t> failed;
    for (std::size_t i = t.args.size(); i-- > 0;) {
      Subst trial = s;
      if (match_strict(r, pat.args[i], t.args[i], trial)) {
        s = std::move(trial);
      } else {
        failed.push_back(i);
      }
    }
    for (auto i : failed) {
      const Term& pa = pat.args[i];
      const Term& ta = t.args[i];
      if (bound(r, pa, s)) {
        deferred.emplace_back(&pa, &ta);
      } else if (pa.head == ta.head && pa.args.size() == ta.args.size() && !r.vars.count(pa.head)) {
        if (!match_lenient(r, pa, ta, s, deferred)) return false;
      } else {
        return false;
      }
    }
    return true;
  }

  std::size_t fuel_;
  std::size_t budget_ = 0;
  std::size_t steps_ = 0;
  std::map<std::string, Telescope> sorts_;
  std::map<std::string, OpDecl> ops_;
  std::set<std::string> labels_;
  std::vector<RewriteRule> rules_;
};

}  // namespace

CheckReport check_presentation(const Presentation& p, std::size_t fuel) {
  CheckReport report;
  Checker checker(fuel);
  for (std::size_t i = 0; i < p.decls.size(); ++i) report.decls.push_back(checker.check(p.decls[i], i));
  return report;
}

// ---------------------------------------------------------------- tower

namespace {

const char* const kTowerBase = R"(sort ctx ();
sort hom (D : ctx, G : ctx);
sort ty (G : ctx);
sort tm (G : ctx, A : ty(G));
op id (G : ctx) : hom(G, G);
op comp (X : ctx, D : ctx, G : ctx, g : hom(D, G), d : hom(X, D)) : hom(X, G);
op ty-sub (G : ctx, D : ctx, A : ty(G), g : hom(D, G)) : ty(D);
op tm-sub (G : ctx, D : ctx, A : ty(G), g : hom(D, G), a : tm(G, A)) : tm(D, ty-sub(G, D, A, g));
op one () : ctx;
op empty (G : ctx) : hom(G, one);
op ext (G : ctx, A : ty(G)) : ctx;
op pair (D : ctx, G : ctx, A : ty(G), g : hom(D, G), a : tm(D, ty-sub(G, D, A, g))) : hom(D, ext(G, A));
op p (G : ctx, A : ty(G)) : hom(ext(G, A), G);
op q (G : ctx, A : ty(G)) : tm(ext(G, A), ty-sub(G, ext(G, A), A, p(G, A)));
eq [comp-id-l] (D G : ctx, g : hom(D, G)) comp(D, G, G, id(G), g) = g : hom(D, G);
eq [comp-id-r] (D G : ctx, g : hom(D, G)) comp(D, D, G, g, id(D)) = g : hom(D, G);
eq [comp-assoc] (Y X D G : ctx, g : hom(D, G), d : hom(X, D), x : hom(Y, X))
  comp(Y, X, G, comp(X, D, G, g, d), x) = comp(Y, D, G, g, comp(Y, X, D, d, x)) : hom(Y, G);
eq [ty-sub-id] (G : ctx, A : ty(G)) ty-sub(G, G, A, id(G)) = A : ty(G);
eq [ty-sub-comp] (X D G : ctx, A : ty(G), g : hom(D, G), d : hom(X, D))
  ty-sub(D, X, ty-sub(G, D, A, g), d) = ty-sub(G, X, A, comp(X, D, G, g, d)) : ty(X);
eq [tm-sub-id] (G : ctx, A : ty(G), a : tm(G, A)) tm-sub(G, G, A, id(G), a) = a : tm(G, A);
eq [tm-sub-comp] (X D G : ctx, A : ty(G), g : hom(D, G), d : hom(X, D), a : tm(G, A))
  tm-sub(D, X, ty-sub(G, D, A, g), d, tm-sub(G, D, A, g, a)) = tm-sub(G, X, A, comp(X, D, G, g, d), a)
  : tm(X, ty-sub(G, X, A, comp(X, D, G, g, d)));
eq [id-unit] () id(one) = empty(one) : hom(one, one);
eq [empty-comp] (D G : ctx, g : hom(D, G)) comp(D, G, one, empty(G), g) = empty(D) : hom(D, one);
eq [p-pair] (D G : ctx, A : ty(G), g : hom(D, G), a : tm(D, ty-sub(G, D, A, g)))
  comp(D, ext(G, A), G, p(G, A), pair(D, G, A, g, a)) = g : hom(D, G);
eq [q-pair] (D G : ctx, A : ty(G), g : hom(D, G), a : tm(D, ty-sub(G, D, A, g)))
  tm-sub(ext(G, A), D, ty-sub(G, ext(G, A), A, p(G, A)), pair(D, G, A, g, a), q(G, A)) = a
  : tm(D, ty-sub(G, D, A, g));
eq [pair-comp] (X D G : ctx, A : ty(G), g : hom(D, G), a : tm(D, ty-sub(G, D, A, g)), d : hom(X, D))
  comp(X, D, ext(G, A), pair(D, G, A, g, a), d)
  = pair(X, G, A, comp(X, D, G, g, d), tm-sub(D, X, ty-sub(G, D, A, g), d, a)) : hom(X, ext(G, A));
eq [id-ext] (G : ctx, A : ty(G)) pair(ext(G, A), G, A, p(G, A), q(G, A)) = id(ext(G, A))
  : hom(ext(G, A), ext(G, A));
op Pi (G : ctx, A : ty(G), B : ty(ext(G, A))) : ty(G);
op lam (G : ctx, A : ty(G), B : ty(ext(G, A)), b : tm(ext(G, A), B)) : tm(G, Pi(G, A, B));
op app (G : ctx, A : ty(G), B : ty(ext(G, A)), c : tm(G, Pi(G, A, B)), a : tm(G, A))
  : tm(G, ty-sub(ext(G, A), G, B, pair(G, G, A, id(G), a)));
)";

// `g^dagger` for `g : hom(D, G)` and `A : ty(G)`, all given as text.
std::string dagger(const std::string& D, const std::string& G, const std::string& A, const std::string& g) {
  std::string Ag = "ty-sub(" + G + ", " + D + ", " + A + ", " + g + ")";
  std::string DA = "ext(" + D + ", " + Ag + ")";
  return "pair(" + DA + ", " + G + ", " + A + ", comp(" + DA + ", " + D + ", " + G + ", " + g + ", p(" + D + ", " + Ag +
         ")), q(" + D + ", " + Ag + "))";
}

std::string tower_pi_eqs() {
  const std::string dag = dagger("D", "G", "A", "g");
  const std::string Ag = "ty-sub(G, D, A, g)";
  const std::string Bd = "ty-sub(ext(G, A), ext(D, " + Ag + "), B, " + dag + ")";
  const std::string tele = "(D G : ctx, A : ty(G), B : ty(ext(G, A)), g : hom(D, G)";
  const std::string pdag = dagger("ext(G, A)", "G", "A", "p(G, A)");
  const std::string Ap = "ty-sub(G, ext(G, A), A, p(G, A))";
  std::string s;
  s += "eq [pi-sub] " + tele + ")\n  ty-sub(G, D, Pi(G, A, B), g) = Pi(D, " + Ag + ", " + Bd + ") : ty(D);\n";
  s += "eq [lam-sub] " + tele + ", b : tm(ext(G, A), B))\n  tm-sub(G, D, Pi(G, A, B), g, lam(G, A, B, b))\n  = lam(D, " +
       Ag + ", " + Bd + ", tm-sub(ext(G, A), ext(D, " + Ag + "), B, " + dag + ", b))\n  : tm(D, Pi(D, " + Ag + ", " +
       Bd + "));\n";
  s += "eq [app-sub] " + tele +
       ", c : tm(G, Pi(G, A, B)), a : tm(G, A))\n  tm-sub(G, D, ty-sub(ext(G, A), G, B, pair(G, G, A, id(G), a)), g, "
       "app(G, A, B, c, a))\n  = app(D, " +
       Ag + ", " + Bd + ", tm-sub(G, D, Pi(G, A, B), g, c), tm-sub(G, D, A, g, a))\n" +
       "  : tm(D, ty-sub(ext(G, A), D, B, pair(D, G, A, g, tm-sub(G, D, A, g, a))));\n";
  s += "eq [beta] (G : ctx, A : ty(G), B : ty(ext(G, A)), b : tm(ext(G, A), B), a : tm(G, A))\n"
       "  app(G, A, B, lam(G, A, B, b), a) = tm-sub(ext(G, A), G, B, pair(G, G, A, id(G), a), b)\n"
       "  : tm(G, ty-sub(ext(G, A), G, B, pair(G, G, A, id(G), a)));\n";
  s += "eq [eta] (G : ctx, A : ty(G), B : ty(ext(G, A)), c : tm(G, Pi(G, A, B)))\n  lam(G, A, B, app(ext(G, A), " + Ap +
       ", ty-sub(ext(G, A), ext(ext(G, A), " + Ap + "), B, " + pdag +
       "), tm-sub(G, ext(G, A), Pi(G, A, B), p(G, A), c), q(G, A))) = c\n  : tm(G, Pi(G, A, B));\n";
  return s;
}

std::string idx(std::uint32_t k) { return std::to_string(k); }

std::string tower_stage(std::uint32_t k, bool cumulative) {
  const std::string K = idx(k);
  const std::string U = "U_" + K;
  const std::string El = "El_" + K;
  std::string s;
  s += "op " + U + " (G : ctx) : ty(G);\n";
  s += "op " + El + " (G : ctx, a : tm(G, " + U + "(G))) : ty(G);\n";
  s += "eq [univ-sub." + K + "] (D G : ctx, g : hom(D, G)) ty-sub(G, D, " + U + "(G), g) = " + U + "(D) : ty(D);\n";
  s += "eq [el-sub." + K + "] (D G : ctx, g : hom(D, G), a : tm(G, " + U + "(G)))\n  ty-sub(G, D, " + El +
       "(G, a), g) = " + El + "(D, tm-sub(G, D, " + U + "(G), g, a)) : ty(D);\n";
  for (std::uint32_t l = 0; l < k; ++l) {
    const std::string code = "ucode_" + idx(l) + "_" + K;
    const std::string tag = idx(l) + "_" + K;
    s += "op " + code + " (G : ctx) : tm(G, " + U + "(G));\n";
    s += "eq [ucode-sub." + tag + "] (D G : ctx, g : hom(D, G))\n  tm-sub(G, D, " + U + "(G), g, " + code + "(G)) = " +
         code + "(D) : tm(D, " + U + "(D));\n";
    s += "eq [el-ucode." + tag + "] (G : ctx) " + El + "(G, " + code + "(G)) = U_" + idx(l) + "(G) : ty(G);\n";
  }
  for (std::uint32_t l = 0; l <= k; ++l) {
    for (std::uint32_t m = 0; m <= k; ++m) {
      if (std::max(l, m) != k) continue;
      const std::string tag = idx(l) + "_" + idx(m);
      const std::string code = "pi_" + tag;
      const std::string Ul = "U_" + idx(l);
      const std::string Um = "U_" + idx(m);
      auto tele = [&](const std::string& G) {
        std::string Ea = "El_" + idx(l) + "(" + G + ", a)";
        return "a : tm(" + G + ", " + Ul + "(" + G + ")), b : tm(ext(" + G + ", " + Ea + "), " + Um + "(ext(" + G +
               ", " + Ea + ")))";
      };
      s += "op " + code + " (G : ctx, " + tele("G") + ") : tm(G, " + U + "(G));\n";
      const std::string EaG = "El_" + idx(l) + "(G, a)";
      const std::string dag = dagger("D", "G", EaG, "g");
      const std::string ag = "tm-sub(G, D, " + Ul + "(G), g, a)";
      s += "eq [picode-sub." + tag + "] (D G : ctx, g : hom(D, G), " + tele("G") + ")\n  tm-sub(G, D, " + U +
           "(G), g, " + code + "(G, a, b))\n  = " + code + "(D, " + ag + ", tm-sub(ext(G, " + EaG +
           "), ext(D, ty-sub(G, D, " + EaG + ", g)), " + Um + "(ext(G, " + EaG + ")), " + dag + ", b))\n  : tm(D, " + U +
           "(D));\n";
      s += "eq [el-picode." + tag + "] (G : ctx, " + tele("G") + ")\n  " + El + "(G, " + code + "(G, a, b)) = Pi(G, " +
           EaG + ", El_" + idx(m) + "(ext(G, " + EaG + "), b)) : ty(G);\n";
    }
  }
  if (!cumulative) return s;
  for (std::uint32_t l = 0; l < k; ++l) {
    const std::string tag = idx(l) + "_" + K;
    const std::string lift = "lift_" + tag;
    const std::string Ul = "U_" + idx(l);
    s += "op " + lift + " (G : ctx, a : tm(G, " + Ul + "(G))) : tm(G, " + U + "(G));\n";
    s += "eq [lift-sub." + tag + "] (D G : ctx, g : hom(D, G), a : tm(G, " + Ul + "(G)))\n  tm-sub(G, D, " + U +
         "(G), g, " + lift + "(G, a)) = " + lift + "(D, tm-sub(G, D, " + Ul + "(G), g, a)) : tm(D, " + U + "(D));\n";
    s += "eq [el-lift." + tag + "] (G : ctx, a : tm(G, " + Ul + "(G))) " + El + "(G, " + lift + "(G, a)) = El_" +
         idx(l) + "(G, a) : ty(G);\n";
    for (std::uint32_t j = 0; j < l; ++j) {
      s += "eq [lift-ucode." + idx(j) + "_" + tag + "] (G : ctx) " + lift + "(G, ucode_" + idx(j) + "_" + idx(l) +
           "(G)) = ucode_" + idx(j) + "_" + K + "(G) : tm(G, " + U + "(G));\n";
    }
  }
  {
    const std::string code = "pic_" + K;
    auto tele = [&](const std::string& u, const std::string& el) {
      return "a : tm(G, " + u + "(G)), b : tm(ext(G, " + el + "(G, a)), " + u + "(ext(G, " + el + "(G, a))))";
    };
    s += "op " + code + " (G : ctx, " + tele(U, El) + ") : tm(G, " + U + "(G));\n";
    const std::string Ea = El + "(G, a)";
    s += "eq [picode-cumul-sub." + K + "] (D G : ctx, g : hom(D, G), " + tele(U, El) + ")\n  tm-sub(G, D, " + U +
         "(G), g, " + code + "(G, a, b))\n  = " + code + "(D, tm-sub(G, D, " + U + "(G), g, a), tm-sub(ext(G, " + Ea +
         "), ext(D, ty-sub(G, D, " + Ea + ", g)), " + U + "(ext(G, " + Ea + ")), " + dagger("D", "G", Ea, "g") +
         ", b))\n  : tm(D, " + U + "(D));\n";
    s += "eq [el-picode-cumul." + K + "] (G : ctx, " + tele(U, El) + ")\n  " + El + "(G, " + code +
         "(G, a, b)) = Pi(G, " + Ea + ", " + El + "(ext(G, " + Ea + "), b)) : ty(G);\n";
    for (std::uint32_t l = 0; l < k; ++l) {
      const std::string tag = idx(l) + "_" + K;
      const std::string Ul = "U_" + idx(l);
      const std::string Ell = "El_" + idx(l);
      const std::string lift = "lift_" + tag;
      const std::string Eal = Ell + "(G, a)";
      s += "eq [lift-picode-cumul." + tag + "] (G : ctx, " + tele(Ul, Ell) + ")\n  " + lift + "(G, pic_" + idx(l) +
           "(G, a, b)) = " + code + "(G, " + lift + "(G, a), " + lift + "(ext(G, " + Eal + "), b)) : tm(G, " + U +
           "(G));\n";
    }
  }
  return s;
}

}  // namespace

Presentation truncate_tower(std::uint32_t n, bool cumulative) {
  std::string text = kTowerBase + tower_pi_eqs();
  for (std::uint32_t k = 0; k < n; ++k) text += tower_stage(k, cumulative);
  return parse(text);
}

// ------------------------------------------------------------ cross-check

namespace {

// Number of level and proof arguments dropped by the tower variant.
int level_params(const std::string& rule) {
  static const std::map<std::string, int> table = {
      {"U", 1}, {"El", 1}, {"pi-code", 2}, {"ucode", 3}, {"lift", 3}, {"pi-code-cumul", 1},
  };
  auto it = table.find(rule);
  return it == table.end() ? 0 : it->second;
}

std::optional<std::string> tower_family(const std::string& name) {
  static const std::map<std::string, std::string> families = {
      {"U", "U"}, {"El", "El"}, {"pi", "pi-code"}, {"ucode", "ucode"}, {"lift", "lift"}, {"pic", "pi-code-cumul"},
  };
  auto us = name.find('_');
  if (us == std::string::npos) return std::nullopt;
  for (std::size_t i = us; i < name.size(); ++i) {
    if (name[i] != '_' && !std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  }
  auto it = families.find(name.substr(0, us));
  if (it == families.end()) return std::nullopt;
  return it->second;
}

std::string rule_base(const std::string& name) {
  auto dot = name.find('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

}  // namespace

std::vector<std::string> cross_check(const Presentation& p) {
  std::vector<std::string> problems;
  bool up = false;
  for (const auto& d : p.decls) {
    if (const auto* s = std::get_if<SortDecl>(&d.item); s && s->name == "lctx") up = true;
  }

  std::map<std::string, int> kernel_ops;
  for (const auto& r : kernel::typing_rules()) {
    if (up || r.in_tower) kernel_ops.emplace(r.name, r.arity);
  }
  std::map<std::string, int> level_ops;
  if (up) {
    for (const auto& [name, arity] : levels::operator_table()) level_ops.emplace(name, arity);
  }
  std::set<std::string> kernel_eqs;
  for (const auto& r : conv::rule_table()) {
    std::string n = r.name;
    if (n.size() > 3 && n.compare(n.size() - 3, 3, "-rl") == 0) n.resize(n.size() - 3);
    if (!up) {
      // Level substitution and level products are absent from the tower.
      if (n.rfind("lsub-", 0) == 0 || n.find("-lsub-") != std::string::npos) continue;
      if (n == "forall-sub" || n == "llam-sub" || n == "lapp-sub" || n == "lbeta" || n == "leta") continue;
    }
    kernel_eqs.insert(n);
  }
  std::set<std::string> level_eqs;
  if (up) level_eqs.insert(levels::law_names().begin(), levels::law_names().end());

  std::set<std::string> seen_ops, seen_eqs;
  for (std::size_t i = 0; i < p.decls.size(); ++i) {
    const auto& d = p.decls[i];
    if (const auto* o = std::get_if<OpDecl>(&d.item)) {
      int arity = static_cast<int>(o->tele.size());
      std::string name = o->name;
      int expected = 0;
      if (auto it = kernel_ops.find(name); it != kernel_ops.end()) {
        expected = up ? it->second : it->second - 1;
      } else if (auto lt = level_ops.find(name); lt != level_ops.end()) {
        expected = lt->second;
      } else if (auto fam = up ? std::nullopt : tower_family(name); fam && kernel_ops.count(*fam)) {
        name = *fam;
        expected = kernel_ops.at(name) - 1 - level_params(name);
      } else {
        problems.push_back("operator " + o->name + " has no kernel typing rule");
        continue;
      }
      seen_ops.insert(name);
      if (arity != expected) {
        problems.push_back("operator " + o->name + " has " + std::to_string(arity) + " arguments, kernel expects " +
                           std::to_string(expected));
      }
    } else if (const auto* e = std::get_if<EqDecl>(&d.item)) {
      if (e->name.empty()) {
        problems.push_back("equation at line " + std::to_string(d.line) + " has no name");
        continue;
      }
      std::string base = rule_base(e->name);
      if (!kernel_eqs.count(base) && !level_eqs.count(base)) {
        problems.push_back("equation " + e->name + " has no rewrite rule");
        continue;
      }
      seen_eqs.insert(base);
    }
  }
  if (up) {
    for (const auto& [name, arity] : kernel_ops) {
      if (!seen_ops.count(name)) problems.push_back("kernel rule " + name + " has no operator");
    }
    for (const auto& [name, arity] : level_ops) {
      if (!seen_ops.count(name)) problems.push_back("level operator " + name + " is not declared");
    }
    for (const auto& name : kernel_eqs) {
      if (!seen_eqs.count(name)) problems.push_back("rewrite rule " + name + " has no equation");
    }
    for (const auto& name : level_eqs) {
      if (!seen_eqs.count(name)) problems.push_back("level law " + name + " has no equation");
    }
  }
  return problems;
}

// -------------------------------------------------------------------- run

int run(const std::vector<std::string>& files, std::size_t fuel, bool cross, bool json, std::ostream& out,
        std::ostream& err) {
  bool refuted = false;
  bool unknown = false;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      err << file << ": cannot read file\n";
      return 3;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Presentation p;
    try {
      p = parse(buf.str());
    } catch (const SyntaxError& ex) {
      if (json) {
        nlohmann::ordered_json j{{"file", file}, {"line", ex.line()}, {"name", "parse"}, {"verdict", "ParseError"},
                                 {"message", ex.what()}};
        out << j.dump() << '\n';
      } else {
        out << file << ':' << ex.line() << ": parse: ParseError: " << ex.what() << '\n';
      }
      refuted = true;
      continue;
    }
    CheckReport report = check_presentation(p, fuel);
    for (const auto& d : report.decls) {
      if (json) {
        nlohmann::ordered_json j{{"file", file}, {"line", d.line}, {"name", d.name}, {"verdict", to_string(d.verdict)},
                                 {"steps", d.steps}};
        if (!d.message.empty()) j["message"] = d.message;
        out << j.dump() << '\n';
      } else {
        out << file << ':' << d.line << ": " << d.name << ": " << to_string(d.verdict);
        if (!d.message.empty()) out << ": " << d.message;
        out << '\n';
      }
      if (d.verdict == Verdict::Unknown) {
        unknown = true;
      } else if (d.verdict != Verdict::Ok) {
        refuted = true;
      }
    }
    if (cross) {
      for (const auto& problem : cross_check(p)) {
        out << file << ": cross-check: " << problem << '\n';
        refuted = true;
      }
    }
  }
  return refuted ? 1 : unknown ? 2 : 0;
}

}  // namespace gatcwf::presentation
