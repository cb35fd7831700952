// Recursive-descent parser for `.gat` declaration files.

#include <cctype>
#include <charconv>

#include "gatcwf/syntax.hpp"

namespace gatcwf {
namespace {

struct Token {
  enum class Type { Ident, Nat, Punct, End };
  Type type;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourcePos pos{line_, col_};
      if (at_end()) {
        out.push_back({Token::Type::End, "", pos});
        return out;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        if (c == '_' && peek(1) == '{') throw ParseError(pos, "unexpected '_{'");
        std::string s;
        while (!at_end()) {
          char d = peek();
          if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
            s += d;
            advance();
          } else if (d == '-' && std::isalnum(static_cast<unsigned char>(peek(1)))) {
            s += d;
            advance();
          } else {
            break;
          }
        }
        out.push_back({Token::Type::Ident, s, pos});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string s;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
          s += peek();
          advance();
        }
        out.push_back({Token::Type::Nat, s, pos});
      } else {
        static const char* const multi[] = {":=", "->", "\\/", "^+", "[@", "<>"};
        bool matched = false;
        for (const char* m : multi) {
          if (text_.compare(idx_, 2, m) == 0) {
            out.push_back({Token::Type::Punct, m, pos});
            advance();
            advance();
            matched = true;
            break;
          }
        }
        if (matched) continue;
        static const std::string single = "(){}[]<>,;:=.";
        if (single.find(c) == std::string::npos) {
          throw ParseError(pos, std::string("unexpected character '") + c + "'");
        }
        out.push_back({Token::Type::Punct, std::string(1, c), pos});
        advance();
      }
    }
  }

 private:
  bool at_end() const { return idx_ >= text_.size(); }
  char peek(std::size_t k = 0) const { return idx_ + k < text_.size() ? text_[idx_ + k] : '\0'; }
  void advance() {
    if (text_[idx_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++idx_;
  }
  void skip_space() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (peek() == '-' && peek(1) == '-') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t idx_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  static const char* const kws[] = {"id", "p",     "q",      "lam",  "app",  "Pi",   "U",   "El",
                                    "pi", "ucode", "lift",   "forall", "llam", "lapp", "v",   "o",
                                    "lid", "lp",   "in",     "def",  "check", "check-eq", "postulate",
                                    "level-ctx"};
  for (const char* k : kws) {
    if (s == k) return true;
  }
  return false;
}

class Parser {
 public:
  Parser(const std::string& text, Mode mode) : toks_(Lexer(text).run()), mode_(mode) {}

  std::vector<Decl> file() {
    std::vector<Decl> out;
    while (!at(Token::Type::End)) out.push_back(decl());
    return out;
  }

  Expr whole_expr() {
    Expr e = expr();
    expect_end();
    return e;
  }

  Sort whole_sort() {
    Sort s = sort();
    expect_end();
    return s;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Token::Type t) const { return cur().type == t; }
  bool at_punct(const char* p) const { return cur().type == Token::Type::Punct && cur().text == p; }
  bool at_ident(const char* p) const { return cur().type == Token::Type::Ident && cur().text == p; }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got = at(Token::Type::End) ? "end of input" : "'" + cur().text + "'";
    throw ParseError(cur().pos, "expected " + what + ", found " + got);
  }

  void expect(const char* p) {
    if (!at_punct(p)) fail(std::string("'") + p + "'");
    ++pos_;
  }
  void expect_kw(const char* k) {
    if (!at_ident(k)) fail(std::string("'") + k + "'");
    ++pos_;
  }
  bool accept(const char* p) {
    if (!at_punct(p)) return false;
    ++pos_;
    return true;
  }
  void expect_end() {
    if (!at(Token::Type::End)) fail("end of input");
  }

  std::string name() {
    if (!at(Token::Type::Ident) || is_keyword(cur().text)) fail("a name");
    return toks_[pos_++].text;
  }

  std::uint32_t nat() {
    if (!at(Token::Type::Nat)) fail("a natural number");
    const std::string& s = toks_[pos_++].text;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc()) throw ParseError(toks_[pos_ - 1].pos, "number out of range");
    return v;
  }

  void require_up(const SourcePos& pos, const std::string& what) const {
    if (mode_ != Mode::Up) throw ModeError(pos, what + " is only available with --mode up");
  }

  // ---- declarations

  Decl decl() {
    Decl d;
    d.pos = cur().pos;
    if (at_ident("level-ctx")) {
      ++pos_;
      require_up(d.pos, "level-ctx");
      d.kind = Decl::Kind::LevelCtx;
      d.level_ctx = nat();
    } else if (at_ident("postulate")) {
      ++pos_;
      if (at_ident("ctx")) {
        ++pos_;
        d.kind = Decl::Kind::PostulateCtx;
        d.name = name();
      } else if (at_ident("ty")) {
        ++pos_;
        d.kind = Decl::Kind::PostulateTy;
        d.name = name();
        expect_kw("in");
        d.lhs = expr();
      } else if (at_ident("tm")) {
        ++pos_;
        d.kind = Decl::Kind::PostulateTm;
        d.name = name();
        expect(":");
        d.lhs = expr();
        expect_kw("in");
        d.rhs = expr();
      } else if (at_ident("hom")) {
        ++pos_;
        d.kind = Decl::Kind::PostulateHom;
        d.name = name();
        expect(":");
        d.lhs = expr();
        expect("->");
        d.rhs = expr();
      } else {
        fail("'ctx', 'ty', 'tm' or 'hom'");
      }
    } else if (at_ident("def")) {
      ++pos_;
      d.kind = Decl::Kind::Def;
      d.name = name();
      if (accept(":")) d.sort = sort();
      expect(":=");
      d.lhs = expr();
    } else if (at_ident("check") || at_ident("check-eq")) {
      bool eq = at_ident("check-eq");
      ++pos_;
      d.kind = eq ? Decl::Kind::CheckEq : Decl::Kind::Check;
      if (accept("[")) {
        d.name = name();
        expect("]");
      }
      d.lhs = expr();
      if (eq) {
        expect("=");
        d.rhs = expr();
      }
      expect(":");
      d.sort = sort();
    } else {
      fail("a declaration");
    }
    expect(";");
    return d;
  }

  Sort sort() {
    Sort s;
    if (at_ident("ctx")) {
      ++pos_;
      s.kind = SortKind::Ctx;
    } else if (at_ident("hom")) {
      ++pos_;
      s.kind = SortKind::Hom;
      expect("(");
      s.ctx = expr();
      expect(",");
      s.tgt = expr();
      expect(")");
    } else if (at_ident("ty")) {
      ++pos_;
      s.kind = SortKind::Ty;
      expect("(");
      s.ctx = expr();
      expect(")");
    } else if (at_ident("tm")) {
      ++pos_;
      s.kind = SortKind::Tm;
      expect("(");
      s.ctx = expr();
      expect(",");
      s.type = expr();
      expect(")");
    } else {
      fail("a sort (ctx, hom, ty or tm)");
    }
    return s;
  }

  // ---- expressions

  // Composition `o` and extension `.` share one left-associative level.
  Expr expr() {
    Expr lhs = postfix();
    for (;;) {
      if (at_ident("o")) {
        ++pos_;
        lhs = comp(lhs, postfix());
      } else if (at_punct(".")) {
        ++pos_;
        lhs = ext(lhs, postfix());
      } else {
        return lhs;
      }
    }
  }

  Expr postfix() {
    Expr e = atom();
    for (;;) {
      if (at_punct("[@")) {
        require_up(cur().pos, "level substitution");
        ++pos_;
        auto s = lsubst_expr();
        expect("]");
        e = lsubst_raw(e, std::move(s));
      } else if (at_punct("[")) {
        ++pos_;
        Expr g = expr();
        expect("]");
        e = subst(e, g);
      } else {
        return e;
      }
    }
  }

  // Optional `(G)` annotation after a nullary operator.
  Expr opt_ctx_annot() {
    if (!accept("(")) return nullptr;
    Expr g = expr();
    expect(")");
    return g;
  }

  // Optional `; G` annotation before a closing parenthesis.
  Expr opt_semicolon_annot() {
    if (!accept(";")) return nullptr;
    return expr();
  }

  Expr atom() {
    SourcePos pos = cur().pos;
    if (at(Token::Type::Nat)) {
      if (cur().text != "1") fail("an expression");
      ++pos_;
      return unit(std::nullopt);
    }
    if (accept("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (accept("<>")) return empty(opt_ctx_annot());
    if (accept("<")) {
      Expr g = expr();
      expect(",");
      Expr a = expr();
      Expr ty = opt_semicolon_annot();
      expect(">");
      return pair(g, a, ty);
    }
    if (!at(Token::Type::Ident)) fail("an expression");
    std::string w = cur().text;
    if (!is_keyword(w)) {
      ++pos_;
      return ref(w);
    }
    ++pos_;
    if (w == "id") return id(opt_ctx_annot());
    if (w == "p" || w == "q") {
      Expr g, a;
      if (accept("(")) {
        g = expr();
        expect(",");
        a = expr();
        expect(")");
      }
      return w == "p" ? proj(g, a) : var(g, a);
    }
    if (w == "v") {
      expect("(");
      std::uint32_t k = nat();
      expect(")");
      Expr e = var(nullptr, nullptr);
      if (k == 0) return e;
      Expr w = proj(nullptr, nullptr);
      for (std::uint32_t i = 1; i < k; ++i) w = comp(proj(nullptr, nullptr), w);
      return subst(e, w);
    }
    if (w == "Pi") {
      expect("(");
      Expr a = expr();
      expect(",");
      Expr b = expr();
      expect(")");
      return pi(a, b);
    }
    if (w == "lam") {
      expect("(");
      Expr b = expr();
      expect(")");
      return lam(b);
    }
    if (w == "app") {
      expect("(");
      Expr c = expr();
      expect(",");
      Expr a = expr();
      expect(")");
      return app(c, a);
    }
    if (w == "U") {
      expect("(");
      UIdx l = level();
      Expr g = opt_semicolon_annot();
      expect(")");
      return univ(l, g);
    }
    if (w == "El") {
      expect("(");
      UIdx l = level();
      expect(",");
      Expr a = expr();
      expect(")");
      return el(l, a);
    }
    if (w == "pi") {
      expect("{");
      UIdx l = level();
      std::optional<UIdx> l2;
      if (accept(",")) l2 = level();
      expect("}");
      expect("(");
      Expr a = expr();
      expect(",");
      Expr b = expr();
      expect(")");
      return l2 ? pi_code(l, *l2, a, b) : pi_code_cumul(l, a, b);
    }
    if (w == "ucode" || w == "lift") {
      expect("{");
      UIdx l = level();
      expect(",");
      UIdx m = level();
      expect("}");
      if (w == "ucode") return ucode(l, m, opt_ctx_annot());
      expect("(");
      Expr a = expr();
      expect(")");
      return lift(l, m, a);
    }
    if (w == "forall" || w == "llam") {
      require_up(pos, w);
      expect("(");
      Expr b = expr();
      Expr g = opt_semicolon_annot();
      expect(")");
      return w == "forall" ? forall(b, g) : llam(b, g);
    }
    if (w == "lapp") {
      require_up(pos, w);
      expect("(");
      Expr c = expr();
      expect(",");
      UIdx l = level();
      expect(")");
      return lapp(c, l);
    }
    throw ParseError(pos, "unexpected keyword '" + w + "'");
  }

  // ---- levels

  UIdx level() {
    if (mode_ == Mode::Tower) {
      if (!at(Token::Type::Nat)) {
        if (at(Token::Type::Ident)) throw ModeError(cur().pos, "level variables are only available with --mode up");
        fail("a universe index");
      }
      return UIdx(nat());
    }
    return UIdx(level_term());
  }

  levels::LevelTerm level_term() {
    levels::LevelTerm lhs = level_next();
    if (at_punct("\\/")) {
      ++pos_;
      return levels::join(lhs, level_term());
    }
    return lhs;
  }

  levels::LevelTerm level_next() {
    levels::LevelTerm t = level_atom();
    while (accept("^+")) t = levels::next(t);
    return t;
  }

  levels::LevelTerm level_atom() {
    if (accept("(")) {
      auto t = level_term();
      expect(")");
      return t;
    }
    if (at(Token::Type::Nat)) {
      throw ParseError(cur().pos, "there are no level literals; use level variables a0, a1, ...");
    }
    if (at(Token::Type::Ident)) {
      const std::string& s = cur().text;
      if (s.size() >= 2 && s[0] == 'a' &&
          s.find_first_not_of("0123456789", 1) == std::string::npos) {
        ++pos_;
        return levels::var(static_cast<std::uint32_t>(std::stoul(s.substr(1))));
      }
    }
    fail("a level variable a0, a1, ...");
  }

  // ---- level substitutions

  LSubstExprPtr lsubst_expr() {
    LSubstExprPtr lhs = lsubst_atom();
    if (at_ident("o")) {
      ++pos_;
      auto rhs = lsubst_expr();
      return std::make_shared<const LSubstExpr>(LSubstExpr{LSubstExpr::Kind::Comp, lhs, rhs, {}});
    }
    return lhs;
  }

  LSubstExprPtr lsubst_atom() {
    using K = LSubstExpr::Kind;
    if (at_ident("lid")) {
      ++pos_;
      return std::make_shared<const LSubstExpr>(LSubstExpr{K::Id, nullptr, nullptr, {}});
    }
    if (at_ident("lp")) {
      ++pos_;
      return std::make_shared<const LSubstExpr>(LSubstExpr{K::P, nullptr, nullptr, {}});
    }
    if (accept("<>")) return std::make_shared<const LSubstExpr>(LSubstExpr{K::Empty, nullptr, nullptr, {}});
    if (accept("<")) {
      auto s = lsubst_expr();
      expect(",");
      auto l = level_term();
      expect(">");
      return std::make_shared<const LSubstExpr>(LSubstExpr{K::Pair, s, nullptr, {l}});
    }
    if (accept("(")) {
      if (at_ident("lid") || at_ident("lp") || at_punct("<>") || at_punct("<")) {
        auto s = lsubst_expr();
        expect(")");
        return s;
      }
      std::vector<levels::LevelTerm> entries;
      if (!at_punct(")")) {
        entries.push_back(level_term());
        while (accept(",")) entries.push_back(level_term());
      }
      expect(")");
      return std::make_shared<const LSubstExpr>(LSubstExpr{K::Tuple, nullptr, nullptr, std::move(entries)});
    }
    fail("a level substitution (lid, lp, <>, <s, l>, (l, ...))");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Mode mode_;
};

}  // namespace

std::vector<Decl> parse(const std::string& text, Mode mode) { return Parser(text, mode).file(); }
Expr parse_expr(const std::string& text, Mode mode) { return Parser(text, mode).whole_expr(); }
Sort parse_sort(const std::string& text, Mode mode) { return Parser(text, mode).whole_sort(); }

}  // namespace gatcwf
