#include <sstream>

#include "gatcwf/syntax.hpp"

namespace gatcwf {
namespace {

bool is_binary(const Expr& e) { return e && (e->kind == Kind::Comp || e->kind == Kind::Ext); }

class Printer {
 public:
  explicit Printer(std::ostream& os) : os_(os) {}

  void expr(const Expr& e) {
    if (!is_binary(e)) {
      postfix(e);
      return;
    }
    // Left-associative: a left operand of the same operator needs no parentheses.
    const Expr& l = e->args[0];
    const Expr& r = e->args[1];
    if (is_binary(l) && l->kind != e->kind) {
      paren(l);
    } else {
      expr(l);
    }
    os_ << (e->kind == Kind::Comp ? " o " : " . ");
    if (is_binary(r)) {
      paren(r);
    } else {
      postfix(r);
    }
  }

 private:
  void paren(const Expr& e) {
    os_ << '(';
    expr(e);
    os_ << ')';
  }

  void postfix(const Expr& e) {
    if (e->kind == Kind::Subst) {
      operand(e->args[0]);
      os_ << '[';
      expr(e->args[1]);
      os_ << ']';
    } else if (e->kind == Kind::LSubst) {
      operand(e->args[0]);
      os_ << "[@";
      if (e->lsubst) {
        os_ << levels::to_string(*e->lsubst);
      } else {
        os_ << to_string(*e->lsubst_expr);
      }
      os_ << ']';
    } else {
      atom(e);
    }
  }

  void operand(const Expr& e) {
    if (is_binary(e)) {
      paren(e);
    } else {
      postfix(e);
    }
  }

  void opt_annot(const Expr& g) {
    if (!g) return;
    os_ << '(';
    expr(g);
    os_ << ')';
  }

  void semi_annot(const Expr& g) {
    if (!g) return;
    os_ << "; ";
    expr(g);
  }

  void args2(const Expr& a, const Expr& b) {
    os_ << '(';
    expr(a);
    os_ << ", ";
    expr(b);
    os_ << ')';
  }

  void atom(const Expr& e) {
    switch (e->kind) {
      case Kind::Unit:
        os_ << '1';
        return;
      case Kind::Id:
        os_ << "id";
        opt_annot(e->args[0]);
        return;
      case Kind::Empty:
        os_ << "<>";
        opt_annot(e->args[0]);
        return;
      case Kind::Pair:
        os_ << "< ";
        expr(e->args[0]);
        os_ << ", ";
        expr(e->args[1]);
        semi_annot(e->args[2]);
        os_ << " >";
        return;
      case Kind::P:
      case Kind::Q:
        os_ << (e->kind == Kind::P ? "p" : "q");
        if (e->args[0] || e->args[1]) args2(e->args[0], e->args[1]);
        return;
      case Kind::Pi:
        os_ << "Pi";
        args2(e->args[0], e->args[1]);
        return;
      case Kind::Univ:
        os_ << "U(" << to_string(e->levels[0]);
        semi_annot(e->args[0]);
        os_ << ')';
        return;
      case Kind::El:
        os_ << "El(" << to_string(e->levels[0]) << ", ";
        expr(e->args[0]);
        os_ << ')';
        return;
      case Kind::Forall:
      case Kind::LLam:
        os_ << (e->kind == Kind::Forall ? "forall(" : "llam(");
        expr(e->args[0]);
        semi_annot(e->args[1]);
        os_ << ')';
        return;
      case Kind::Lam:
        os_ << "lam(";
        expr(e->args[0]);
        os_ << ')';
        return;
      case Kind::App:
        os_ << "app";
        args2(e->args[0], e->args[1]);
        return;
      case Kind::PiCode:
        os_ << "pi{" << to_string(e->levels[0]) << ", " << to_string(e->levels[1]) << '}';
        args2(e->args[0], e->args[1]);
        return;
      case Kind::PiCodeCumul:
        os_ << "pi{" << to_string(e->levels[0]) << '}';
        args2(e->args[0], e->args[1]);
        return;
      case Kind::UCode:
        os_ << "ucode{" << to_string(e->levels[0]) << ", " << to_string(e->levels[1]) << '}';
        opt_annot(e->args[0]);
        return;
      case Kind::Lift:
        os_ << "lift{" << to_string(e->levels[0]) << ", " << to_string(e->levels[1]) << "}(";
        expr(e->args[0]);
        os_ << ')';
        return;
      case Kind::LApp:
        os_ << "lapp(";
        expr(e->args[0]);
        os_ << ", " << to_string(e->levels[0]) << ')';
        return;
      case Kind::Ref:
      case Kind::Const:
        os_ << e->name;
        return;
      case Kind::Ext:
      case Kind::Comp:
      case Kind::Subst:
      case Kind::LSubst:
        paren(e);
        return;
    }
  }

  std::ostream& os_;
};

void print_sort(std::ostream& os, const Sort& s) {
  switch (s.kind) {
    case SortKind::Ctx:
      os << "ctx";
      return;
    case SortKind::Hom:
      os << "hom(" << print(s.ctx) << ", " << print(s.tgt) << ')';
      return;
    case SortKind::Ty:
      os << "ty(" << print(s.ctx) << ')';
      return;
    case SortKind::Tm:
      os << "tm(" << print(s.ctx) << ", " << print(s.type) << ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  if (!e) return "_";
  std::ostringstream os;
  Printer(os).expr(e);
  return os.str();
}

std::string print(const Decl& d) {
  std::ostringstream os;
  switch (d.kind) {
    case Decl::Kind::LevelCtx:
      os << "level-ctx " << d.level_ctx;
      break;
    case Decl::Kind::PostulateCtx:
      os << "postulate ctx " << d.name;
      break;
    case Decl::Kind::PostulateTy:
      os << "postulate ty " << d.name << " in " << print(d.lhs);
      break;
    case Decl::Kind::PostulateTm:
      os << "postulate tm " << d.name << " : " << print(d.lhs) << " in " << print(d.rhs);
      break;
    case Decl::Kind::PostulateHom:
      os << "postulate hom " << d.name << " : " << print(d.lhs) << " -> " << print(d.rhs);
      break;
    case Decl::Kind::Def:
      os << "def " << d.name;
      if (d.sort) {
        os << " : ";
        print_sort(os, *d.sort);
      }
      os << " := " << print(d.lhs);
      break;
    case Decl::Kind::Check:
    case Decl::Kind::CheckEq:
      os << (d.kind == Decl::Kind::Check ? "check " : "check-eq ");
      if (!d.name.empty()) os << '[' << d.name << "] ";
      os << print(d.lhs);
      if (d.kind == Decl::Kind::CheckEq) os << " = " << print(d.rhs);
      os << " : ";
      print_sort(os, *d.sort);
      break;
  }
  os << ';';
  return os.str();
}

std::string print(const std::vector<Decl>& decls) {
  std::string out;
  for (const auto& d : decls) out += print(d) + "\n";
  return out;
}

}  // namespace gatcwf
