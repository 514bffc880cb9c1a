#include <sstream>

#include "uvleak/textio.hpp"

namespace uvleak {

namespace {

// Higher binds tighter.
int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::LogicalOr: return 1;
    case BinaryOp::LogicalAnd: return 2;
    case BinaryOp::BitOr: return 3;
    case BinaryOp::BitXor: return 4;
    case BinaryOp::BitAnd: return 5;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 6;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 7;
    case BinaryOp::Shl:
    case BinaryOp::Shr: return 8;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 9;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 10;
  }
  return 0;
}

constexpr int kTernaryPrec = 0;
constexpr int kUnaryPrec = 11;
constexpr int kPostfixPrec = 12;

const char* spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::BitAnd: return "&";
    case BinaryOp::BitOr: return "|";
    case BinaryOp::BitXor: return "^";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::LogicalAnd: return "&&";
    case BinaryOp::LogicalOr: return "||";
  }
  return "?";
}

int prec_of(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Binary: return precedence(e.binary_op());
    case ExprKind::Ite: return kTernaryPrec;
    case ExprKind::Unary: return kUnaryPrec;
    default: return kPostfixPrec;
  }
}

void print(std::ostream& os, const Expr& e, int min_prec);

void print_wrapped(std::ostream& os, const Expr& e, int min_prec) {
  if (prec_of(e) < min_prec) {
    os << '(';
    print(os, e, kTernaryPrec);
    os << ')';
  } else {
    print(os, e, min_prec);
  }
}

void print(std::ostream& os, const Expr& e, int min_prec) {
  (void)min_prec;
  switch (e.kind()) {
    case ExprKind::Const:
      os << e.value().str();
      break;
    case ExprKind::Ref:
      os << e.name();
      break;
    case ExprKind::Unary:
      os << (e.unary_op() == UnaryOp::Neg ? "-" : e.unary_op() == UnaryOp::BitNot ? "~" : "!");
      print_wrapped(os, *e.operand(0), kUnaryPrec);
      break;
    case ExprKind::Binary: {
      int p = precedence(e.binary_op());
      print_wrapped(os, *e.operand(0), p);
      os << ' ' << spelling(e.binary_op()) << ' ';
      print_wrapped(os, *e.operand(1), p + 1);
      break;
    }
    case ExprKind::Ite:
      print_wrapped(os, *e.operand(0), kTernaryPrec + 1);
      os << " ? ";
      print_wrapped(os, *e.operand(1), kTernaryPrec);
      os << " : ";
      print_wrapped(os, *e.operand(2), kTernaryPrec);
      break;
    case ExprKind::BitSelect:
      print_wrapped(os, *e.operand(0), kPostfixPrec);
      os << '[';
      print(os, *e.operand(1), kTernaryPrec);
      os << ':';
      print(os, *e.operand(2), kTernaryPrec);
      os << ']';
      break;
    case ExprKind::ArrayRead:
      os << e.name() << '[';
      print(os, *e.operand(0), kTernaryPrec);
      os << ']';
      break;
  }
}

// Formula precedence: <-> 1, -> 2, || 3, && 4, prefix 5, atom 6.
int formula_prec(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return f.children().empty() ? 6 : 3;
    case FormulaKind::And: return f.children().empty() ? 6 : 4;
    case FormulaKind::Atom: return 6;
    default: return 5;
  }
}

void print_formula(std::ostream& os, const Formula& f);

void print_formula_wrapped(std::ostream& os, const Formula& f, int min_prec) {
  bool paren = formula_prec(f) < min_prec;
  if (paren) os << '(';
  print_formula(os, f);
  if (paren) os << ')';
}

// Prefix operators bind tighter than any binary operator inside an atom.
void print_prefix_operand(std::ostream& os, const Formula& f) {
  if (f.kind() == FormulaKind::Atom) {
    ExprKind k = f.expr()->kind();
    if (k == ExprKind::Binary || k == ExprKind::Ite) {
      os << '(';
      print(os, *f.expr(), kTernaryPrec);
      os << ')';
      return;
    }
  }
  print_formula_wrapped(os, f, 5);
}

void print_formula(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      // Atoms whose top operator is looser than | need brackets to stay atoms.
      const Expr& e = *f.expr();
      if (prec_of(e) < precedence(BinaryOp::BitOr)) {
        os << '(';
        print(os, e, kTernaryPrec);
        os << ')';
      } else {
        print(os, e, kTernaryPrec);
      }
      break;
    }
    case FormulaKind::Not:
      os << '!';
      print_prefix_operand(os, *f.child());
      break;
    case FormulaKind::Next:
      os << "X ";
      print_prefix_operand(os, *f.child());
      break;
    case FormulaKind::Always:
      os << "G ";
      print_prefix_operand(os, *f.child());
      break;
    case FormulaKind::BoundedFuture:
      os << "F<=" << f.bound() << ' ';
      print_prefix_operand(os, *f.child());
      break;
    case FormulaKind::And:
    case FormulaKind::Or: {
      if (f.children().empty()) {
        os << (f.kind() == FormulaKind::And ? "1" : "0");
        break;
      }
      int p = formula_prec(f);
      const char* sep = f.kind() == FormulaKind::And ? " && " : " || ";
      for (size_t i = 0; i < f.children().size(); ++i) {
        if (i) os << sep;
        print_formula_wrapped(os, *f.children()[i], p + 1);
      }
      break;
    }
    case FormulaKind::Implies:
      print_formula_wrapped(os, *f.child(0), 3);
      os << " -> ";
      print_formula_wrapped(os, *f.child(1), 2);
      break;
    case FormulaKind::Iff:
      print_formula_wrapped(os, *f.child(0), 1);
      os << " <-> ";
      print_formula_wrapped(os, *f.child(1), 2);
      break;
  }
}

void print_body(std::ostream& os, const Circuit& c, bool monitor) {
  for (const auto& r : c.registers) {
    if (r.is_array()) {
      os << "  mem " << r.name << '[' << *r.length << ']';
      if (r.width != c.width) os << " width " << r.width;
    } else {
      os << "  reg " << r.name;
      if (r.width != c.width) os << '[' << r.width << ']';
    }
    if (r.reset) os << " = " << *r.reset;
    os << ";\n";
  }
  for (const auto& w : c.wires) os << "  wire " << w.name << " = " << print_expr(w.expr) << ";\n";
  for (const auto& a : c.assignments) {
    os << "  " << a.target;
    if (a.index) os << '[' << print_expr(a.index) << ']';
    os << " <= " << print_expr(a.value);
    if (a.enable) os << " when " << print_expr(a.enable);
    os << ";\n";
  }
  os << "  output";
  for (size_t i = 0; i < c.outputs.size(); ++i) os << (i ? ", " : " ") << c.outputs[i];
  os << ";\n";
  if (!monitor && c.init) os << "  init " << print_expr(c.init) << ";\n";
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  if (!e) return "";
  std::ostringstream os;
  print(os, *e, kTernaryPrec);
  return os.str();
}

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

std::string print_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "circuit " << c.name << " width " << c.width << " {\n";
  print_body(os, c, false);
  os << "}\n";
  return os.str();
}

std::string print_monitor(const Monitor& m) {
  std::ostringstream os;
  os << "monitor " << m.name << " on " << m.base << " {\n";
  print_body(os, m.body, true);
  os << "}\n";
  return os.str();
}

std::string print_design(const Design& d) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << '\n';
    first = false;
  };
  for (const auto& c : d.circuits) {
    sep();
    os << print_circuit(c);
  }
  for (const auto& m : d.monitors) {
    sep();
    os << print_monitor(m);
  }
  for (const auto& b : d.candidate_blocks) {
    sep();
    os << "candidates " << b.name << " for " << b.target << " {\n";
    for (const auto& f : b.formulas) os << "  " << f << ";\n";
    os << "}\n";
  }
  return os.str();
}

}  // namespace uvleak
