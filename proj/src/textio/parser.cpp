#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "uvleak/error.hpp"
#include "uvleak/textio.hpp"

namespace uvleak {

namespace {

using detail::Tok;
using detail::Token;

constexpr int kMaxNesting = 200;

// Expression or formula under construction. Boolean connectives are built
// as formulas and lowered back to expressions when an expression operator
// consumes them.
struct Node {
  ExprPtr e;
  FormulaPtr f;
};

struct BinLevel {
  std::initializer_list<std::pair<std::string_view, BinaryOp>> ops;
};

const BinLevel kLevels[] = {
    {{{"|", BinaryOp::BitOr}}},
    {{{"^", BinaryOp::BitXor}}},
    {{{"&", BinaryOp::BitAnd}}},
    {{{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}}},
    {{{"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}}},
    {{{"<<", BinaryOp::Shl}, {">>", BinaryOp::Shr}}},
    {{{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}},
    {{{"*", BinaryOp::Mul}, {"/", BinaryOp::Div}, {"%", BinaryOp::Mod}}},
};
constexpr size_t kNumLevels = sizeof(kLevels) / sizeof(kLevels[0]);

class Parser {
 public:
  Parser(std::string_view src, ParseOptions opts)
      : src_(src), toks_(detail::tokenize(src)), opts_(opts) {}

  // --- entry points ---------------------------------------------------------

  Design design() {
    Design d;
    std::set<std::string> items, blocks;
    while (!at_end()) {
      const Token& t = peek();
      const Token& label = peek(1);
      auto fresh = [&](std::set<std::string>& seen) {
        if (label.kind == Tok::Ident && !seen.insert(label.text).second)
          fail(label, "duplicate definition of " + label.text);
      };
      if (is_word("circuit")) {
        fresh(items);
        d.circuits.push_back(circuit_item());
      } else if (is_word("monitor")) {
        fresh(items);
        d.monitors.push_back(monitor_item());
      } else if (is_word("candidates")) {
        fresh(blocks);
        d.candidate_blocks.push_back(candidates_item());
      } else {
        fail(t, "expected 'circuit', 'monitor' or 'candidates'");
      }
    }
    return d;
  }

  Circuit single_circuit() {
    if (is_word("circuit") && peek(1).kind == Tok::Ident) {
      Circuit c = circuit_item();
      if (!at_end()) fail(peek(), "unexpected text after circuit");
      return c;
    }
    Circuit c;
    c.name = "main";
    while (!at_end()) body_item(c, /*monitor=*/false);
    return c;
  }

  ExprPtr expression(const Circuit* over) {
    over_ = over;
    formula_mode_ = false;
    Node n = top();
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "' after expression");
    return to_expr(n);
  }

  FormulaPtr formula(const Circuit* over) {
    over_ = over;
    formula_mode_ = true;
    const Token& first = peek();
    Node n = top();
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "' after formula");
    FormulaPtr f = to_formula(n);
    if (over_) f = finalize(f, first);
    return f;
  }

 private:
  // --- token helpers --------------------------------------------------------

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  const Token& take() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_word(std::string_view w, size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    take();
    return true;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.loc, msg);
  }
  void expect(std::string_view p) {
    if (!accept(p)) {
      const Token& t = peek();
      fail(t, "expected '" + std::string(p) + "' but found " + describe(t));
    }
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }
  std::string name(bool allow_tagged) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected a name but found " + describe(t));
    if (t.text == "bot") fail(t, "'bot' is reserved");
    if (t.tagged && !allow_tagged) fail(t, "copy-tagged name " + t.text + " is reserved");
    return take().text;
  }
  uint64_t integer() {
    const Token& t = peek();
    if (t.kind != Tok::Number) fail(t, "expected a number but found " + describe(t));
    auto v = Value::parse(t.text);
    if (!v || v->bits() > 0xFFFFFFFFull) fail(t, "bad number '" + t.text + "'");
    take();
    return v->bits();
  }

  // --- items ----------------------------------------------------------------

  Circuit circuit_item() {
    take();  // circuit
    Circuit c;
    c.name = name(opts_.allow_tagged);
    if (is_word("width")) {
      take();
      const Token& wt = peek();
      uint64_t w = integer();
      if (w < 1 || w > kMaxWidth) fail(wt, "width must be in 1.." + std::to_string(kMaxWidth));
      c.width = static_cast<unsigned>(w);
    }
    expect("{");
    while (!is_punct("}")) {
      if (at_end()) fail(peek(), "missing '}' for circuit " + c.name);
      body_item(c, false);
    }
    take();
    return c;
  }

  Monitor monitor_item() {
    take();  // monitor
    Monitor m;
    m.name = name(false);
    if (!is_word("on")) fail(peek(), "expected 'on' after monitor name");
    take();
    m.base = name(false);
    m.body.name = m.name;
    m.body.width = 0;
    expect("{");
    while (!is_punct("}")) {
      if (at_end()) fail(peek(), "missing '}' for monitor " + m.name);
      body_item(m.body, true);
    }
    take();
    return m;
  }

  CandidateBlock candidates_item() {
    take();  // candidates
    CandidateBlock b;
    b.name = name(false);
    if (!is_word("for")) fail(peek(), "expected 'for' after candidates name");
    take();
    b.target = name(false);
    expect("{");
    while (!is_punct("}")) {
      if (at_end()) fail(peek(), "missing '}' for candidates " + b.name);
      size_t first = pos_;
      bool saved = formula_mode_;
      formula_mode_ = true;
      Node n = top();
      formula_mode_ = saved;
      to_formula(n);
      size_t last = pos_;
      for (size_t k = first; k < last; ++k) {
        const Token& t = toks_[k];
        if (t.kind == Tok::Ident && t.tagged) {
          auto dot = t.text.rfind('.');
          unsigned copy = static_cast<unsigned>(std::stoul(t.text.substr(dot + 1)));
          b.max_copy = std::max(b.max_copy, copy);
        }
      }
      b.formulas.emplace_back(
          src_.substr(toks_[first].offset, toks_[last - 1].end - toks_[first].offset));
      expect(";");
    }
    take();
    return b;
  }

  bool starts_assignment() const { return is_punct("<=", 1) || is_punct("[", 1); }

  void body_item(Circuit& c, bool monitor) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected a declaration or assignment but found " + describe(t));
    if (!starts_assignment()) {
      if (t.text == "reg" && peek(1).kind == Tok::Ident) return reg_decl(c, monitor);
      if (t.text == "mem" && peek(1).kind == Tok::Ident) return mem_decl(c, monitor);
      if (t.text == "wire" && peek(1).kind == Tok::Ident) return wire_decl(c);
      if (t.text == "output") return output_decl(c);
      if (t.text == "init") {
        if (monitor) fail(t, "monitors have no init predicate");
        take();
        if (c.init) fail(t, "duplicate init predicate");
        c.init = expr_until_semicolon();
        return;
      }
    }
    assignment(c);
  }

  void reg_decl(Circuit& c, bool monitor) {
    take();
    RegisterDecl r;
    r.name = name(opts_.allow_tagged);
    r.width = c.width;
    if (accept("[")) {
      const Token& wt = peek();
      uint64_t w = integer();
      if (w < 1 || w > kMaxWidth) fail(wt, "register width must be in 1.." + std::to_string(kMaxWidth));
      r.width = static_cast<unsigned>(w);
      expect("]");
    }
    if (accept("=")) r.reset = integer();
    expect(";");
    (void)monitor;
    c.registers.push_back(std::move(r));
  }

  void mem_decl(Circuit& c, bool monitor) {
    take();
    RegisterDecl r;
    r.name = name(opts_.allow_tagged);
    r.width = c.width;
    expect("[");
    const Token& lt = peek();
    uint64_t len = integer();
    if (len < 1 || len > 4096) fail(lt, "memory length must be in 1..4096");
    r.length = static_cast<uint32_t>(len);
    expect("]");
    if (is_word("width")) {
      take();
      const Token& wt = peek();
      uint64_t w = integer();
      if (w < 1 || w > kMaxWidth) fail(wt, "memory width must be in 1.." + std::to_string(kMaxWidth));
      r.width = static_cast<unsigned>(w);
    }
    if (accept("=")) r.reset = integer();
    expect(";");
    (void)monitor;
    c.registers.push_back(std::move(r));
  }

  void wire_decl(Circuit& c) {
    take();
    Wire w;
    w.name = name(opts_.allow_tagged);
    expect("=");
    w.expr = expr_until_semicolon();
    c.wires.push_back(std::move(w));
  }

  void output_decl(Circuit& c) {
    take();
    if (!is_punct(";")) {
      c.outputs.push_back(name(opts_.allow_tagged));
      while (accept(",")) c.outputs.push_back(name(opts_.allow_tagged));
    }
    expect(";");
  }

  void assignment(Circuit& c) {
    Assignment a;
    a.target = name(opts_.allow_tagged);
    if (accept("[")) {
      a.index = expr();
      expect("]");
    }
    expect("<=");
    a.value = expr();
    if (is_word("when")) {
      take();
      a.enable = expr();
    }
    expect(";");
    c.assignments.push_back(std::move(a));
  }

  ExprPtr expr() {
    bool saved = formula_mode_;
    formula_mode_ = false;
    Node n = top();
    formula_mode_ = saved;
    return to_expr(n);
  }

  ExprPtr expr_until_semicolon() {
    ExprPtr e = expr();
    expect(";");
    return e;
  }

  // --- expressions and formulas ----------------------------------------------

  struct DepthGuard {
    Parser& p;
    DepthGuard(Parser& parser, const Token& t) : p(parser) {
      if (++p.depth_ > kMaxNesting) p.fail(t, "nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  Node top() { return formula_mode_ ? iff() : ternary(); }

  Node iff() {
    Node a = implies();
    while (is_punct("<->")) {
      take();
      Node b = implies();
      a = Node{nullptr, Formula::iff(to_formula(a), to_formula(b))};
    }
    return a;
  }

  Node implies() {
    Node a = ternary();
    if (formula_mode_ && is_punct("->")) {
      const Token& t = take();
      DepthGuard g(*this, t);
      Node b = implies();
      return Node{nullptr, Formula::implies(to_formula(a), to_formula(b))};
    }
    return a;
  }

  Node ternary() {
    Node c = lor();
    if (!is_punct("?")) return c;
    const Token& t = take();
    DepthGuard g(*this, t);
    Node a = ternary();
    expect(":");
    Node b = ternary();
    return Node{Expr::ite(to_expr(c), to_expr(a), to_expr(b)), nullptr};
  }

  Node lor() {
    Node a = land();
    if (!is_punct("||")) return a;
    std::vector<FormulaPtr> parts{to_formula(a)};
    while (accept("||")) parts.push_back(to_formula(land()));
    return Node{nullptr, Formula::disj(std::move(parts))};
  }

  Node land() {
    Node a = binary(0);
    if (!is_punct("&&")) return a;
    std::vector<FormulaPtr> parts{to_formula(a)};
    while (accept("&&")) parts.push_back(to_formula(binary(0)));
    return Node{nullptr, Formula::conj(std::move(parts))};
  }

  Node binary(size_t level) {
    if (level == kNumLevels) return unary();
    Node a = binary(level + 1);
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::Punct) return a;
      const auto& ops = kLevels[level].ops;
      auto it = std::find_if(ops.begin(), ops.end(),
                             [&](const auto& p) { return p.first == t.text; });
      if (it == ops.end()) return a;
      take();
      Node b = binary(level + 1);
      a = Node{Expr::binary(it->second, to_expr(a), to_expr(b)), nullptr};
    }
  }

  bool starts_operand(size_t k) const {
    const Token& t = peek(k);
    if (t.kind == Tok::Ident || t.kind == Tok::Number) return true;
    return t.kind == Tok::Punct && (t.text == "(" || t.text == "!" || t.text == "~");
  }

  Node unary() {
    const Token& t = peek();
    DepthGuard g(*this, t);
    if (t.kind == Tok::Punct) {
      if (t.text == "!") {
        take();
        return Node{nullptr, Formula::negation(to_formula(unary()))};
      }
      if (t.text == "-") {
        take();
        return Node{Expr::unary(UnaryOp::Neg, to_expr(unary())), nullptr};
      }
      if (t.text == "~") {
        take();
        return Node{Expr::unary(UnaryOp::BitNot, to_expr(unary())), nullptr};
      }
    }
    if (formula_mode_ && t.kind == Tok::Ident && !t.tagged) {
      if ((t.text == "X" || t.text == "G") && starts_operand(1)) {
        take();
        FormulaPtr inner = to_formula(unary());
        return Node{nullptr, t.text == "X" ? Formula::next(inner) : Formula::always(inner)};
      }
      if (t.text == "F" && is_punct("<=", 1) && peek(2).kind == Tok::Number && starts_operand(3)) {
        take();
        take();
        const Token& kt = peek();
        uint64_t k = integer();
        if (k < 1 || k > 4096) fail(kt, "F<=k needs 1 <= k <= 4096");
        FormulaPtr inner = to_formula(unary());
        return Node{nullptr, Formula::bounded_future(static_cast<unsigned>(k), inner)};
      }
    }
    return postfix();
  }

  Node postfix() {
    const Token& start = peek();
    bool plain_ident = start.kind == Tok::Ident && start.text != "bot";
    Node n = primary();
    while (is_punct("[")) {
      const Token& open = take();
      DepthGuard g(*this, open);
      ExprPtr first = expr();
      if (accept(":")) {
        ExprPtr lo = expr();
        expect("]");
        n = Node{Expr::bit_select(to_expr(n), first, lo), nullptr};
      } else {
        expect("]");
        if (!plain_ident || !n.e || n.e->kind() != ExprKind::Ref)
          fail(open, "only named arrays can be indexed");
        check_array(start);
        n = Node{Expr::array_read(n.e->name(), first), nullptr};
      }
      plain_ident = false;
    }
    return n;
  }

  Node primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      uint64_t v = integer();
      return Node{Expr::constant(v), nullptr};
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "bot") {
        take();
        return Node{Expr::constant(Value::bottom()), nullptr};
      }
      std::string n = name(opts_.allow_tagged || formula_mode_);
      if (over_ && !over_->declares(n)) fail(t, "unresolved identifier " + n);
      return Node{Expr::ref(n), nullptr};
    }
    if (is_punct("(")) {
      DepthGuard g(*this, t);
      take();
      Node n = top();
      expect(")");
      return n;
    }
    fail(t, "expected an expression but found " + describe(t));
  }

  void check_array(const Token& t) {
    if (!over_) return;
    const auto* r = over_->find_register(t.text);
    if (!r || !r->is_array()) fail(t, t.text + " is not an array");
  }

  // --- conversions -----------------------------------------------------------

  ExprPtr to_expr(const Node& n) {
    if (n.e) return n.e;
    return lower(*n.f);
  }

  ExprPtr lower(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        return f.expr();
      case FormulaKind::Not:
        return Expr::unary(UnaryOp::LogicalNot, lower(*f.child()));
      case FormulaKind::And:
      case FormulaKind::Or: {
        BinaryOp op = f.kind() == FormulaKind::And ? BinaryOp::LogicalAnd : BinaryOp::LogicalOr;
        ExprPtr acc = lower(*f.children().front());
        for (size_t i = 1; i < f.children().size(); ++i)
          acc = Expr::binary(op, acc, lower(*f.children()[i]));
        return acc;
      }
      default:
        fail(peek(), "temporal operator used inside an expression");
    }
  }

  static FormulaPtr to_formula(const Node& n) { return n.f ? n.f : Formula::atom(n.e); }

  // Expands array equalities and rejects arrays used as scalars.
  FormulaPtr finalize(const FormulaPtr& f, const Token& where) {
    if (f->kind() == FormulaKind::Atom) {
      const ExprPtr& e = f->expr();
      if (e->kind() == ExprKind::Binary && e->binary_op() == BinaryOp::Eq &&
          e->operand(0)->kind() == ExprKind::Ref && e->operand(1)->kind() == ExprKind::Ref) {
        const auto* a = over_->find_register(e->operand(0)->name());
        const auto* b = over_->find_register(e->operand(1)->name());
        if (a && b && a->is_array() && b->is_array()) {
          if (a->cells() != b->cells()) fail(where, "arrays " + a->name + " and " + b->name + " differ in length");
          ExprPtr acc;
          for (uint32_t k = 0; k < a->cells(); ++k) {
            ExprPtr cell = build::eq(Expr::array_read(a->name, build::num(k)),
                                     Expr::array_read(b->name, build::num(k)));
            acc = acc ? build::land(acc, cell) : cell;
          }
          return Formula::atom(acc);
        }
      }
      check_scalars(*e, where);
      return f;
    }
    return rename_children(f, where);
  }

  FormulaPtr rename_children(const FormulaPtr& f, const Token& where) {
    std::vector<FormulaPtr> kids;
    for (const auto& c : f->children()) kids.push_back(finalize(c, where));
    switch (f->kind()) {
      case FormulaKind::Not: return Formula::negation(kids[0]);
      case FormulaKind::And: return Formula::conj(std::move(kids));
      case FormulaKind::Or: return Formula::disj(std::move(kids));
      case FormulaKind::Implies: return Formula::implies(kids[0], kids[1]);
      case FormulaKind::Iff: return Formula::iff(kids[0], kids[1]);
      case FormulaKind::Next: return Formula::next(kids[0]);
      case FormulaKind::BoundedFuture: return Formula::bounded_future(f->bound(), kids[0]);
      case FormulaKind::Always: return Formula::always(kids[0]);
      default: return f;
    }
  }

  void check_scalars(const Expr& e, const Token& where) {
    if (e.kind() == ExprKind::Ref) {
      const auto* r = over_->find_register(e.name());
      if (r && r->is_array()) fail(where, "array " + e.name() + " used as a scalar");
    }
    for (const auto& op : e.operands()) check_scalars(*op, where);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
  ParseOptions opts_;
  const Circuit* over_ = nullptr;
  bool formula_mode_ = false;
  int depth_ = 0;
};

}  // namespace

const Circuit* Design::find_circuit(std::string_view name) const {
  for (const auto& c : circuits)
    if (c.name == name) return &c;
  return nullptr;
}

const Monitor* Design::find_monitor(std::string_view name) const {
  for (const auto& m : monitors)
    if (m.name == name) return &m;
  return nullptr;
}

const CandidateBlock* Design::find_candidates(std::string_view name) const {
  for (const auto& b : candidate_blocks)
    if (b.name == name) return &b;
  return nullptr;
}

Design parse_design(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts).design();
}

Circuit parse_circuit(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts).single_circuit();
}

ExprPtr parse_expression(std::string_view text, const Circuit* over) {
  return Parser(text, {}).expression(over);
}

FormulaPtr parse_formula(std::string_view text, const Circuit& over) {
  return Parser(text, {}).formula(&over);
}

FormulaPtr parse_formula(std::string_view text) { return Parser(text, {}).formula(nullptr); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace uvleak
