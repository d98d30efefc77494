#include "metallic/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace metallic {

struct Expr::Node {
  Kind kind = Kind::constant;
  UnaryOp uop = UnaryOp::neg;
  BinaryOp bop = BinaryOp::add;
  double value = 0.0;
  int index = 0;
  NodePtr a, b;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;
using UnaryOp = Expr::UnaryOp;
using BinaryOp = Expr::BinaryOp;

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Expr::Kind::constant;
  n->value = v;
  return n;
}

NodePtr make_coordinate(int index) {
  if (index < 0) throw Error("coordinate index must be non-negative");
  auto n = std::make_shared<Node>();
  n->kind = Expr::Kind::coordinate;
  n->index = index;
  return n;
}

bool is_const(const NodePtr& n, double* v = nullptr) {
  if (n->kind != Expr::Kind::constant) return false;
  if (v) *v = n->value;
  return true;
}

bool node_has_coordinates(const Node& n) {
  switch (n.kind) {
    case Expr::Kind::constant: return false;
    case Expr::Kind::coordinate: return true;
    case Expr::Kind::unary: return node_has_coordinates(*n.a);
    case Expr::Kind::binary: return node_has_coordinates(*n.a) || node_has_coordinates(*n.b);
  }
  return false;
}

double eval_unary(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::neg: return -x;
    case UnaryOp::sin: return std::sin(x);
    case UnaryOp::cos: return std::cos(x);
    case UnaryOp::exp: return std::exp(x);
    case UnaryOp::ln:
      if (x <= 0.0) throw DomainError("ln of non-positive value");
      return std::log(x);
    case UnaryOp::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(x);
  }
  throw Error("bad unary op");
}

double eval_pow(double base, double expo) {
  if (base == 0.0 && expo < 0.0) throw DomainError("0 raised to a negative power");
  if (base < 0.0 && expo != std::floor(expo))
    throw DomainError("negative base with non-integer exponent");
  return std::pow(base, expo);
}

double eval_binary(BinaryOp op, double x, double y) {
  switch (op) {
    case BinaryOp::add: return x + y;
    case BinaryOp::sub: return x - y;
    case BinaryOp::mul: return x * y;
    case BinaryOp::div:
      if (y == 0.0) throw DomainError("division by zero");
      return x / y;
    case BinaryOp::pow: return eval_pow(x, y);
  }
  throw Error("bad binary op");
}

// Smart constructors: fold constants where evaluation cannot throw and
// apply unit identities. They keep derivative trees from exploding.
NodePtr make_unary(UnaryOp op, NodePtr a);
NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b);

NodePtr make_unary(UnaryOp op, NodePtr a) {
  double va;
  if (is_const(a, &va)) {
    switch (op) {
      case UnaryOp::neg: return make_constant(-va);
      case UnaryOp::sin: return make_constant(std::sin(va));
      case UnaryOp::cos: return make_constant(std::cos(va));
      case UnaryOp::exp: return make_constant(std::exp(va));
      case UnaryOp::ln:
        if (va > 0.0) return make_constant(std::log(va));
        break;  // keep the tree; eval reports the domain error
      case UnaryOp::sqrt:
        if (va >= 0.0) return make_constant(std::sqrt(va));
        break;
    }
  }
  if (op == UnaryOp::neg && a->kind == Expr::Kind::unary && a->uop == UnaryOp::neg)
    return a->a;
  auto n = std::make_shared<Node>();
  n->kind = Expr::Kind::unary;
  n->uop = op;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  double va, vb;
  const bool ca = is_const(a, &va);
  const bool cb = is_const(b, &vb);
  switch (op) {
    case BinaryOp::add:
      if (ca && cb) return make_constant(va + vb);
      if (ca && va == 0.0) return b;
      if (cb && vb == 0.0) return a;
      break;
    case BinaryOp::sub:
      if (ca && cb) return make_constant(va - vb);
      if (cb && vb == 0.0) return a;
      if (ca && va == 0.0) return make_unary(UnaryOp::neg, b);
      break;
    case BinaryOp::mul:
      if (ca && cb) return make_constant(va * vb);
      if ((ca && va == 0.0) || (cb && vb == 0.0)) return make_constant(0.0);
      if (ca && va == 1.0) return b;
      if (cb && vb == 1.0) return a;
      break;
    case BinaryOp::div:
      if (ca && cb && vb != 0.0) return make_constant(va / vb);
      if (cb && vb == 1.0) return a;
      break;
    case BinaryOp::pow:
      if (node_has_coordinates(*b))
        throw SyntaxError("exponent must be a constant expression", 0);
      if (cb && vb == 1.0) return a;
      if (cb && vb == 0.0) return make_constant(1.0);
      if (ca && cb) {
        if (!(va == 0.0 && vb < 0.0) && !(va < 0.0 && vb != std::floor(vb)))
          return make_constant(std::pow(va, vb));
      }
      break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Expr::Kind::binary;
  n->bop = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

double eval_node(const Node& n, std::span<const double> point) {
  switch (n.kind) {
    case Expr::Kind::constant: return n.value;
    case Expr::Kind::coordinate:
      if (n.index >= static_cast<int>(point.size()))
        throw Error("point has fewer components than the expression needs");
      return point[static_cast<std::size_t>(n.index)];
    case Expr::Kind::unary: return eval_unary(n.uop, eval_node(*n.a, point));
    case Expr::Kind::binary:
      return eval_binary(n.bop, eval_node(*n.a, point), eval_node(*n.b, point));
  }
  throw Error("bad node kind");
}

NodePtr diff_node(const NodePtr& n, int coord) {
  switch (n->kind) {
    case Expr::Kind::constant: return make_constant(0.0);
    case Expr::Kind::coordinate: return make_constant(n->index == coord ? 1.0 : 0.0);
    case Expr::Kind::unary: {
      NodePtr da = diff_node(n->a, coord);
      switch (n->uop) {
        case UnaryOp::neg: return make_unary(UnaryOp::neg, da);
        case UnaryOp::sin:
          return make_binary(BinaryOp::mul, make_unary(UnaryOp::cos, n->a), da);
        case UnaryOp::cos:
          return make_unary(UnaryOp::neg,
                            make_binary(BinaryOp::mul, make_unary(UnaryOp::sin, n->a), da));
        case UnaryOp::exp:
          return make_binary(BinaryOp::mul, make_unary(UnaryOp::exp, n->a), da);
        case UnaryOp::ln: return make_binary(BinaryOp::div, da, n->a);
        case UnaryOp::sqrt:
          return make_binary(BinaryOp::div, da,
                             make_binary(BinaryOp::mul, make_constant(2.0),
                                         make_unary(UnaryOp::sqrt, n->a)));
      }
      throw Error("bad unary op");
    }
    case Expr::Kind::binary: {
      switch (n->bop) {
        case BinaryOp::add:
          return make_binary(BinaryOp::add, diff_node(n->a, coord), diff_node(n->b, coord));
        case BinaryOp::sub:
          return make_binary(BinaryOp::sub, diff_node(n->a, coord), diff_node(n->b, coord));
        case BinaryOp::mul:
          return make_binary(
              BinaryOp::add,
              make_binary(BinaryOp::mul, diff_node(n->a, coord), n->b),
              make_binary(BinaryOp::mul, n->a, diff_node(n->b, coord)));
        case BinaryOp::div:
          return make_binary(
              BinaryOp::div,
              make_binary(BinaryOp::sub,
                          make_binary(BinaryOp::mul, diff_node(n->a, coord), n->b),
                          make_binary(BinaryOp::mul, n->a, diff_node(n->b, coord))),
              make_binary(BinaryOp::pow, n->b, make_constant(2.0)));
        case BinaryOp::pow: {
          // Exponent is coordinate-free by construction: d(u^c) = c*u^(c-1)*u'.
          NodePtr c = n->b;
          NodePtr cm1 = make_binary(BinaryOp::sub, c, make_constant(1.0));
          return make_binary(
              BinaryOp::mul,
              make_binary(BinaryOp::mul, c, make_binary(BinaryOp::pow, n->a, cm1)),
              diff_node(n->a, coord));
        }
      }
      throw Error("bad binary op");
    }
  }
  throw Error("bad node kind");
}

NodePtr simplify_node(const NodePtr& n) {
  switch (n->kind) {
    case Expr::Kind::constant:
    case Expr::Kind::coordinate: return n;
    case Expr::Kind::unary: return make_unary(n->uop, simplify_node(n->a));
    case Expr::Kind::binary:
      return make_binary(n->bop, simplify_node(n->a), simplify_node(n->b));
  }
  return n;
}

int max_coord_node(const Node& n) {
  switch (n.kind) {
    case Expr::Kind::constant: return -1;
    case Expr::Kind::coordinate: return n.index;
    case Expr::Kind::unary: return max_coord_node(*n.a);
    case Expr::Kind::binary: return std::max(max_coord_node(*n.a), max_coord_node(*n.b));
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Printing. Precedence levels: add/sub 1, mul/div 2, unary minus 3, pow 4,
// atoms 5. Children at the same level are parenthesized so the printed form
// re-parses to the identical tree (no silent re-association).

constexpr int kLevelAtom = 5;

int node_level(const Node& n) {
  switch (n.kind) {
    case Expr::Kind::constant: return n.value < 0.0 ? 3 : kLevelAtom;
    case Expr::Kind::coordinate: return kLevelAtom;
    case Expr::Kind::unary: return n.uop == UnaryOp::neg ? 3 : kLevelAtom;
    case Expr::Kind::binary:
      switch (n.bop) {
        case BinaryOp::add:
        case BinaryOp::sub: return 1;
        case BinaryOp::mul:
        case BinaryOp::div: return 2;
        case BinaryOp::pow: return 4;
      }
  }
  return kLevelAtom;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // trim digits while the round trip stays exact
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof probe, "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return s;
}

struct PrintContext {
  std::span<const std::string> names;  // empty: print coordinates as "#<index>"
};

void print_node(const Node& n, std::string& out, const PrintContext& ctx);

void print_child(const Node& child, std::string& out, int my_level, bool right,
                 const PrintContext& ctx) {
  const int cl = node_level(child);
  // pow takes a primary on the left, so any non-atom base needs parens
  const bool parens = cl < my_level || (cl == my_level && right) ||
                      (my_level == 4 && !right && cl <= 4);
  if (parens) out.push_back('(');
  print_node(child, out, ctx);
  if (parens) out.push_back(')');
}

void print_node(const Node& n, std::string& out, const PrintContext& ctx) {
  switch (n.kind) {
    case Expr::Kind::constant: out += fmt_double(n.value); return;
    case Expr::Kind::coordinate:
      if (n.index < static_cast<int>(ctx.names.size()))
        out += ctx.names[static_cast<std::size_t>(n.index)];
      else
        out += "#" + std::to_string(n.index);
      return;
    case Expr::Kind::unary:
      switch (n.uop) {
        case UnaryOp::neg:
          out.push_back('-');
          print_child(*n.a, out, 3, true, ctx);
          return;
        case UnaryOp::sin: out += "sin("; break;
        case UnaryOp::cos: out += "cos("; break;
        case UnaryOp::exp: out += "exp("; break;
        case UnaryOp::ln: out += "ln("; break;
        case UnaryOp::sqrt: out += "sqrt("; break;
      }
      print_node(*n.a, out, ctx);
      out.push_back(')');
      return;
    case Expr::Kind::binary: {
      const int lvl = node_level(n);
      const char* op = nullptr;
      switch (n.bop) {
        case BinaryOp::add: op = " + "; break;
        case BinaryOp::sub: op = " - "; break;
        case BinaryOp::mul: op = "*"; break;
        case BinaryOp::div: op = "/"; break;
        case BinaryOp::pow: op = "^"; break;
      }
      print_child(*n.a, out, lvl, false, ctx);
      out += op;
      print_child(*n.b, out, lvl, n.bop != BinaryOp::pow, ctx);
      return;
    }
  }
}

}  // namespace

Expr::Expr() : node_(make_constant(0.0)) {}
Expr::Expr(NodePtr node) : node_(std::move(node)) {}

Expr Expr::constant(double value) { return Expr(make_constant(value)); }
Expr Expr::coordinate(int index) { return Expr(make_coordinate(index)); }

Expr::Kind Expr::kind() const { return node_->kind; }

std::optional<double> Expr::constant_value() const {
  if (node_->kind == Kind::constant) return node_->value;
  return std::nullopt;
}

double Expr::eval(std::span<const double> point) const {
  const double v = eval_node(*node_, point);
  return v;
}

Expr Expr::derivative(int coord) const {
  if (coord < 0) throw Error("coordinate index must be non-negative");
  return Expr(diff_node(node_, coord));
}

Expr Expr::simplified() const { return Expr(simplify_node(node_)); }

bool Expr::has_coordinates() const { return node_has_coordinates(*node_); }

int Expr::max_coordinate_index() const { return max_coord_node(*node_); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(make_binary(BinaryOp::add, a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make_binary(BinaryOp::sub, a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make_binary(BinaryOp::mul, a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make_binary(BinaryOp::div, a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(make_unary(UnaryOp::neg, a.node_)); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr(make_binary(BinaryOp::pow, base.node_, exponent.node_)); }
Expr pow(const Expr& base, double exponent) { return pow(base, Expr::constant(exponent)); }
Expr sin(const Expr& a) { return Expr(make_unary(UnaryOp::sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(make_unary(UnaryOp::cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(make_unary(UnaryOp::exp, a.node_)); }
Expr ln(const Expr& a) { return Expr(make_unary(UnaryOp::ln, a.node_)); }
Expr sqrt(const Expr& a) { return Expr(make_unary(UnaryOp::sqrt, a.node_)); }

// ---------------------------------------------------------------------------
// Parser (recursive descent, one token of lookahead).

namespace {

struct Parser {
  std::string_view text;
  std::span<const std::string> coords;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw SyntaxError(std::string("expected '") + c + "'", pos);
  }

  NodePtr parse_expression() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = make_binary(BinaryOp::add, lhs, parse_term());
      else if (accept('-')) lhs = make_binary(BinaryOp::sub, lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(BinaryOp::mul, lhs, parse_unary());
      else if (accept('/')) lhs = make_binary(BinaryOp::div, lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(UnaryOp::neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) {
      const std::size_t expo_pos = pos;
      NodePtr expo = parse_unary();  // right associative, signed exponents allowed
      if (node_has_coordinates(*expo))
        throw SyntaxError("exponent must be a constant expression", expo_pos);
      return make_binary(BinaryOp::pow, base, expo);
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= text.size()) throw SyntaxError("unexpected end of input", pos);
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expression();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '#')
      return parse_identifier();
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  }

  NodePtr parse_number() {
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      } else {
        pos = mark;  // 'e' was the start of an identifier, not an exponent
      }
    }
    const std::string tok(text.substr(start, pos - start));
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw SyntaxError("malformed number '" + tok + "'", start);
      return make_constant(v);
    } catch (const std::invalid_argument&) {
      throw SyntaxError("malformed number '" + tok + "'", start);
    } catch (const std::out_of_range&) {
      throw SyntaxError("number out of range '" + tok + "'", start);
    }
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos;
    if (text[pos] == '#') {  // printed coordinate form "#<index>"
      ++pos;
      std::size_t nstart = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == nstart) throw SyntaxError("expected coordinate index after '#'", start);
      const int idx = std::stoi(std::string(text.substr(nstart, pos - nstart)));
      if (idx >= static_cast<int>(coords.size()))
        throw SyntaxError("coordinate index out of range", start);
      return make_coordinate(idx);
    }
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    const std::string name(text.substr(start, pos - start));
    if (peek('(')) {
      UnaryOp op;
      if (name == "sin") op = UnaryOp::sin;
      else if (name == "cos") op = UnaryOp::cos;
      else if (name == "exp") op = UnaryOp::exp;
      else if (name == "ln") op = UnaryOp::ln;
      else if (name == "sqrt") op = UnaryOp::sqrt;
      else throw UnknownIdentifier(name);
      expect('(');
      NodePtr arg = parse_expression();
      expect(')');
      return make_unary(op, arg);
    }
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == name) return make_coordinate(static_cast<int>(i));
    throw UnknownIdentifier(name);
  }
};

}  // namespace

Expr parse_expression(std::string_view text, std::span<const std::string> coord_names) {
  Parser p{text, coord_names};
  p.skip_ws();
  if (p.pos >= text.size()) throw SyntaxError("empty expression", 0);
  NodePtr root = p.parse_expression();
  p.skip_ws();
  if (p.pos != text.size()) throw SyntaxError("trailing input", p.pos);
  return Expr{root}.simplified();
}

std::string Expr::str() const {
  std::string out;
  print_node(*node_, out, PrintContext{});
  return out;
}

std::string Expr::str(std::span<const std::string> coord_names) const {
  std::string out;
  print_node(*node_, out, PrintContext{coord_names});
  return out;
}

}  // namespace metallic
