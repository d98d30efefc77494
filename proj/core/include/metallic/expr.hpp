#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metallic/errors.hpp"

namespace metallic {

/* Immutable symbolic scalar expression over chart coordinates.
 *
 * Grammar accepted by parse_expression (and produced by str()):
 *
 *   expression ::= term { ("+" | "-") term }
 *   term       ::= unary { ("*" | "/") unary }
 *   unary      ::= "-" unary | power
 *   power      ::= primary [ "^" unary ]          (right associative)
 *   primary    ::= number | ident | ident "(" expression ")" | "(" expression ")"
 *
 * so "^" binds tighter than unary minus, which binds tighter than "*" and
 * "/", which bind tighter than "+" and "-".  Function idents are sin, cos,
 * exp, ln, sqrt; every other ident resolves to a coordinate by its position
 * in the coordinate-name list.  Exponents must be coordinate-free: the
 * derivative of u^c is then total without ln-domain surprises.
 */
class Expr {
 public:
  enum class Kind { constant, coordinate, unary, binary };
  enum class UnaryOp { neg, sin, cos, exp, ln, sqrt };
  enum class BinaryOp { add, sub, mul, div, pow };

  Expr();  // constant 0

  static Expr constant(double value);
  static Expr coordinate(int index);

  Kind kind() const;
  std::optional<double> constant_value() const;

  // IEEE double value of the expression at the given point. Throws
  // DomainError outside the domain of ln/sqrt/div/pow.
  double eval(std::span<const double> point) const;

  // Exact symbolic partial derivative with respect to coordinate `coord`.
  Expr derivative(int coord) const;

  // Evaluation-equivalent tree after constant folding and the unit
  // identities (0+e, 1*e, 0*e, e^1, e^0, --e).
  Expr simplified() const;

  // Printed form re-parses to an evaluation-identical tree. The variant
  // without names prints coordinates as "#<index>", which the parser also
  // accepts.
  std::string str() const;
  std::string str(std::span<const std::string> coord_names) const;

  bool has_coordinates() const;
  int max_coordinate_index() const;  // -1 when the tree has none

  struct Node;  // opaque; defined in the implementation

 private:
  using NodePtr = std::shared_ptr<const Node>;
  explicit Expr(NodePtr node);
  NodePtr node_;

  friend Expr parse_expression(std::string_view, std::span<const std::string>);
  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, const Expr&);
  friend Expr sin(const Expr&);
  friend Expr cos(const Expr&);
  friend Expr exp(const Expr&);
  friend Expr ln(const Expr&);
  friend Expr sqrt(const Expr&);
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Exponent must be coordinate-free; throws SyntaxError otherwise.
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);

Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);

// Parses `text` against the given coordinate names. Throws SyntaxError on
// malformed input and UnknownIdentifier for idents not in `coord_names`.
Expr parse_expression(std::string_view text, std::span<const std::string> coord_names);

}  // namespace metallic
