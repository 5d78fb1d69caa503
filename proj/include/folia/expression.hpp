#pragma once

#include <memory>
#include <string>

#include "folia/types.hpp"

namespace folia {

class ExpressionError : public Error {
 public:
  using Error::Error;
};

/// Whitelisted arithmetic: numbers, + - * /, unary minus, parentheses,
/// sin, cos, pow(a, b), and the variables t, P1..Pn (P is P1), I.
/// Gradients in P and the I-derivative are exact (forward-mode duals).
class Expression {
 public:
  /// Throws ExpressionError on syntax errors or unknown identifiers.
  static Expression parse(const std::string& text, int n_p, bool allow_I = false);

  const std::string& text() const { return text_; }
  int n_p() const { return n_p_; }

  double operator()(double t, const Vector& P, double I = 0.0) const;
  Vector gradient_P(double t, const Vector& P, double I = 0.0) const;
  double derivative_I(double t, const Vector& P, double I) const;

  struct Node;

 private:
  Expression(std::string text, int n_p, std::shared_ptr<const Node> root);

  std::string text_;
  int n_p_ = 0;
  std::shared_ptr<const Node> root_;
};

/// "sum_cos" -> sum_i cos(t*Pi), "quadratic" -> sum_i Pi*Pi/2; any other
/// text is returned unchanged.
std::string expand_preset(const std::string& name, int n);

}  // namespace folia
