#include "folia/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace folia {

struct Expression::Node {
  enum class Kind { number, t, p, i, add, sub, mul, div, neg, sin, cos, pow };
  Kind kind;
  double value = 0.0;
  int index = 0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args = {}, double value = 0.0, int index = 0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->value = value;
  n->index = index;
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, int n_p, bool allow_I) : s_(text), n_p_(n_p), allow_I_(allow_I) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError(what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Node::Kind::add, {lhs, term()});
      else if (accept('-')) lhs = make(Node::Kind::sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Node::Kind::mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Node::Kind::div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::neg, {unary()});
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Node::Kind::number, {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "sin" || id == "cos") {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make(id == "sin" ? Node::Kind::sin : Node::Kind::cos, {arg});
      }
      if (id == "pow") {
        expect('(');
        NodePtr base = expr();
        expect(',');
        NodePtr exponent = expr();
        expect(')');
        return make(Node::Kind::pow, {base, exponent});
      }
      if (id == "t") return make(Node::Kind::t);
      if (id == "I") {
        if (!allow_I_) fail("variable I not available here");
        return make(Node::Kind::i);
      }
      if (id[0] == 'P') {
        int k = 1;
        if (id.size() > 1) {
          for (std::size_t j = 1; j < id.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(id[j]))) fail("unknown identifier '" + id + "'");
          k = std::atoi(id.c_str() + 1);
        }
        if (k < 1 || k > n_p_) fail("variable " + id + " out of range (n = " + std::to_string(n_p_) + ")");
        return make(Node::Kind::p, {}, 0.0, k - 1);
      }
      fail("unknown identifier '" + id + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int n_p_;
  bool allow_I_;
};

// Value with derivatives in (P_1..P_n, I).
struct Dual {
  double v;
  Vector d;
};

Dual eval(const Node& n, double t, const Vector& P, double I, int width) {
  auto constant = [width](double v) { return Dual{v, Vector::Zero(width)}; };
  switch (n.kind) {
    case Node::Kind::number:
      return constant(n.value);
    case Node::Kind::t:
      return constant(t);
    case Node::Kind::p: {
      Dual out = constant(P[n.index]);
      out.d[n.index] = 1.0;
      return out;
    }
    case Node::Kind::i: {
      Dual out = constant(I);
      out.d[width - 1] = 1.0;
      return out;
    }
    case Node::Kind::neg: {
      Dual a = eval(*n.args[0], t, P, I, width);
      return {-a.v, -a.d};
    }
    case Node::Kind::sin: {
      Dual a = eval(*n.args[0], t, P, I, width);
      return {std::sin(a.v), std::cos(a.v) * a.d};
    }
    case Node::Kind::cos: {
      Dual a = eval(*n.args[0], t, P, I, width);
      return {std::cos(a.v), -std::sin(a.v) * a.d};
    }
    default:
      break;
  }
  const Dual a = eval(*n.args[0], t, P, I, width);
  const Dual b = eval(*n.args[1], t, P, I, width);
  switch (n.kind) {
    case Node::Kind::add:
      return {a.v + b.v, a.d + b.d};
    case Node::Kind::sub:
      return {a.v - b.v, a.d - b.d};
    case Node::Kind::mul:
      return {a.v * b.v, a.v * b.d + b.v * a.d};
    case Node::Kind::div:
      return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    case Node::Kind::pow: {
      const double v = std::pow(a.v, b.v);
      Vector d = b.v * std::pow(a.v, b.v - 1.0) * a.d;
      if (!b.d.isZero()) d += v * std::log(a.v) * b.d;
      return {v, d};
    }
    default:
      throw ExpressionError("corrupt expression tree");
  }
}

}  // namespace

Expression::Expression(std::string text, int n_p, std::shared_ptr<const Node> root)
    : text_(std::move(text)), n_p_(n_p), root_(std::move(root)) {}

Expression Expression::parse(const std::string& text, int n_p, bool allow_I) {
  if (n_p < 0) throw ExpressionError("negative variable count");
  Parser parser(text, n_p, allow_I);
  return Expression(text, n_p, parser.parse());
}

double Expression::operator()(double t, const Vector& P, double I) const {
  if (P.size() != n_p_) throw DimensionError("expression expects " + std::to_string(n_p_) + " momenta");
  return eval(*root_, t, P, I, n_p_ + 1).v;
}

Vector Expression::gradient_P(double t, const Vector& P, double I) const {
  if (P.size() != n_p_) throw DimensionError("expression expects " + std::to_string(n_p_) + " momenta");
  return eval(*root_, t, P, I, n_p_ + 1).d.head(n_p_);
}

double Expression::derivative_I(double t, const Vector& P, double I) const {
  if (P.size() != n_p_) throw DimensionError("expression expects " + std::to_string(n_p_) + " momenta");
  return eval(*root_, t, P, I, n_p_ + 1).d[n_p_];
}

std::string expand_preset(const std::string& name, int n) {
  std::string out;
  if (name == "sum_cos") {
    for (int i = 1; i <= n; ++i) out += (i > 1 ? "+" : "") + std::string("cos(t*P") + std::to_string(i) + ")";
    return out;
  }
  if (name == "quadratic") {
    for (int i = 1; i <= n; ++i) {
      const std::string p = "P" + std::to_string(i);
      out += (i > 1 ? "+" : "") + p + "*" + p + "/2";
    }
    return out;
  }
  return name;
}

}  // namespace folia
