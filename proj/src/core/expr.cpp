#include "numa/expr.hpp"

#include <cctype>
#include <vector>

namespace numa {

struct Expression::Node {
  enum class Op { Const, X, Neg, Add, Sub, Mul, Div, Pow, Choose } op;
  Rational value;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, Rational value = 0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = std::move(value);
  return n;
}

class Parser {
 public:
  Parser(std::string_view s, const std::map<std::string, Rational>& constants) : s_(s), constants_(constants) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  const std::map<std::string, Rational>& constants_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::InvalidArgument,
                "expression \"" + std::string(s_) + "\" at offset " + std::to_string(pos_) + ": " + why);
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
      if (accept('+')) {
        lhs = make(Op::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Op::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Op::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return make(Op::Const, {}, Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      if (name == "x") return make(Op::X);
      if (name == "choose") {
        expect('(');
        NodePtr a = expr();
        expect(',');
        NodePtr b = expr();
        expect(')');
        return make(Op::Choose, {a, b});
      }
      const auto it = constants_.find(name);
      if (it == constants_.end()) fail("unknown name '" + name + "'");
      return make(Op::Const, {}, it->second);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

long integer_argument(const Rational& v, const char* what) {
  if (v.get_den() != 1 || !v.get_num().fits_slong_p()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a machine integer, got " + v.get_str());
  }
  return v.get_num().get_si();
}

Rational eval(const Expression::Node& n, const Rational& x) {
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::X:
      return x;
    case Op::Neg:
      return -eval(*n.args[0], x);
    case Op::Add:
      return eval(*n.args[0], x) + eval(*n.args[1], x);
    case Op::Sub:
      return eval(*n.args[0], x) - eval(*n.args[1], x);
    case Op::Mul:
      return eval(*n.args[0], x) * eval(*n.args[1], x);
    case Op::Div: {
      const Rational d = eval(*n.args[1], x);
      if (d == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
      return eval(*n.args[0], x) / d;
    }
    case Op::Pow: {
      const Rational b = eval(*n.args[0], x);
      const long e = integer_argument(eval(*n.args[1], x), "exponent");
      if (e < 0 && b == 0) throw Error(ErrorCode::InvalidArgument, "zero to a negative power");
      Rational r;
      mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
      mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
      r.canonicalize();
      return e < 0 ? 1 / r : r;
    }
    case Op::Choose: {
      const long k = integer_argument(eval(*n.args[1], x), "binomial index");
      if (k < 0) return 0;
      return binom(eval(*n.args[0], x), static_cast<unsigned>(k));
    }
  }
  return 0;
}

}  // namespace

Expression Expression::parse(std::string_view text, const std::map<std::string, Rational>& constants) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(text, constants).parse();
  return e;
}

Rational Expression::operator()(const Rational& x) const { return eval(*root_, x); }

UnaryIntegerFunction Expression::integer_function() const {
  return [root = root_, text = text_](const Integer& x) -> Integer {
    const Rational v = eval(*root, Rational(x));
    if (v.get_den() != 1) {
      throw Error(ErrorCode::NotNumerical, "\"" + text + "\" takes the non-integer value " + v.get_str() +
                                               " at x = " + x.get_str());
    }
    return v.get_num();
  };
}

}  // namespace numa
