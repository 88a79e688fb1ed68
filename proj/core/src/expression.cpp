#include "fracnls/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <numbers>

#include "fracnls/errors.hpp"

namespace fracnls {
namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(double t) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct Constant final : Node {
  explicit Constant(double v) : value(v) {}
  double eval(double) const override { return value; }
  double value;
};

struct Variable final : Node {
  double eval(double t) const override { return t; }
};

struct Unary final : Node {
  Unary(double (*f)(double), NodePtr a) : fn(f), arg(std::move(a)) {}
  double eval(double t) const override { return fn(arg->eval(t)); }
  double (*fn)(double);
  NodePtr arg;
};

struct Binary final : Node {
  Binary(char o, NodePtr a, NodePtr b) : op(o), lhs(std::move(a)), rhs(std::move(b)) {}
  double eval(double t) const override {
    const double a = lhs->eval(t);
    const double b = rhs->eval(t);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
    }
  }
  char op;
  NodePtr lhs, rhs;
};

double neg(double v) { return -v; }

const std::map<std::string, double (*)(double)>& functions() {
  static const std::map<std::string, double (*)(double)> table = {
      {"exp", [](double v) { return std::exp(v); }},   {"log", [](double v) { return std::log(v); }},
      {"sqrt", [](double v) { return std::sqrt(v); }}, {"abs", [](double v) { return std::abs(v); }},
      {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
      {"tan", [](double v) { return std::tan(v); }},   {"sinh", [](double v) { return std::sinh(v); }},
      {"cosh", [](double v) { return std::cosh(v); }}, {"tanh", [](double v) { return std::tanh(v); }},
      {"atan", [](double v) { return std::atan(v); }},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : src_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + src_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = std::make_shared<Binary>('+', lhs, term());
      } else if (accept('-')) {
        lhs = std::make_shared<Binary>('-', lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = std::make_shared<Binary>('*', lhs, unary());
      } else if (accept('/')) {
        lhs = std::make_shared<Binary>('/', lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return std::make_shared<Unary>(&neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return std::make_shared<Binary>('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return std::make_shared<Constant>(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      const std::string name = src_.substr(start, pos_ - start);
      if (name == "t" || name == "x") return std::make_shared<Variable>();
      if (name == "pi") return std::make_shared<Constant>(std::numbers::pi);
      const auto& fns = functions();
      const auto it = fns.find(name);
      if (it == fns.end()) fail("unknown identifier '" + name + "'");
      if (!accept('(')) fail("expected '(' after " + name);
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return std::make_shared<Unary>(it->second, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string src_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double)> compile_expression(const std::string& source) {
  NodePtr root = Parser(source).parse();
  return [root](double t) { return root->eval(t); };
}

}  // namespace fracnls
