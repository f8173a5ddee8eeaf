#include "ldp/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <fmt/format.h>

namespace ldp::expr {

class Parser {
 public:
  Parser(std::string_view text, const Symbols& symbols, Expression& out)
      : text_(text), symbols_(symbols), out_(out) {}

  std::size_t parse() {
    const std::size_t root = expression();
    skip_space();
    if (pos_ < text_.size()) fail(fmt::format("unexpected '{}'", text_[pos_]));
    return root;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_ + 1); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }

  std::size_t add(Op op, std::vector<std::size_t> args = {}, double value = 0.0,
                  std::size_t index = 0) {
    out_.nodes_.push_back({op, value, index, std::move(args)});
    return out_.nodes_.size() - 1;
  }

  std::size_t expression() {
    std::size_t lhs = term();
    for (;;) {
      if (accept('+')) lhs = add(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = add(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  std::size_t term() {
    std::size_t lhs = unary();
    for (;;) {
      if (accept('*')) lhs = add(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = add(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  std::size_t unary() {
    if (accept('-')) return add(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  std::size_t power() {
    const std::size_t base = primary();
    if (accept('^')) return add(Op::Pow, {base, unary()});
    return base;
  }

  std::size_t primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      const std::size_t inner = expression();
      expect(')');
      return inner;
    }
    fail(fmt::format("unexpected '{}'", c));
  }

  std::size_t number() {
    const char* begin = text_.data() + pos_;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return add(Op::Number, {}, value);
  }

  std::size_t identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    static const std::map<std::string, Op> unary_functions = {
        {"abs", Op::Abs}, {"sqrt", Op::Sqrt}, {"log", Op::Log},   {"exp", Op::Exp},
        {"sin", Op::Sin}, {"cos", Op::Cos},   {"tanh", Op::Tanh}, {"sign", Op::Sign}};
    skip_space();
    const bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (call) {
      const std::size_t name_pos = start;
      ++pos_;
      std::vector<std::size_t> args = arguments(name == "norm" || name == "dot");
      if (const auto it = unary_functions.find(name); it != unary_functions.end()) {
        if (args.size() != 1) {
          pos_ = name_pos;
          fail(fmt::format("{} takes one argument", name));
        }
        return add(it->second, std::move(args));
      }
      if (name == "norm") {
        if (args.empty()) at(name_pos, "norm needs at least one argument");
        return add(Op::Norm, std::move(args));
      }
      if (name == "dot") {
        if (args.empty() || args.size() % 2 != 0) {
          pos_ = name_pos;
          fail("dot needs two argument lists of equal length");
        }
        return add(Op::Dot, std::move(args));
      }
      pos_ = name_pos;
      fail(fmt::format("unknown function '{}'", name));
    }
    if (name == "pi") return add(Op::Number, {}, std::numbers::pi);
    if (name == "t") {
      if (!symbols_.time) at(start, "t is not available here");
      return add(Op::Time);
    }
    if (name == "u") {
      if (!symbols_.scalar_u) at(start, "u is not available here");
      return add(Op::U);
    }
    if (name.size() > 1 && name[0] == 'x') {
      int k = 0;
      const auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
      if (ec == std::errc() && p == name.data() + name.size()) {
        if (k < 1 || k > symbols_.d)
          at(start, fmt::format("{} is out of range (dimension {})", name, symbols_.d));
        return add(Op::Component, {}, 0.0, static_cast<std::size_t>(k - 1));
      }
    }
    at(start, fmt::format("unknown variable '{}'", name));
  }

  [[noreturn]] void at(std::size_t position, const std::string& message) {
    pos_ = position;
    fail(message);
  }

  /// Comma-separated arguments up to ')'. With `vectors`, a bare x expands
  /// to every component.
  std::vector<std::size_t> arguments(bool vectors) {
    std::vector<std::size_t> args;
    if (accept(')')) return args;
    do {
      skip_space();
      if (vectors && is_bare_x()) {
        ++pos_;
        if (symbols_.d < 1) fail("x is not available here");
        for (int k = 0; k < symbols_.d; ++k)
          args.push_back(add(Op::Component, {}, 0.0, static_cast<std::size_t>(k)));
      } else {
        args.push_back(expression());
      }
    } while (accept(','));
    expect(')');
    return args;
  }

  bool is_bare_x() const {
    if (pos_ >= text_.size() || text_[pos_] != 'x') return false;
    std::size_t q = pos_ + 1;
    if (q < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[q])) || text_[q] == '_'))
      return false;
    while (q < text_.size() && std::isspace(static_cast<unsigned char>(text_[q]))) ++q;
    return q < text_.size() && (text_[q] == ',' || text_[q] == ')');
  }

  std::string_view text_;
  const Symbols& symbols_;
  Expression& out_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text, const Symbols& symbols) {
  Expression e;
  e.text_ = std::string(text);
  Parser p(e.text_, symbols, e);
  e.root_ = p.parse();
  return e;
}

CoefficientField make_expression_field(const std::string& label, int d, int m,
                                       const std::vector<std::string>& drift,
                                       const std::vector<std::string>& diffusion) {
  if (d < 1 || m < 1) throw ParameterError("expression field needs d >= 1 and m >= 1");
  if (drift.size() != static_cast<std::size_t>(d))
    throw ParameterError(fmt::format("drift needs {} components, got {}", d, drift.size()));
  if (diffusion.size() != static_cast<std::size_t>(d * m))
    throw ParameterError(
        fmt::format("diffusion needs {} components (d x m), got {}", d * m, diffusion.size()));
  const Symbols symbols{d, true, false};
  auto compile = [&](const std::vector<std::string>& texts, const char* what) {
    auto list = std::make_shared<std::vector<Expression>>();
    for (std::size_t i = 0; i < texts.size(); ++i) {
      try {
        list->push_back(Expression::parse(texts[i], symbols));
      } catch (const ParseError& e) {
        throw ParseError(fmt::format("{} component {}: {}", what, i + 1, e.message()), e.column());
      }
    }
    return std::shared_ptr<const std::vector<Expression>>(std::move(list));
  };
  const auto b = compile(drift, "drift");
  const auto s = compile(diffusion, "diffusion");
  auto kernel = [](std::shared_ptr<const std::vector<Expression>> list) {
    return [list](double t, auto x, auto out) {
      using T = std::remove_cvref_t<decltype(out[0])>;
      for (std::size_t i = 0; i < list->size(); ++i)
        out[i] = (*list)[i].template eval<T>(t, x);
    };
  };
  bool time_homogeneous = true;
  for (const auto& list : {drift, diffusion})
    for (const auto& text : list) {
      // A standalone t token makes the field time dependent.
      for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 't') continue;
        const bool left = i > 0 && (std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_');
        const bool right = i + 1 < text.size() &&
                           (std::isalnum(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '_');
        if (!left && !right) time_homogeneous = false;
      }
    }
  return make_field(label, d, m, kernel(b), kernel(s), time_homogeneous);
}

}  // namespace ldp::expr
