#ifndef HK_PARSE_HPP
#define HK_PARSE_HPP

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hk/ratfunc.hpp"

namespace hk {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := ('-'|'+') unary | power
// power  := atom ('^' '-'? integer)?
// atom   := integer | variable | '(' expr ')'
class ExprParser {
public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError("expression: " + msg + " at column " + std::to_string(pos_ + 1));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc r = term();
    while (true) {
      if (eat('+'))
        r += term();
      else if (eat('-'))
        r -= term();
      else
        return r;
    }
  }

  RatFunc term() {
    RatFunc r = unary();
    while (true) {
      if (eat('*')) {
        r *= unary();
      } else if (eat('/')) {
        RatFunc d = unary();
        if (d.is_zero()) fail("division by zero");
        r /= d;
      } else {
        return r;
      }
    }
  }

  RatFunc unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    if (!eat('^')) return base;
    bool neg = eat('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
    if (neg && base.is_zero()) fail("division by zero");
    return base.pow(neg ? -e : e);
  }

  RatFunc atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RatFunc(Rat(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto v = var_from_name(name);
      if (!v) {
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "'");
      }
      return RatFunc::var(*v);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace detail

/// Parses a rational expression in x, y, s1, s2, s3, h.
inline RatFunc parse_ratfunc(std::string_view s) { return detail::ExprParser(s).parse(); }

/// Parses a polynomial expression; division is allowed only by constants.
inline MPoly parse_mpoly(std::string_view s) {
  RatFunc r = parse_ratfunc(s);
  if (!r.is_polynomial()) throw ParseError("expression: '" + std::string(s) + "' is not a polynomial");
  return r.num().scaled(r.den().constant_value().inverse());
}

/// Parses a rational constant such as "-3/4".
inline Rat parse_rat(std::string_view s) {
  MPoly p = parse_mpoly(s);
  if (!p.is_constant()) throw ParseError("expression: '" + std::string(s) + "' is not a rational number");
  return p.constant_value();
}

}  // namespace hk

#endif  // HK_PARSE_HPP
