#include "cdineq/expr.hpp"

#include <cctype>

namespace cdineq {

namespace {

class Parser {
 public:
  Parser(const std::string& s, std::uint32_t p) : s_(s), p_(p) {}

  BiPoly run() {
    skip();
    if (pos_ >= s_.size()) error("empty expression");
    BiPoly r = expr();
    skip();
    if (pos_ < s_.size()) error(std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Syntax, "column " + std::to_string(pos_ + 1) + ": " + msg);
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
  BiPoly constant(std::int64_t c) const {
    BiPoly r;
    r.p = p_;
    r.add(0, 0, c);
    return r;
  }

  BiPoly expr() {
    BiPoly r = term();
    for (;;) {
      if (eat('+'))
        r = bi_add(r, term());
      else if (eat('-'))
        r = bi_add(r, bi_neg(term()));
      else
        return r;
    }
  }
  BiPoly term() {
    BiPoly r = unary();
    while (eat('*')) r = bi_mul(r, unary());
    return r;
  }
  BiPoly unary() {
    if (eat('-')) return bi_neg(unary());
    if (eat('+')) return unary();
    return power();
  }
  BiPoly power() {
    BiPoly base = atom();
    if (!eat('^')) return base;
    skip();
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      error("exponent must be a nonnegative integer");
    std::int64_t e = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      e = e * 10 + (s_[pos_] - '0');
      if (e > 4096) {
        pos_ = start;
        error("exponent too large");
      }
      ++pos_;
    }
    return bi_pow(base, static_cast<unsigned>(e));
  }
  BiPoly atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = (v * 10 + (s_[pos_] - '0')) % p_;
        ++pos_;
      }
      return constant(v);
    }
    if (c == 'x' || c == 't') {
      ++pos_;
      BiPoly r;
      r.p = p_;
      r.add(c == 'x' ? 1 : 0, c == 't' ? 1 : 0, 1);
      return r;
    }
    if (c == '(') {
      ++pos_;
      BiPoly r = expr();
      if (!eat(')')) error("expected ')'");
      return r;
    }
    error(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  std::uint32_t p_;
  std::size_t pos_ = 0;
};

}  // namespace

BiPoly parse_expression(const std::string& s, std::uint32_t p) { return Parser(s, p).run(); }

ExactPoly parse_poly(FieldTower& tw, const std::string& s) {
  return parse_and_normalize(tw, to_series_poly(tw, parse_expression(s, tw.p())));
}

}  // namespace cdineq
