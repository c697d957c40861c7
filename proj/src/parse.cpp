#include <cctype>
#include <charconv>

#include "ncr/expr.hpp"

namespace ncr {

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : InputError("parse error at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}

namespace {

class Parser {
 public:
  Parser(const std::string& text, int g, Field field) : s_(text), g_(g), field_(field) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  bool accept_word(const char* w) {
    skip_ws();
    const std::size_t len = std::char_traits<char>::length(w);
    if (s_.compare(pos_, len, w) != 0) return false;
    const std::size_t end = pos_ + len;
    if (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) return false;
    pos_ = end;
    return true;
  }

  Expr parse_expr() {
    Expr acc = parse_term();
    for (;;) {
      if (accept('+')) {
        acc = sum(acc, parse_term());
      } else if (accept('-')) {
        acc = sum(acc, negate(parse_term()));
      } else {
        return acc;
      }
    }
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    while (accept('*')) acc = product(acc, parse_factor());
    return acc;
  }

  Expr parse_factor() {
    if (accept('-')) return negate(parse_atom());
    return parse_atom();
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (accept_word("inv")) {
      expect('(');
      Expr inner = parse_expr();
      expect(')');
      return inverse(inner);
    }
    if (accept_word("star")) {
      expect('(');
      Expr inner = parse_expr();
      expect(')');
      return star(inner);
    }
    if (accept_word("i")) {
      if (field_ != Field::Complex)
        throw ParseError("imaginary unit 'i' requires the complex field", pos_ - 1);
      return constant(Scalar(0.0, 1.0));
    }
    if (c == 'x') {
      const std::size_t start = pos_;
      ++pos_;
      std::size_t digits_begin = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == digits_begin) throw ParseError("expected variable index after 'x'", pos_);
      int j = 0;
      std::from_chars(s_.data() + digits_begin, s_.data() + pos_, j);
      if (j < 1 || j > g_)
        throw ParseError("variable x" + std::to_string(j) + " out of range 1.." + std::to_string(g_),
                         start);
      return variable(j);
    }
    if (accept('(')) {
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    auto digits = [&] {
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
    };
    digits();
    if (p < s_.size() && s_[p] == '.') {
      ++p;
      digits();
    }
    if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        p = q;
        digits();
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + p, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + p) throw ParseError("malformed number", start);
    pos_ = p;
    return constant(v);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int g_;
  Field field_;
};

}  // namespace

RationalExpr parse(const std::string& text, int g, Field field) {
  Parser p(text, g, field);
  return {p.parse_all(), field, g};
}

}  // namespace ncr
