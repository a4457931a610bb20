#include "pickfactor/poly_parser.hpp"

#include <cctype>
#include <cstdlib>

#include "pickfactor/errors.hpp"

namespace pickfactor {

namespace {

// Recursive descent over: expr := term (('+'|'-') term)*
//                         term := unary (('*') unary)*
//                         unary := '-' unary | power
//                         power := atom ('^' uint)*
//                         atom := number | 'i' | variable | '(' expr ')'
class Parser {
 public:
  Parser(const KernelSpace& space, const std::string& text)
      : space_(space), text_(text) {}

  MultiPoly run() {
    skip_ws();
    if (pos_ >= text_.size())
      throw Error(ErrorKind::bad_input, "empty polynomial expression");
    MultiPoly p = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw Error(ErrorKind::bad_input,
                  "unexpected input at position " + std::to_string(pos_));
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  MultiPoly expr() {
    MultiPoly p = term();
    while (true) {
      if (consume('+'))
        p = p + term();
      else if (consume('-'))
        p = p - term();
      else
        return p;
    }
  }

  MultiPoly term() {
    MultiPoly p = unary();
    while (consume('*')) p = p * unary();
    return p;
  }

  MultiPoly unary() {
    if (consume('-')) return unary() * cplx(-1.0, 0.0);
    return power();
  }

  MultiPoly power() {
    MultiPoly base = atom();
    while (consume('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      if (pos_ == start)
        throw Error(ErrorKind::bad_input, "exponent must be an integer");
      const int e = std::atoi(text_.substr(start, pos_ - start).c_str());
      MultiPoly out = MultiPoly::constant(space_, cplx(1.0, 0.0));
      for (int k = 0; k < e; ++k) out = out * base;
      base = out;
    }
    return base;
  }

  MultiPoly atom() {
    const char c = peek();
    if (c == '(') {
      consume('(');
      MultiPoly p = expr();
      if (!consume(')'))
        throw Error(ErrorKind::bad_input, "missing closing parenthesis");
      return p;
    }
    if (c == 'i' || c == 'j') {
      ++pos_;
      return MultiPoly::constant(space_, cplx(0.0, 1.0));
    }
    if (c == 'z') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      int var = 1;
      if (pos_ > start) var = std::atoi(text_.substr(start, pos_ - start).c_str());
      if (var < 1 || var > space_.dim())
        throw Error(ErrorKind::bad_input,
                    "variable index outside 1.." + std::to_string(space_.dim()));
      MultiIndex alpha(space_.dim(), 0);
      alpha[var - 1] = 1;
      return MultiPoly::monomial(space_, alpha);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      skip_ws();
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin)
        throw Error(ErrorKind::bad_input, "malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      // A trailing i makes the literal imaginary: "2i".
      if (pos_ < text_.size() && (text_[pos_] == 'i' || text_[pos_] == 'j')) {
        ++pos_;
        return MultiPoly::constant(space_, cplx(0.0, value));
      }
      return MultiPoly::constant(space_, cplx(value, 0.0));
    }
    throw Error(ErrorKind::bad_input,
                std::string("unexpected character '") + c + "'");
  }

  const KernelSpace& space_;
  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(const KernelSpace& space, const std::string& text) {
  return Parser(space, text).run();
}

cplx parse_complex(const std::string& text) {
  KernelSpace scalar = KernelSpace::hardy(0);
  const MultiPoly p = parse_poly(scalar, text);
  return p.coeff(MultiIndex{0});
}

}  // namespace pickfactor
