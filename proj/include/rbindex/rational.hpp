#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rbindex {

// Exact rational coordinate. mpq_class keeps values canonical (reduced,
// positive denominator), which makes equality and hashing well defined.
using Rational = mpq_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_rational_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
         c == '/' || c == '.';
}

}  // namespace detail

// Accepts integers ("-3"), fractions ("5/4", "-7/2") and decimal literals
// ("1.25", "-.5"). Anything else throws ParseError.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ParseError("empty rational literal");
  for (char c : text) {
    if (!detail::is_rational_char(c))
      throw ParseError("bad rational literal: '" + std::string(text) + "'");
  }
  std::string s(text);
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos || s.find('.', dot + 1) != std::string::npos)
      throw ParseError("bad rational literal: '" + s + "'");
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw ParseError("bad rational literal: '" + s + "'");
    mpz_class num;
    if (num.set_str(digits, 10) != 0)
      throw ParseError("bad rational literal: '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0 || sgn(r.get_den()) == 0)
    throw ParseError("bad rational literal: '" + s + "'");
  r.canonicalize();
  return r;
}

// Canonical text form: plain integer when the denominator is 1, "p/q"
// otherwise. Loaders accept this back verbatim.
inline std::string format_rational(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace rbindex
