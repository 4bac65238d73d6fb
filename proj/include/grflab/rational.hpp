#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace grflab {

/// Arbitrary-precision rational; GMP keeps every value in lowest terms with a
/// positive denominator.
using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GRFLAB_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

GRFLAB_DEFINE_ERROR(NonInvertibleJet);
GRFLAB_DEFINE_ERROR(BadIndex);
GRFLAB_DEFINE_ERROR(BadRank);
GRFLAB_DEFINE_ERROR(SingularMetric);
GRFLAB_DEFINE_ERROR(NotBiInvariant);
GRFLAB_DEFINE_ERROR(NotEigenfunction);
GRFLAB_DEFINE_ERROR(InconsistentSource);
GRFLAB_DEFINE_ERROR(PreconditionFailed);
GRFLAB_DEFINE_ERROR(SolverError);
GRFLAB_DEFINE_ERROR(ParseError);

#undef GRFLAB_DEFINE_ERROR

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Accepts "p", "p/q" and finite decimal literals such as "-1.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    auto b = v.find_first_not_of(" \t");
    auto e = v.find_last_not_of(" \t");
    v = b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw ParseError("empty rational literal");
  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::string den = "1" + std::string(s.size() - dot - 1, '0');
      if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
      Rational q(mpz_class(digits, 10), mpz_class(den, 10));
      q.canonicalize();
      return q;
    }
    Rational q(s, 10);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed rational '" + s + "'");
  }
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace grflab
