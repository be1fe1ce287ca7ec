#include "orbitforge/scalar_io.hpp"

#include "orbitforge/errors.hpp"

namespace orbitforge {

Rational parse_rational(const std::string& text) {
  return Rational::from_string(text);
}

GaussianRational parse_gaussian(const std::string& text) {
  if (text.empty()) fail(ErrorName::ParseError, "empty scalar");
  bool imag_tail = text.size() > 2 && text.compare(text.size() - 2, 2, "*i") == 0;
  if (!imag_tail) return GaussianRational(parse_rational(text));

  std::string body = text.substr(0, text.size() - 2);
  // The only interior sign is the separator between the two parts.
  size_t sep = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if (body[i] == '+' || body[i] == '-') {
      sep = i;
      break;
    }
  }
  if (sep == std::string::npos) {
    return {Rational(0), parse_rational(body)};
  }
  Rational re = parse_rational(body.substr(0, sep));
  Rational im = parse_rational(body.substr(sep));
  return {re, im};
}

RationalQuaternion parse_quaternion(const std::string& text) {
  size_t open = text.find('(');
  if (open == std::string::npos)
    return RationalQuaternion(parse_gaussian(text));
  if (open < 1 || text[open - 1] != '+' || text.size() < open + 5 ||
      text.compare(text.size() - 3, 3, ")*j") != 0)
    fail(ErrorName::ParseError, "malformed quaternion: " + text);
  std::string alpha = text.substr(0, open - 1);
  std::string beta = text.substr(open + 1, text.size() - 3 - (open + 1));
  if (alpha.empty() || beta.empty())
    fail(ErrorName::ParseError, "malformed quaternion: " + text);
  return {parse_gaussian(alpha), parse_gaussian(beta)};
}

std::string print_rational(const Rational& r) { return r.str(); }
std::string print_gaussian(const GaussianRational& z) { return z.str(); }
std::string print_quaternion(const RationalQuaternion& q) { return q.str(); }

}  // namespace orbitforge
