#pragma once

#include <string>

#include "orbitforge/quaternion.hpp"

namespace orbitforge {

// Textual scalar grammar:
//   Rational            "p/q" or "p"
//   GaussianRational    "p/q+r/s*i"  (either part omissible)
//   RationalQuaternion  "<gaussian>+(<gaussian>)*j"
// Printing always emits the canonical form; parsing raises ParseError on
// anything else.

Rational parse_rational(const std::string& text);
GaussianRational parse_gaussian(const std::string& text);
RationalQuaternion parse_quaternion(const std::string& text);

std::string print_rational(const Rational& r);
std::string print_gaussian(const GaussianRational& z);
std::string print_quaternion(const RationalQuaternion& q);

}  // namespace orbitforge
