#pragma once

#include <string>

#include "exactreal/rational.hpp"

namespace exactreal {

// d significant decimal digits of q by exact long division, round half to
// even. Plain notation normally; scientific ("d.dddde<exp>") when
// |q| >= 10^d or 0 < |q| < 10^-4. render_decimal(0, d) == "0".
std::string render_decimal(const Rational& q, long digits);

}  // namespace exactreal
