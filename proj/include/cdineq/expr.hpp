#pragma once

#include "cdineq/newton.hpp"

#include <string>

namespace cdineq {

// Integers, x, t, + - * ^ and parentheses; coefficients reduced mod p.
// Syntax errors carry the 1-based column of the offending character.
BiPoly parse_expression(const std::string& s, std::uint32_t p);

ExactPoly parse_poly(FieldTower& tw, const std::string& s);

}  // namespace cdineq
