#pragma once

#include "cdineq/newton.hpp"

#include <string>
#include <vector>

namespace cdineq {

// eisenstein: x^{2g+2} - t
// pairs:      prod_{i=1..g} (x - i)(x - i + t)
// triple:     (x-1)(x-1+t)(x-1-t)(x-2)...(x-(2g-1))
// collision:  (x-1)(x-2)(x-3)(x-t^2)(x-2t^2)(x-3t^2); g is ignored
// chain:      x(x+1) prod_{i=1..g} (x - t a_i)(x - 1 - t a_i), a_i = i + 1
BiPoly example_family(const std::string& family, int g, std::uint32_t p);
std::string example_expression(const std::string& family, int g, std::uint32_t p);
const std::vector<std::string>& family_names();

}  // namespace cdineq
