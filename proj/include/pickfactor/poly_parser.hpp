#pragma once

#include <string>

#include "pickfactor/multi_poly.hpp"

namespace pickfactor {

// Parses expressions like "z-1", "1+2*z1*z2", "(1-z1)*(1-z2)", "i*z^2".
// Grammar: + - * ^ with parentheses, decimal literals, the imaginary unit
// i, and variables z (d = 1) or z1..zd. Multiplication is explicit.
MultiPoly parse_poly(const KernelSpace& space, const std::string& text);

// Parses a complex scalar like "0.5", "-1+0.3i", "i", "2i".
cplx parse_complex(const std::string& text);

}  // namespace pickfactor
