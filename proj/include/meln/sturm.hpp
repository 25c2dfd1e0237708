#pragma once

#include "meln/poly.hpp"

namespace meln {

// Number of distinct real roots of p strictly inside the open interval (a, b),
// a < b. Roots sitting exactly at an endpoint are divided out first, so they
// are never counted. Throws IdenticallyZero for the zero polynomial.
int sturm_count(Poly p, const Rat& a, const Rat& b);

}  // namespace meln
