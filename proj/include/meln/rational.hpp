#pragma once

#include <gmpxx.h>

#include <string>

#include "meln/errors.hpp"

namespace meln {

// Exact arbitrary-precision rational; always kept canonical (coprime, den > 0).
using Rat = mpq_class;

// Parses "p", "-p", "p/q" (optional sign on p). Throws ParseError on malformed
// input or zero denominator.
Rat rat_from_string(const std::string& s);

// Canonical text: "p" or "p/q" with q > 1.
std::string rat_to_string(const Rat& r);

inline double to_double(const Rat& r) { return r.get_d(); }

inline int rat_sign(const Rat& r) { return sgn(r); }

// Exact dyadic rational from a finite double.
Rat rat_from_double(double x);

// r^e with integer e (e < 0 requires r != 0).
Rat rat_pow(const Rat& r, long e);

// gcd of |a|,|b| as nonnegative rational: gcd(nums)/lcm(dens); gcd(0,0) = 0.
Rat rat_gcd(const Rat& a, const Rat& b);

}  // namespace meln
