#pragma once

namespace meln {

// Level-curve geometry of the unperturbed center annulus.
//
// The conserved quantity is H(x, y) = (y^2/2 - 2x^2 + x) / x^3 on x > 0, with
// a center at (1, 0), H = -1, and closed ovals filling h in (-1, 0). Each oval
// meets y = 0 at 1/2 < xA < 1 < xB.

inline constexpr double kWindowLo = -1.0 + 1e-9;   // supported energy window
inline constexpr double kWindowHi = -1e-9;

struct LevelEndpoints {
    double xA;  // left crossing, in (1/2, 1)
    double xB;  // right crossing, in (1, inf)
};

// H(x, y); requires x > 0 (OutOfAnnulus otherwise).
double energy(double x, double y);

// y = 0 crossings of the level oval; requires h in (-1, 0) (OutOfAnnulus).
LevelEndpoints level_endpoints(double h);

// Upper-branch height y+(x) >= 0 on [xA, xB]; OutsideCurve beyond the oval.
double curve_height(double x, double h);

// dy/dx along the upper branch; EndpointSingularity where y+ = 0.
double curve_slope(double x, double h);

// Energy of the section point (x0, 0); requires x0 > 1/2 (OutOfAnnulus).
// Strictly increasing for x0 > 1.
double h_from_section(double x0);

// Inverse of h_from_section on the x0 > 1 branch (equals xB of the oval).
double section_from_h(double h);

// d/dx0 of h_from_section.
double dh_dx0(double x0);

}  // namespace meln
