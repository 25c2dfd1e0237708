#include "meln/geometry.hpp"

#include <cmath>
#include <string>

#include "meln/errors.hpp"

namespace meln {

double energy(double x, double y) {
    if (!(x > 0)) throw OutOfAnnulus("energy requires x > 0, got x = " + std::to_string(x));
    return (0.5 * y * y - 2.0 * x * x + x) / (x * x * x);
}

LevelEndpoints level_endpoints(double h) {
    if (!(h > -1.0 && h < 0.0))
        throw OutOfAnnulus("level_endpoints requires h in (-1, 0), got h = " + std::to_string(h));
    // roots of h x^2 + 2x - 1 = 0 in the stable reciprocal form
    double s = std::sqrt(1.0 + h);
    return {1.0 / (1.0 + s), 1.0 / (1.0 - s)};
}

double curve_height(double x, double h) {
    LevelEndpoints e = level_endpoints(h);
    double tol = 1e-12 * e.xB;
    if (x < e.xA - tol || x > e.xB + tol)
        throw OutsideCurve("x = " + std::to_string(x) + " outside [xA, xB] at h = " + std::to_string(h));
    double left = std::max(x - e.xA, 0.0), right = std::max(e.xB - x, 0.0);
    // y^2 = 2 (h x^3 + 2 x^2 - x) = 2 x (-h) (x - xA)(xB - x), factored for
    // stability near the endpoints
    return std::sqrt(2.0 * x * (-h) * left * right);
}

double curve_slope(double x, double h) {
    double y = curve_height(x, h);
    // differentiate y^2 = 2 (h x^3 + 2 x^2 - x):  y' = (3 h x^2 + 4 x - 1) / y
    double num = 3.0 * h * x * x + 4.0 * x - 1.0;
    if (y < 1e-13 * std::max(1.0, std::fabs(num)))
        throw EndpointSingularity("curve_slope at y = 0 (x = " + std::to_string(x) + ")");
    return num / y;
}

double h_from_section(double x0) {
    if (!(x0 > 0.5))
        throw OutOfAnnulus("section point requires x0 > 1/2, got x0 = " + std::to_string(x0));
    return (1.0 - 2.0 * x0) / (x0 * x0);
}

double section_from_h(double h) {
    return level_endpoints(h).xB;
}

double dh_dx0(double x0) {
    if (!(x0 > 0.5))
        throw OutOfAnnulus("section point requires x0 > 1/2, got x0 = " + std::to_string(x0));
    return (2.0 * x0 - 2.0) / (x0 * x0 * x0);
}

}  // namespace meln
