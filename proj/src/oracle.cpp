#include "meln/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <utility>

#include "meln/errors.hpp"
#include "meln/geometry.hpp"

namespace meln {

namespace {

double ipow(double x, int e) {
    if (e < 0) return 1.0 / ipow(x, -e);
    double r = 1.0, b = x;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

void check_window(double h, bool allow_center) {
    if (allow_center && h == -1.0) return;  // exact degenerate-oval marker
    if (!(h >= kWindowLo && h <= kWindowHi))
        throw OutOfAnnulus("energy " + std::to_string(h) + " outside the supported window");
}

// Exact value of the j = 0 integral of x^p over [xA, xB] (p = i - 4), written
// through the reciprocal endpoints 1/xA = 1 + s, 1/xB = 1 - s (s = sqrt(1+h)),
// which the defining quadratic gives exactly; e.g. p = -2 yields 2s with no
// rounding beyond the square root.
QuadratureResult power_integral(int p, double h) {
    const double s = std::sqrt(1.0 + h);
    const double rA = 1.0 + s;  // = 1/xA
    const double rB = 1.0 - s;  // = 1/xB
    double value;
    if (p == -1)
        value = std::log(rA / rB);
    else
        value = (ipow(rB, -(p + 1)) - ipow(rA, -(p + 1))) / static_cast<double>(p + 1);
    return {value, 0.0, 0, true};
}

// Integral of x^p y^j dx over the upper arc, x increasing, for j >= -1.
// Under x = xA + w sin^2(theta) (w = xB - xA) the branch factors as
//   y = sin(theta) cos(theta) w sqrt(2 x (-h)),   dx = 2 w sin cos dtheta,
// so the theta-integrand is smooth on [0, pi/2] even for j = -1.
QuadratureResult integrate_xy(int p, int j, double h, double tol) {
    LevelEndpoints le = level_endpoints(h);
    const double w = le.xB - le.xA;
    const double mh = -h;
    const double half_pi = std::acos(-1.0) / 2.0;
    auto f = [&](double theta, double dl, double dr) -> double {
        (void)theta;
        double s, c, x;
        if (dl <= dr) {  // theta == dl, measured from 0
            s = std::sin(dl);
            c = std::cos(dl);
            x = le.xA + w * s * s;
        } else {  // theta == pi/2 - dr, measured from pi/2
            c = std::sin(dr);
            s = std::cos(dr);
            x = le.xB - w * c * c;
        }
        const double core = std::sqrt(2.0 * x * mh);
        if (j == -1) return 2.0 * ipow(x, p) / core;
        return ipow(x, p) * ipow(s * c * w * core, j) * 2.0 * w * s * c;
    };
    return tanh_sinh(f, 0.0, half_pi, tol);
}

void format17(char* buf, size_t n, double v) { std::snprintf(buf, n, "%.17g", v); }

}  // namespace

void validate_index(const IntegralIndex& idx) {
    if (idx.i < -1 || idx.j < 0)
        throw InvalidIndex("integral index (" + std::to_string(idx.i) + "," + std::to_string(idx.j) +
                           ") outside i >= -1, j >= 0");
}

QuadratureResult oracle_I(const IntegralIndex& idx, double h, double tol) {
    validate_index(idx);
    if (tol < 1e-13) throw UsageError("quadrature tolerance below 1e-13");
    check_window(h, /*allow_center=*/true);
    if (h == -1.0) return {0.0, 0.0, 0, true};  // the oval degenerates to a point
    if (idx.j == 0) return power_integral(idx.i - 4, h);
    return integrate_xy(idx.i - 4, idx.j, h, tol);
}

QuadratureResult oracle_J(const IntegralIndex& idx, double h, double tol) {
    validate_index(idx);
    if (tol < 1e-13) throw UsageError("quadrature tolerance below 1e-13");
    check_window(h, /*allow_center=*/true);
    if (h == -1.0) return {0.0, 0.0, 0, true};
    if (idx.j == 0) {
        QuadratureResult r = power_integral(idx.i - 4, h);
        r.value = -r.value;  // lower arc runs x decreasing
        return r;
    }
    // Literal route in the x variable: the branch -y+(x) evaluated pointwise,
    // with (x - xA)(xB - x) taken from the quadrature's endpoint distances so
    // the radicand never cancels.
    LevelEndpoints le = level_endpoints(h);
    const double mh = -h;
    const int p = idx.i - 4;
    const int j = idx.j;
    auto f = [&](double x, double dl, double dr) -> double {
        const double ylow = -std::sqrt(2.0 * mh * x * dl * dr);
        return ipow(x, p) * ipow(ylow, j);
    };
    QuadratureResult r = tanh_sinh(f, le.xA, le.xB, tol);
    r.value = -r.value;  // orientation: x decreasing
    return r;
}

QuadratureResult oracle_dIdh(const IntegralIndex& idx, double h, double tol) {
    validate_index(idx);
    if (tol < 1e-13) throw UsageError("quadrature tolerance below 1e-13");
    check_window(h, /*allow_center=*/false);
    if (idx.j == 0) {
        // Only the endpoints move: d/dh of the integral of x^(i-4) is
        // xB^(i-4) xB'(h) - xA^(i-4) xA'(h) with xA' = -xA^2/(2s), xB' = xB^2/(2s).
        const double s = std::sqrt(1.0 + h);
        LevelEndpoints le = level_endpoints(h);
        const double dxA = -le.xA * le.xA / (2.0 * s);
        const double dxB = le.xB * le.xB / (2.0 * s);
        return {ipow(le.xB, idx.i - 4) * dxB - ipow(le.xA, idx.i - 4) * dxA, 0.0, 0, true};
    }
    // Differentiating under the integral sign: dy/dh at fixed x is x^3 / y,
    // so I'_{i,j} = j * integral of x^(i-1) y^(j-2) dx.
    QuadratureResult r = integrate_xy(idx.i - 1, idx.j - 2, h, tol);
    r.value *= idx.j;
    r.error_estimate *= idx.j;
    return r;
}

double oracle_d2Idh2(const IntegralIndex& idx, double h, double tol) {
    validate_index(idx);
    const double step = 1e-4;
    check_window(h - step, /*allow_center=*/false);
    check_window(h + step, /*allow_center=*/false);
    const double inner_tol = std::min(tol, 1e-12);
    auto d1 = [&](double at) { return oracle_dIdh(idx, at, inner_tol).value; };
    auto central = [&](double s) { return (d1(h + s) - d1(h - s)) / (2.0 * s); };
    const double coarse = central(step);
    const double fine = central(step / 2.0);
    return (4.0 * fine - coarse) / 3.0;  // Richardson: cancels the O(s^2) term
}

QuadratureResult oracle_area(double h, double tol) {
    if (tol < 1e-13) throw UsageError("quadrature tolerance below 1e-13");
    check_window(h, /*allow_center=*/true);
    if (h == -1.0) return {0.0, 0.0, 0, true};
    // Scanline area: integrate the height function from the geometry module
    // (its own stable factoring, not the oracle integrand builder) by adaptive
    // Simpson, under an angular reparametrization so the integrand stays
    // smooth where the branch meets the x axis.
    LevelEndpoints le = level_endpoints(h);
    const double w = le.xB - le.xA;
    const double half_pi = std::acos(-1.0) / 2.0;
    auto f = [&](double theta) -> double {
        const double s = std::sin(theta), c = std::cos(theta);
        double x = le.xA + w * s * s;
        if (x > le.xB) x = le.xB;
        return curve_height(x, h) * 2.0 * w * s * c;
    };
    return adaptive_simpson(f, 0.0, half_pi, tol);
}

GeneratorValues oracle_generators(double h, double tol) {
    static std::map<std::pair<double, double>, GeneratorValues> cache;
    const auto key = std::make_pair(h, tol);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    GeneratorValues g{oracle_I({0, 1}, h, tol).value, oracle_I({1, 1}, h, tol).value,
                      oracle_I({2, 0}, h, tol).value, oracle_I({0, 2}, h, tol).value};
    cache.emplace(key, g);
    return g;
}

void oracle_batch_csv(const std::vector<IntegralIndex>& indices, const std::vector<double>& hs,
                      double tol, std::ostream& out) {
    out << "i,j,h,value,error_estimate\n";
    char a[32], b[32], c[32];
    for (const IntegralIndex& idx : indices) {
        for (double h : hs) {
            QuadratureResult r = oracle_I(idx, h, tol);
            format17(a, sizeof a, h);
            format17(b, sizeof b, r.value);
            format17(c, sizeof c, r.error_estimate);
            out << idx.i << ',' << idx.j << ',' << a << ',' << b << ',' << c << '\n';
        }
    }
}

}  // namespace meln
