#include <cmath>
#include <vector>

#include "meln/assembler.hpp"
#include "meln/errors.hpp"
#include "meln/geometry.hpp"
#include "meln/oracle.hpp"

namespace meln {

namespace {

// f or g on one half-plane, coefficients densified to doubles for quadrature.
struct HalfPoly {
    int n = 0;
    std::vector<double> c;  // (n+1) x (n+1), index i*(n+1)+j

    double eval(double x, double y) const {
        double acc = 0.0;
        for (int j = n; j >= 0; --j) {
            double row = 0.0;
            for (int i = n - j; i >= 0; --i) row = row * x + c[static_cast<size_t>(i) * (n + 1) + j];
            acc = acc * y + row;
        }
        return acc;
    }
};

HalfPoly densify(const PerturbationSpec& spec, bool a_table, bool plus) {
    HalfPoly p;
    p.n = spec.n;
    p.c.assign(static_cast<size_t>(spec.n + 1) * (spec.n + 1), 0.0);
    for (const auto& [ij, e] : spec.coefficients) {
        const Rat& r = a_table ? (plus ? e.a_plus : e.a_minus) : (plus ? e.b_plus : e.b_minus);
        p.c[static_cast<size_t>(ij.first) * (spec.n + 1) + ij.second] = to_double(r);
    }
    return p;
}

}  // namespace

double direct_M(const PerturbationSpec& spec, double h, double tol) {
    spec.validate();
    if (!(h >= kWindowLo && h <= kWindowHi))
        throw OutOfAnnulus("energy " + std::to_string(h) + " outside the supported window");
    if (tol < 1e-13) throw UsageError("quadrature tolerance below 1e-13");

    const LevelEndpoints le = level_endpoints(h);
    const double mh = -h;
    const HalfPoly fp = densify(spec, true, true), fm = densify(spec, true, false);
    const HalfPoly gp = densify(spec, false, true), gm = densify(spec, false, false);

    // One arc of the loop integral of x^-4 (g dx - f dy): dy = y'(x) dx along
    // the branch, with y' = (3hx^2 + 4x - 1)/y. The branch height is rebuilt
    // from the quadrature's endpoint distances so it never cancels.
    auto arc = [&](const HalfPoly& f, const HalfPoly& g, double branch_sign) {
        return tanh_sinh(
            [&, branch_sign](double x, double dl, double dr) {
                const double y = branch_sign * std::sqrt(2.0 * mh * x * dl * dr);
                const double slope = (3.0 * h * x * x + 4.0 * x - 1.0) / y;
                const double w = 1.0 / (x * x * x * x);
                return w * (g.eval(x, y) - f.eval(x, y) * slope);
            },
            le.xA, le.xB, tol);
    };

    const QuadratureResult upper = arc(fp, gp, +1.0);   // x increasing
    const QuadratureResult lower = arc(fm, gm, -1.0);   // x decreasing: negate
    return upper.value - lower.value;
}

}  // namespace meln
