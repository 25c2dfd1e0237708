#include "meln/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "meln/errors.hpp"
#include "meln/geometry.hpp"

namespace meln {

namespace {

void require_open_annulus(double h) {
    if (h == -1.0) return;  // degenerate oval: both closed forms vanish
    if (!(h > -1.0 && h < 0.0))
        throw OutOfAnnulus("energy " + std::to_string(h) + " outside [-1, 0)");
}

// Two-level Richardson central difference; the step shrinks near the window
// edges so every evaluation stays inside the supported energy range.
double richardson_derivative(const std::function<double(double)>& f, double h) {
    double step = std::min({1e-4, 0.45 * (kWindowHi - h), 0.45 * (h - kWindowLo)});
    auto central = [&](double s) { return (f(h + s) - f(h - s)) / (2.0 * s); };
    const double coarse = central(step);
    const double fine = central(step / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

using PolyRow = std::array<Poly, 2>;
using PolyMat = std::array<std::array<Poly, 2>, 2>;

PolyMat linear_mat(const QMat& slope, const QMat& intercept) {  // slope*h + intercept
    PolyMat m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m[i][j] = Poly::monomial(1, slope.at(i, j)) + Poly(intercept.at(i, j));
    return m;
}

PolyMat const_mat(const QMat& a) {
    PolyMat m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = Poly(a.at(i, j));
    return m;
}

PolyMat mat_mul(const PolyMat& a, const PolyMat& b) {
    PolyMat m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return m;
}

PolyRow row_times(const PolyRow& r, const PolyMat& m) {
    return {r[0] * m[0][0] + r[1] * m[1][0], r[0] * m[0][1] + r[1] * m[1][1]};
}

PolyRow row_add(const PolyRow& a, const PolyRow& b) { return {a[0] + b[0], a[1] + b[1]}; }

}  // namespace

double closed_I20(double h) {
    require_open_annulus(h);
    return 2.0 * std::sqrt(1.0 + h);
}

double closed_I02(double h) {
    require_open_annulus(h);
    if (h == -1.0) return 0.0;
    const double s = std::sqrt(1.0 + h);
    return 4.0 * s - 2.0 * h * std::log((1.0 - s) / (1.0 + s));
}

const PFSystem& pf_system() {
    static const PFSystem sys = [] {
        PFSystem s{QMat::identity(2), QMat(2, 2), QMat(2, 2),
                   QMat(2, 2),        QMat(2, 2), QMat(2, 2)};
        s.B.at(0, 0) = Rat(4, 5);
        s.B.at(0, 1) = Rat(4, 15);
        s.B.at(1, 1) = Rat(4, 3);
        s.C.at(0, 0) = Rat(16, 15);
        s.C.at(1, 0) = Rat(4, 3);
        s.evenA.at(0, 0) = 2;
        s.evenA.at(1, 0) = 4;
        s.evenA.at(1, 1) = 1;
        s.evenB.at(0, 0) = 2;
        s.evenB.at(1, 0) = 4;
        s.EmB_inv = (s.E - s.B).inverse();
        return s;
    }();
    return sys;
}

PFResidual pf_residual(double h, double tol) {
    const GeneratorValues g = oracle_generators(h, tol);
    const double d01 = oracle_dIdh({0, 1}, h, tol).value;
    const double d11 = oracle_dIdh({1, 1}, h, tol).value;
    const double d20 = oracle_dIdh({2, 0}, h, tol).value;
    const double d02 = oracle_dIdh({0, 2}, h, tol).value;
    const PFSystem& sys = pf_system();
    auto entry = [h](const QMat& slope, const QMat& intercept, int i, int j) {
        return to_double(slope.at(i, j)) * h + to_double(intercept.at(i, j));
    };
    PFResidual r{};
    r.odd0 = g.I01 - (entry(sys.B, sys.C, 0, 0) * d01 + entry(sys.B, sys.C, 0, 1) * d11);
    r.odd1 = g.I11 - (entry(sys.B, sys.C, 1, 0) * d01 + entry(sys.B, sys.C, 1, 1) * d11);
    r.even0 =
        g.I20 - (entry(sys.evenA, sys.evenB, 0, 0) * d20 + entry(sys.evenA, sys.evenB, 0, 1) * d02);
    r.even1 =
        g.I02 - (entry(sys.evenA, sys.evenB, 1, 0) * d20 + entry(sys.evenA, sys.evenB, 1, 1) * d02);
    r.scale = std::max({std::fabs(g.I01), std::fabs(g.I11), std::fabs(g.I20), std::fabs(g.I02)});
    return r;
}

double riccati_residual(double h, RiccatiRatio which, double tol) {
    if (std::fabs(h) < 1e-6 || std::fabs(h + 1.0) < 1e-6)
        throw OutOfAnnulus("ratio derivative needs 1e-6 clearance from both window ends");
    std::function<double(double)> ratio;
    if (which == RiccatiRatio::kOmega1) {
        ratio = [tol](double at) {
            const double den = oracle_I({0, 1}, at, tol).value;
            if (std::fabs(den) < 1e-12) throw DegenerateRatio("denominator integral below 1e-12");
            return oracle_I({1, 1}, at, tol).value / den;
        };
    } else {
        ratio = [tol](double at) {
            const double den = oracle_dIdh({0, 1}, at, tol).value;
            if (std::fabs(den) < 1e-12) throw DegenerateRatio("denominator integral below 1e-12");
            return oracle_dIdh({1, 1}, at, tol).value / den;
        };
    }
    const double w = ratio(h);
    const double wp = richardson_derivative(ratio, h);
    const double G = h * (h + 1.0);
    const double rhs = (which == RiccatiRatio::kOmega1)
                           ? 0.25 * h * w * w - 0.5 * (h - 2.0) * w - 1.25
                           : 0.25 * h * w * w - 0.5 * h * w - 0.25;
    return G * wp - rhs;
}

Annihilator build_annihilator(const Poly& alpha, const Poly& beta, int n) {
    if (n < 2) throw UsageError("annihilator construction requires degree n >= 2");
    const int case_id = (n <= 3) ? 1 : (n <= 7 ? 2 : 3);
    int amax, bmax, d2, d1, d0;
    if (case_id == 1) {
        amax = 0, bmax = 1, d2 = 4, d1 = 3, d0 = 2;
    } else if (case_id == 2) {
        amax = n - 4, bmax = n - 3, d2 = 2 * n - 4, d1 = 2 * n - 5, d0 = 2 * n - 6;
    } else {
        amax = n - 5, bmax = n - 4, d2 = 2 * n - 6, d1 = 2 * n - 7, d0 = 2 * n - 8;
    }
    if (alpha.deg() > amax || beta.deg() > bmax)
        throw DegreeOverflow("input degrees (" + std::to_string(alpha.deg()) + ", " +
                             std::to_string(beta.deg()) + ") exceed the caps (" +
                             std::to_string(amax) + ", " + std::to_string(bmax) + ") at n = " +
                             std::to_string(n));
    Annihilator out;
    out.case_id = case_id;
    if (alpha.is_zero() && beta.is_zero()) {
        out.P2 = Poly(1);
        out.degenerate_input = true;  // every operator annihilates 0; pick a canonical one
        return out;
    }

    // Express Phi, Phi', Phi'' as polynomial rows against (I01'', I11''): with
    // V = (B h + C) V' and V' = (E - B)^{-1} (B h + C) V'' =: W V'',
    //   Phi   = tau (B h + C) W V''
    //   Phi'  = [tau' (B h + C) + tau] W V''
    //   Phi'' = [tau'' (B h + C) + tau' B + tau'] W V'' + [tau' (B h + C) + tau] V''
    const PFSystem& sys = pf_system();
    const PolyMat BhC = linear_mat(sys.B, sys.C);
    const PolyMat Bmat = const_mat(sys.B);
    const PolyMat W = mat_mul(const_mat(sys.EmB_inv), BhC);
    const PolyRow tau{alpha, beta};
    const PolyRow taup{alpha.derivative(), beta.derivative()};
    const PolyRow taupp{taup[0].derivative(), taup[1].derivative()};
    const PolyRow r0 = row_times(row_times(tau, BhC), W);
    const PolyRow bracket1 = row_add(row_times(taup, BhC), tau);
    const PolyRow r1 = row_times(bracket1, W);
    const PolyRow bracket2 = row_add(row_times(taupp, BhC), row_add(row_times(taup, Bmat), taup));
    const PolyRow r2 = row_add(row_times(bracket2, W), bracket1);

    // P2 r2 + P1 r1 + P0 r0 = 0 componentwise: match every h-power coefficient.
    const int u2 = d2 + 1, u1 = d1 + 1, u0 = d0 + 1;
    const int cols = u2 + u1 + u0;
    auto col_degree = [&](int col) {
        return std::max({r2[col].deg() + d2, r1[col].deg() + d1, r0[col].deg() + d0});
    };
    const int dX = col_degree(0), dY = col_degree(1);
    const int rows = (dX + 1) + (dY + 1);
    QMat system(std::max(rows, 1), cols);
    int rowbase = 0;
    for (int col = 0; col < 2; ++col) {
        const int dcol = (col == 0) ? dX : dY;
        for (int k = 0; k <= dcol; ++k) {
            for (int t = 0; t <= d2 && t <= k; ++t) system.at(rowbase + k, t) = r2[col].coef(k - t);
            for (int t = 0; t <= d1 && t <= k; ++t)
                system.at(rowbase + k, u2 + t) = r1[col].coef(k - t);
            for (int t = 0; t <= d0 && t <= k; ++t)
                system.at(rowbase + k, u2 + u1 + t) = r0[col].coef(k - t);
        }
        rowbase += dcol + 1;
    }
    auto basis = system.nullspace();
    if (basis.empty())
        throw EmptyNullspace("no exact second-order operator within the degree caps at n = " +
                             std::to_string(n));
    const std::vector<Rat>& v = basis.front();
    auto take = [&](int off, int cnt) {
        return Poly(std::vector<Rat>(v.begin() + off, v.begin() + off + cnt));
    };
    out.P2 = take(0, u2);
    out.P1 = take(u2, u1);
    out.P0 = take(u2 + u1, u0);
    return out;
}

double annihilator_residual(const Annihilator& ann, const Poly& alpha, const Poly& beta, double h,
                            double tol) {
    const IntegralIndex i01{0, 1}, i11{1, 1};
    const double v01 = oracle_I(i01, h, tol).value;
    const double v11 = oracle_I(i11, h, tol).value;
    const double d01 = oracle_dIdh(i01, h, tol).value;
    const double d11 = oracle_dIdh(i11, h, tol).value;
    const double dd01 = oracle_d2Idh2(i01, h, tol);
    const double dd11 = oracle_d2Idh2(i11, h, tol);
    const Poly alphap = alpha.derivative(), betap = beta.derivative();
    const double a = alpha.eval(h), b = beta.eval(h);
    const double ap = alphap.eval(h), bp = betap.eval(h);
    const double app = alphap.derivative().eval(h), bpp = betap.derivative().eval(h);
    const double phi = a * v01 + b * v11;
    const double phip = ap * v01 + a * d01 + bp * v11 + b * d11;
    const double phipp = app * v01 + 2.0 * ap * d01 + a * dd01  //
                         + bpp * v11 + 2.0 * bp * d11 + b * dd11;
    const double t2 = ann.P2.eval(h) * phipp;
    const double t1 = ann.P1.eval(h) * phip;
    const double t0 = ann.P0.eval(h) * phi;
    const double scale = std::max({1.0, std::fabs(t2), std::fabs(t1), std::fabs(t0)});
    return std::fabs(t2 + t1 + t0) / scale;
}

std::pair<Poly, Poly> derive_chi_riccati(const Poly& alpha, const Poly& beta, int n) {
    if (beta.is_zero()) throw ZeroBeta("the ratio substitution needs a nonzero beta");
    const Poly h = Poly::variable();
    const Poly G = Poly::monomial(2) + Poly::monomial(1);  // h (h + 1)
    const Poly hm2 = h - Poly(2);
    const Poly F1 = G * beta.derivative() - Rat(1, 2) * (h * alpha) - Rat(1, 2) * (hm2 * beta);
    const Poly F0 = G * (beta * alpha.derivative() - beta.derivative() * alpha) +
                    Rat(1, 4) * (h * alpha * alpha) + Rat(1, 2) * (hm2 * alpha * beta) -
                    Rat(5, 4) * (beta * beta);
    if (n >= 8 && alpha.deg() <= n - 5 && beta.deg() <= n - 4 && F0.deg() > 2 * n - 8)
        throw DegreeOverflow("free coefficient degree " + std::to_string(F0.deg()) +
                             " exceeds its cap " + std::to_string(2 * n - 8));
    return {F1, F0};
}

double chi_riccati_residual(const Poly& alpha, const Poly& beta, const Poly& F1, const Poly& F0,
                            double h, double tol) {
    if (std::fabs(h) < 1e-6 || std::fabs(h + 1.0) < 1e-6)
        throw OutOfAnnulus("ratio derivative needs 1e-6 clearance from both window ends");
    std::function<double(double)> chi = [&alpha, &beta, tol](double at) {
        const double den = oracle_I({0, 1}, at, tol).value;
        if (std::fabs(den) < 1e-12) throw DegenerateRatio("denominator integral below 1e-12");
        const double w = oracle_I({1, 1}, at, tol).value / den;
        return alpha.eval(at) + beta.eval(at) * w;
    };
    const double c = chi(h);
    const double cp = richardson_derivative(chi, h);
    const double G = h * (h + 1.0);
    return G * beta.eval(h) * cp - (0.25 * h * c * c + F1.eval(h) * c + F0.eval(h));
}

}  // namespace meln
