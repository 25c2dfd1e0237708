#pragma once

#include <utility>

#include "meln/matrix.hpp"
#include "meln/oracle.hpp"
#include "meln/poly.hpp"

namespace meln {

// Elementary closed forms of the even generators (s = sqrt(h+1)):
//   I_{2,0} = 2 s,   I_{0,2} = 4 s - 2 h ln((1-s)/(1+s)).
// Defined on [-1, 0); the value at h = -1 is exactly 0.
double closed_I20(double h);
double closed_I02(double h);

// The first-order systems satisfied by the generators, as exact matrices:
// odd pair V = (I01, I11):   V = (B h + C) V',  with E the identity — the
// substitution V' = (E - B)^{-1} (B h + C) V'' closes the second-order step;
// even pair U = (I20, I02):  U = (evenA h + evenB) U'.
struct PFSystem {
    QMat E, B, C;
    QMat evenA, evenB;
    QMat EmB_inv;  // (E - B)^{-1}
};
const PFSystem& pf_system();

// Residuals of the two first-order systems under pure quadrature values.
// scale is the largest generator magnitude at h.
struct PFResidual {
    double odd0, odd1;
    double even0, even1;
    double scale;
};
PFResidual pf_residual(double h, double tol = kOracleDefaultTol);

// Residual of the scalar quadratic ODE satisfied by a generator ratio, with
// the ratio's derivative taken by two-level Richardson differences:
//   omega1 = I11/I01:    G w' = (h/4) w^2 - ((h-2)/2) w - 5/4
//   omega2 = I11'/I01':  G w' = (h/4) w^2 - (h/2) w   - 1/4
// where G = h(h+1). Requires 1e-6 < |h|, |h+1| (the roots of G);
// DegenerateRatio when the denominator integral is below 1e-12.
enum class RiccatiRatio { kOmega1, kOmega2 };
double riccati_residual(double h, RiccatiRatio which, double tol = kOracleDefaultTol);

// Second-order operator P2 D^2 + P1 D + P0 with polynomial coefficients
// annihilating Phi = alpha I01 + beta I11, built by expressing Phi, Phi',
// Phi'' over (I01'', I11'') through the odd system and exactly solving the
// coefficient-matching homogeneous system.
struct Annihilator {
    Poly P2, P1, P0;
    int case_id = 0;          // 1: degree 2..3, 2: degree 4..7, 3: degree >= 8
    bool degenerate_input = false;  // alpha = beta = 0: any operator works
};

// Degree caps: case 1 inputs deg alpha <= 0, deg beta <= 1, P-degrees (4,3,2);
// case 2 inputs (n-4, n-3), P-degrees (2n-4, 2n-5, 2n-6); case 3 inputs
// (n-5, n-4), P-degrees (2n-6, 2n-7, 2n-8). DegreeOverflow when the inputs
// exceed their caps; EmptyNullspace if no exact operator exists (impossible by
// the dimension count; fatal if seen).
Annihilator build_annihilator(const Poly& alpha, const Poly& beta, int n);

// |P2 Phi'' + P1 Phi' + P0 Phi| / scale at one energy, all generator values by
// quadrature and second derivatives by Richardson differences of the exact
// first-derivative integrals; scale = max(1, |P2 Phi''|, |P1 Phi'|, |P0 Phi|).
double annihilator_residual(const Annihilator& ann, const Poly& alpha, const Poly& beta, double h,
                            double tol = kOracleDefaultTol);

// Exact coefficients (F1, F0) of the Riccati equation satisfied by
// chi = alpha + beta * omega1:
//   G beta chi' = (h/4) chi^2 + F1 chi + F0
//   F1 = G beta' - (h/2) alpha - ((h-2)/2) beta
//   F0 = G (beta alpha' - beta' alpha) + (h/4) alpha^2 + ((h-2)/2) alpha beta
//        - (5/4) beta^2
// ZeroBeta when beta vanishes identically. For degree-n >= 8 admissible
// inputs, deg F0 <= 2n-8 is asserted (DegreeOverflow on violation).
std::pair<Poly, Poly> derive_chi_riccati(const Poly& alpha, const Poly& beta, int n);

// Numerical residual of that equation at one energy (chi' by Richardson).
double chi_riccati_residual(const Poly& alpha, const Poly& beta, const Poly& F1, const Poly& F0,
                            double h, double tol = kOracleDefaultTol);

}  // namespace meln
