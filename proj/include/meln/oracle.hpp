#pragma once

#include <iosfwd>
#include <vector>

#include "meln/quadrature.hpp"

namespace meln {

struct PerturbationSpec;  // melnikov assembler input; needed only by direct_M

// Index of the line integral I_{i,j}(h) = integral over the upper arc of the
// level oval of x^(i-4) y^j dx, oriented with x increasing. Valid: i >= -1,
// j >= 0 (InvalidIndex otherwise).
struct IntegralIndex {
    int i = 0;
    int j = 0;
};

void validate_index(const IntegralIndex& idx);

inline constexpr double kOracleDefaultTol = 1e-10;

// Upper-arc integral I_{i,j}(h). Accepts h in [-1, 0) (OutOfAnnulus
// otherwise); at h = -1 the oval is a point and the value is exactly 0.
// j = 0 integrals use the elementary antiderivative of x^(i-4) and report
// zero quadrature evaluations. tol must be >= 1e-13. When the quadrature
// fails to converge the best value is returned with converged = false.
QuadratureResult oracle_I(const IntegralIndex& idx, double h, double tol = kOracleDefaultTol);

// Lower-arc integral J_{i,j}(h), computed by the literal route: the lower
// branch y = -y+(x) traversed with x decreasing (the flow direction). The
// symmetry J = (-1)^(j+1) I is a test property, not used here.
QuadratureResult oracle_J(const IntegralIndex& idx, double h, double tol = kOracleDefaultTol);

// d/dh I_{i,j}(h). For j >= 1 uses the interior-derivative identity
// I'_{i,j} = j * integral of x^(i-1) y^(j-2) dx (the 1/y case j = 1 is
// regular after the angular substitution); for j = 0 the exact boundary
// formula at the moving endpoints.
QuadratureResult oracle_dIdh(const IntegralIndex& idx, double h, double tol = kOracleDefaultTol);

// Second derivative by Richardson extrapolation (two levels) of oracle_dIdh
// with base step 1e-4, keeping this route independent of any differential
// system being tested against it.
double oracle_d2Idh2(const IntegralIndex& idx, double h, double tol = kOracleDefaultTol);

// Area of the upper half of the level oval: the geometry module's height
// function integrated in x by adaptive Simpson (under an angular
// reparametrization that keeps the integrand smooth at the endpoints) —
// an independent cross-check equal to I_{4,1}.
QuadratureResult oracle_area(double h, double tol = kOracleDefaultTol);

// First-order displacement integrand integrated literally over one revolution:
// M(h) = sum over both arcs of x^-4 [g dx - f dy], with dy = y'(x) dx on the
// arc. Dual route to the assembled generator form.
double direct_M(const PerturbationSpec& spec, double h, double tol = kOracleDefaultTol);

// Values of the four generator integrals at one energy; memoized per (h, tol).
struct GeneratorValues {
    double I01, I11, I20, I02;
};
GeneratorValues oracle_generators(double h, double tol = kOracleDefaultTol);

// CSV batch: header "i,j,h,value,error_estimate" then one row per
// (index, h) pair, floats at 17 significant digits.
void oracle_batch_csv(const std::vector<IntegralIndex>& indices, const std::vector<double>& hs,
                      double tol, std::ostream& out);

}  // namespace meln
