#pragma once

#include <map>
#include <string>
#include <utility>

#include "meln/reduction.hpp"

namespace meln {

// Coefficient tables of the piecewise polynomial perturbation: on the upper
// half-plane the fields gain epsilon*(f_plus, g_plus), on the lower half
// epsilon*(f_minus, g_minus), each a polynomial in (x, y) of total degree <= n
// with f = sum a_{i,j} x^i y^j and g = sum b_{i,j} x^i y^j.
struct PerturbationSpec {
    struct Entry {
        Rat a_plus = Rat(0), a_minus = Rat(0), b_plus = Rat(0), b_minus = Rat(0);
        bool is_zero() const;
    };

    int n = 0;
    std::map<std::pair<int, int>, Entry> coefficients;  // key (i,j), 0 <= i+j <= n

    Entry at(int i, int j) const;     // zero entry when absent
    bool symmetric() const;           // plus tables equal minus tables
    void validate() const;            // UsageError on indices outside 0 <= i+j <= n
};

// Combined weight each line integral receives in the displacement integrand:
// the g-term at x^i y^j contributes (b_plus + (-1)^(j+1) b_minus) to index
// (i, j); the f-term, after moving d y onto d x by parts, contributes
// (i-4)/(j+1) * (a_plus + (-1)^j a_minus) to index (i-1, j+1).
using RhoTable = std::map<std::pair<int, int>, Rat>;

RhoTable rho_coefficients(const PerturbationSpec& spec);

// M(h) = h^(-power) [alpha I_{0,1} + beta I_{1,1} + gamma I_{2,0} + delta I_{0,2}]
// with polynomial coefficients; power is the minimal exponent clearing every
// h-denominator (0 for degree <= 2, at most 1 for degree 3, at most n-3 above).
struct MelnikovForm {
    int n = 0;
    int power = 0;
    Poly alpha, beta, gamma, delta;

    bool is_zero() const;
    RatFunc coefficient(int which) const;  // 0..3 -> alpha..delta over h^power
    GeneratorCombo combo() const;
};

// Reduces the whole displacement integrand to the generator basis and clears
// denominators. Checks the degree caps (BoundViolation if exceeded):
//   n <= 2: power 0,   deg (alpha, beta, gamma, delta) <= (0, 1, 1, 0)
//   n == 3: power <= 1, degs <= (1, 2, 2, 1)
//   n >= 4: power <= n-3, degs <= (n-3, n-2, n-2, n-3)
// measured on h^cap * coefficient (so cancellation cannot hide growth), and
// that symmetric specs produce gamma = delta = 0 exactly.
MelnikovForm assemble_M(const PerturbationSpec& spec);

enum class EvalMode {
    kOracle,  // all four generators by quadrature
    kClosed   // even generators from their elementary closed forms
};

double eval_M(const MelnikovForm& form, double h, EvalMode mode, double tol = kOracleDefaultTol);

// Random spec with coefficients uniform over p/q, p in {-10..10}, q in {1..4};
// symmetric copies the plus tables onto the minus tables. If every top-slice
// (i+j = n) coefficient drew zero, b_plus at (n, 0) is set to 1 so the declared
// degree is honest.
PerturbationSpec random_spec(int n, unsigned long long seed, bool symmetric);

// JSON round-trip: {"n": .., "coefficients": [{"i","j","a_plus",...}, ...]}
// with exact fractions as strings.
PerturbationSpec load_spec(const std::string& path);
PerturbationSpec spec_from_json_text(const std::string& text);
std::string spec_to_json(const PerturbationSpec& spec);

}  // namespace meln
