#pragma once

#include <iosfwd>
#include <vector>

#include "meln/assembler.hpp"

namespace meln {

// Scan window: boundary layers of width 1e-4 at both ends of (-1, 0) are
// excluded — the generators degenerate there and the h^-p prefactor blows up;
// zeros inside the layers are outside the certified range.
inline constexpr double kScanLo = -1.0 + 1e-4;
inline constexpr double kScanHi = -1e-4;

enum class BracketKind { kSimple, kFlaggedTangency };

struct ZeroBracket {
    double lo = 0.0;
    double hi = 0.0;
    double refined_root = 0.0;
    BracketKind kind = BracketKind::kSimple;
};

// Result of one stabilized scan. Brackets are disjoint and ordered; every
// simple bracket straddles a sign change and holds its bisected root;
// flagged brackets mark near-zero local minima of |M| without a sign change
// (possible tangencies, not counted as simple).
struct ZeroReport {
    std::vector<ZeroBracket> brackets;
    int count_simple = 0;
    int grid_size = 0;
    int flagged() const;
};

// Scans M on a uniform grid over [kScanLo, kScanHi] (grid >= 64, forced up if
// smaller), brackets sign changes, bisects each to width <= tol, and flags
// non-crossing near-zeros. The grid doubles until two consecutive doublings
// leave both counts unchanged. DegenerateForm when the form is exactly zero.
ZeroReport count_zeros(const MelnikovForm& form, int grid = 64, double tol = 1e-13);

// Largest zero count the theorems allow for a degree-n perturbation:
// discontinuous 40 / 24n-56 / 22n-64 over n in {2,3} / 4..7 / >= 8;
// symmetric 4 for n in {2,3}, 3n-8 for n >= 4. Returns -1 when n < 2
// (no bound applies).
int theorem_bound(int n, bool symmetric);

struct BoundCheck {
    int bound = -1;           // -1: no applicable bound (degree < 2)
    int effective_count = 0;  // count_simple + 2 * flagged (tangency counts twice)
    bool pass = true;
};

// One-sided comparison of the observed count against the theorem bound; a
// flagged tangency is charged as a double zero to keep the comparison
// conservative. Degrees below 2 pass vacuously.
BoundCheck bound_check(const PerturbationSpec& spec, const ZeroReport& report);

// CSV "h,M" over the scan window (closed evaluation mode), floats at 17
// significant digits.
void melnikov_csv(const MelnikovForm& form, int samples, std::ostream& out);

// Degree-0 spec built so that M has a simple zero at exactly h = -1/2: the
// b-part (b_plus = 1 at (0,0)) and the a-part (a_plus = a_minus = 1/2 at
// (0,0)) are mixed by the one ratio that cancels M(-1/2), found through the
// linearity of the assembled form and snapped to an exact dyadic rational.
PerturbationSpec one_zero_spec();

}  // namespace meln
