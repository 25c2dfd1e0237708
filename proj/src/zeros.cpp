#include "meln/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

#include "meln/errors.hpp"
#include "meln/report.hpp"

namespace meln {

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Bisect a sign change of the closed-mode evaluation down to width <= tol
// (or the floating-point resolution floor, whichever comes first), tightening
// lo/hi in place.
double bisect_root(const MelnikovForm& form, double& lo, double& hi, int sign_lo, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;  // interval no longer splittable
        const double fm = eval_M(form, mid, EvalMode::kClosed);
        if (fm == 0.0) {
            lo = hi = mid;
            return mid;
        }
        if (sign_of(fm) == sign_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct ScanCounts {
    std::vector<ZeroBracket> brackets;
    int simple = 0;
    int flagged = 0;
};

ScanCounts scan_grid(const MelnikovForm& form, int g, double tol) {
    const double step = (kScanHi - kScanLo) / g;
    std::vector<double> xs(g + 1), fs(g + 1);
    for (int k = 0; k <= g; ++k) {
        xs[k] = (k == g) ? kScanHi : kScanLo + k * step;
        fs[k] = eval_M(form, xs[k], EvalMode::kClosed);
    }
    double scale = 0.0;
    for (double f : fs) scale = std::max(scale, std::fabs(f));
    ScanCounts out;
    if (scale == 0.0) return out;  // numerically zero everywhere: nothing to bracket
    const double tangency_cut = 1e-7 * scale;

    std::vector<char> used(g + 1, 0);  // grid points consumed by a bracket
    // Exact zeros landing on grid points (rare): count once, eat the neighbors.
    for (int k = 0; k <= g; ++k) {
        if (fs[k] != 0.0) continue;
        ZeroBracket b;
        b.lo = (k > 0) ? xs[k - 1] : xs[k];
        b.hi = (k < g) ? xs[k + 1] : xs[k];
        b.refined_root = xs[k];
        b.kind = BracketKind::kSimple;
        out.brackets.push_back(b);
        used[k] = 1;
        if (k > 0) used[k - 1] = 1;
        if (k < g) used[k + 1] = 1;
    }
    // Sign changes between adjacent grid points.
    for (int k = 0; k < g; ++k) {
        if (used[k] || used[k + 1]) continue;
        const int s0 = sign_of(fs[k]), s1 = sign_of(fs[k + 1]);
        if (s0 == 0 || s1 == 0 || s0 == s1) continue;
        ZeroBracket b;
        b.lo = xs[k];
        b.hi = xs[k + 1];
        b.refined_root = bisect_root(form, b.lo, b.hi, s0, tol);
        b.kind = BracketKind::kSimple;
        out.brackets.push_back(b);
    }
    // Non-crossing near-zeros: a strict local minimum of |M| below the cut with
    // equal signs on both sides is a possible tangency, flagged but not counted.
    for (int k = 1; k < g; ++k) {
        if (used[k - 1] || used[k] || used[k + 1]) continue;
        const int s = sign_of(fs[k]);
        if (s == 0 || sign_of(fs[k - 1]) != s || sign_of(fs[k + 1]) != s) continue;
        const double a = std::fabs(fs[k]);
        if (a > tangency_cut || a >= std::fabs(fs[k - 1]) || a >= std::fabs(fs[k + 1])) continue;
        ZeroBracket b;
        b.lo = xs[k - 1];
        b.hi = xs[k + 1];
        b.refined_root = xs[k];
        b.kind = BracketKind::kFlaggedTangency;
        out.brackets.push_back(b);
    }
    std::sort(out.brackets.begin(), out.brackets.end(),
              [](const ZeroBracket& a, const ZeroBracket& b) { return a.lo < b.lo; });
    for (const ZeroBracket& b : out.brackets)
        (b.kind == BracketKind::kSimple ? out.simple : out.flagged) += 1;
    return out;
}

}  // namespace

int ZeroReport::flagged() const {
    int n = 0;
    for (const ZeroBracket& b : brackets)
        if (b.kind == BracketKind::kFlaggedTangency) ++n;
    return n;
}

ZeroReport count_zeros(const MelnikovForm& form, int grid, double tol) {
    if (form.is_zero()) throw DegenerateForm("all four generator coefficients are zero");
    if (!(tol > 0)) throw UsageError("bisection tolerance must be positive");
    int g = std::max(grid, 64);
    ScanCounts prev = scan_grid(form, g, tol);
    int stable_doublings = 0;
    constexpr int kMaxGrid = 1 << 14;
    while (stable_doublings < 2 && g < kMaxGrid) {
        g *= 2;
        ScanCounts cur = scan_grid(form, g, tol);
        stable_doublings =
            (cur.simple == prev.simple && cur.flagged == prev.flagged) ? stable_doublings + 1 : 0;
        prev = std::move(cur);
    }
    ZeroReport rep;
    rep.brackets = std::move(prev.brackets);
    rep.count_simple = prev.simple;
    rep.grid_size = g;
    return rep;
}

int theorem_bound(int n, bool symmetric) {
    if (n < 2) return -1;
    if (symmetric) return (n <= 3) ? 4 : 3 * n - 8;
    return (n <= 3) ? 40 : (n <= 7 ? 24 * n - 56 : 22 * n - 64);
}

BoundCheck bound_check(const PerturbationSpec& spec, const ZeroReport& report) {
    BoundCheck bc;
    bc.effective_count = report.count_simple + 2 * report.flagged();
    bc.bound = theorem_bound(spec.n, spec.symmetric());
    bc.pass = (bc.bound < 0) || (bc.effective_count <= bc.bound);
    return bc;
}

PerturbationSpec one_zero_spec() {
    PerturbationSpec b_part;
    b_part.n = 0;
    b_part.coefficients[{0, 0}] = {Rat(0), Rat(0), Rat(1), Rat(0)};
    PerturbationSpec a_part;
    a_part.n = 0;
    a_part.coefficients[{0, 0}] = {Rat(1, 2), Rat(1, 2), Rat(0), Rat(0)};
    const double mb = eval_M(assemble_M(b_part), -0.5, EvalMode::kClosed);
    const double ma = eval_M(assemble_M(a_part), -0.5, EvalMode::kClosed);
    if (ma == 0.0) throw DegenerateForm("mixing part vanishes at -1/2");
    const Rat t = rat_from_double(-mb / ma);
    PerturbationSpec spec;
    spec.n = 0;
    spec.coefficients[{0, 0}] = {t / 2, t / 2, Rat(1), Rat(0)};
    return spec;
}

void melnikov_csv(const MelnikovForm& form, int samples, std::ostream& out) {
    if (samples < 2) throw UsageError("need at least 2 samples");
    out << "h,M\n";
    const double step = (kScanHi - kScanLo) / (samples - 1);
    for (int k = 0; k < samples; ++k) {
        const double h = (k == samples - 1) ? kScanHi : kScanLo + k * step;
        out << float17(h) << "," << float17(eval_M(form, h, EvalMode::kClosed)) << "\n";
    }
}

}  // namespace meln
