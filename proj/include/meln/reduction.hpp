#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "meln/oracle.hpp"
#include "meln/ratfunc.hpp"

namespace meln {

// Exact coefficients of a line integral over the four-generator basis
// {I_{0,1}, I_{1,1}, I_{2,0}, I_{0,2}}. Every valid index reduces to such a
// combination over Q(h); the coefficients' denominators are powers of h.
struct GeneratorCombo {
    RatFunc c01, c11, c20, c02;

    bool operator==(const GeneratorCombo& o) const = default;
    bool is_zero() const { return c01.is_zero() && c11.is_zero() && c20.is_zero() && c02.is_zero(); }
    bool odd_part_only() const { return c20.is_zero() && c02.is_zero(); }
    bool even_part_only() const { return c01.is_zero() && c11.is_zero(); }

    GeneratorCombo operator+(const GeneratorCombo& o) const;
    GeneratorCombo operator-(const GeneratorCombo& o) const;
    GeneratorCombo scaled(const RatFunc& s) const;

    // Numerical value of the combination at one energy.
    double eval(double h, const GeneratorValues& g) const;
};

// One rewrite step: the index resolved and the rule that resolved it.
// Rules: "GEN" (generator hit), "BASE(2.1)"/"BASE(2.2)" (explicit identity),
// "R29" (i-descent, also covers the single reverse use at (-1,0)),
// "R27" (j-descent).
struct TraceStep {
    IntegralIndex index;
    std::string rule;
};

// Audit trail of a reduction: the rewrite worklist in the order processed,
// terminal hits last, so the final entry is always GEN or BASE.
struct ReductionTrace {
    std::vector<TraceStep> steps;
};

// Memoizing rewrite engine. Not thread-safe; use one engine per thread or the
// process-wide instance behind reduce() from a single thread.
class ReductionEngine {
  public:
    const GeneratorCombo& combo(const IntegralIndex& idx);
    size_t cache_size() const { return memo_.size(); }

  private:
    std::map<std::pair<int, int>, GeneratorCombo> memo_;
};

struct ReductionResult {
    GeneratorCombo combo;
    ReductionTrace trace;
};

// Reduce I_{i,j} to the generator basis (process-wide memoized engine) and
// report the rewrite trail. Valid for all i >= -1, j >= 0.
ReductionResult reduce(const IntegralIndex& idx);
GeneratorCombo reduce_combo(const IntegralIndex& idx);

// The trace alone; deterministic and independent of any memo state.
ReductionTrace reduction_trace(const IntegralIndex& idx);

// Degree/parity audit of the reductions on the total-degree slices
// i + j = n-1 and i + j = n. For each index it checks, against the slice's
// total degree m = i + j:
//   - parity purity: odd j touches only I01/I11, even j only I20/I02;
//   - the denominator is h^k with k <= P(m), P = 0 (m<=2), 1 (m=3), m-3 (m>=4);
//   - the numerator degrees of h^P(m) * coefficient obey the per-case caps:
//       m <= 3:      all <= 1
//       4 <= m <= 7: c01, c02 <= m-4; c11, c20 <= m-3
//       m >= 8:      c01 <= m-5; c11, c20 <= m-4; c02 = 0
// Violations throw BoundViolation naming the index (fatal by design).
struct DegreeEntry {
    IntegralIndex index;
    int den_power;                          // k of the largest h^k denominator
    int deg01, deg11, deg20, deg02;         // un-cancelled numerator degrees, -1 if zero
    bool ok;
};
struct DegreeProfile {
    int n;
    std::vector<DegreeEntry> entries;
};
DegreeProfile degree_profile(int n);  // n >= 2 (UsageError otherwise)

// Golden-file loader: lines "i j | c01 | c11 | c20 | c02", each coefficient in
// the exact "num_coeffs ; den_coeffs" ascending form.
std::map<std::pair<int, int>, GeneratorCombo> load_combo_table(const std::string& path);

}  // namespace meln
