#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace meln {

// Named invariant suites shared by the command-line tool and the tests.
// Every suite returns an insertion-ordered JSON document:
//   {"suite": name, "pass": bool, "checks": [{"name": .., "pass": bool, ..}]}
// UsageError for an unknown name.
//   identities  base-identity and recurrence residuals under pure quadrature
//   pf          first-order system residuals for both generator pairs
//   riccati     quadratic-ODE residuals for both generator ratios
//   table-n8    structural equality of the stored reduction tables
//   degrees     denominator/degree caps of every reduction, total degree 2..12
//   end2end     assembled form vs the literal displacement integrand
nlohmann::ordered_json run_suite(const std::string& name);

const std::vector<std::string>& suite_names();

// Directory holding the golden reduction tables (compile-time default is the
// in-tree tests/golden; overridable for relocated installs).
std::string golden_dir();
void set_golden_dir(const std::string& dir);

}  // namespace meln
