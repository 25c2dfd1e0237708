#include "meln/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "meln/analytic.hpp"
#include "meln/assembler.hpp"
#include "meln/errors.hpp"
#include "meln/reduction.hpp"
#include "meln/report.hpp"

#ifndef MELN_GOLDEN_DIR
#define MELN_GOLDEN_DIR "tests/golden"
#endif

namespace meln {

namespace {

using nlohmann::ordered_json;

std::string g_golden_dir = MELN_GOLDEN_DIR;  // NOLINT: process-wide, single-threaded tool

struct CheckList {
    ordered_json checks = ordered_json::array();
    bool all = true;

    void add(const std::string& name, bool pass) {
        ordered_json c;
        c["name"] = name;
        c["pass"] = pass;
        checks.push_back(std::move(c));
        all = all && pass;
    }
    void add(const std::string& name, bool pass, const ordered_json& detail) {
        ordered_json c;
        c["name"] = name;
        c["pass"] = pass;
        c["detail"] = detail;
        checks.push_back(std::move(c));
        all = all && pass;
    }
    ordered_json done(const std::string& suite) const {
        ordered_json doc;
        doc["suite"] = suite;
        doc["pass"] = all;
        doc["checks"] = checks;
        return doc;
    }
};

// Memoized pure-quadrature values, so overlapping recurrence stencils do not
// repeat integrations.
class OracleCache {
  public:
    double I(int i, int j, double h) {
        const auto key = std::make_tuple(i, j, h);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double v = oracle_I({i, j}, h).value;
        cache_.emplace(key, v);
        return v;
    }

  private:
    std::map<std::tuple<int, int, double>, double> cache_;
};

constexpr double kSuiteHs[3] = {-0.9, -0.5, -0.1};
constexpr int kBaseIndices[10][2] = {{-1, 1}, {0, 0}, {-1, 2}, {1, 0}, {-1, 3},
                                     {-1, 4}, {0, 3}, {1, 2},  {2, 1}, {3, 0}};

std::string index_name(int i, int j) {
    return "I(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

ordered_json suite_identities() {
    CheckList cl;
    OracleCache oc;
    // The ten stored identities, as numeric residuals: the reduced combination
    // evaluated on quadrature generator values must match the direct integral.
    for (const auto& row : kBaseIndices) {
        const int i = row[0], j = row[1];
        const GeneratorCombo combo = reduce_combo({i, j});
        double worst = 0.0;
        for (double h : kSuiteHs) {
            const GeneratorValues g = oracle_generators(h);
            const double direct = oc.I(i, j, h);
            const double reduced = combo.eval(h, g);
            const double scale = std::max({std::fabs(direct), std::fabs(reduced), 1e-9});
            worst = std::max(worst, std::fabs(direct - reduced) / scale);
        }
        ordered_json detail;
        detail["max_rel_residual"] = float17(worst);
        cl.add("base identity " + index_name(i, j), worst <= 1e-6, detail);
    }
    // Three-term contiguous relations under pure quadrature, total degree <= 6.
    double worst27 = 0.0, worst28 = 0.0, worst29 = 0.0;
    int n27 = 0, n28 = 0, n29 = 0;
    for (double h : kSuiteHs) {
        for (int i = -1; i <= 7; ++i) {
            for (int j = 0; i + j <= 6; ++j) {
                if (j >= 2) {  // j-descent: (2i+3j-6) I_{i,j} = 4j (I_{i+2,j-2} - I_{i+1,j-2})
                    const double lhs = (2 * i + 3 * j - 6) * oc.I(i, j, h);
                    const double t1 = 4.0 * j * oc.I(i + 2, j - 2, h);
                    const double t2 = 4.0 * j * oc.I(i + 1, j - 2, h);
                    const double scale =
                        std::max({std::fabs(lhs), std::fabs(t1), std::fabs(t2), 1e-9});
                    worst27 = std::max(worst27, std::fabs(lhs - (t1 - t2)) / scale);
                    ++n27;
                }
                if (i >= 2) {  // h-shift: h I_{i,j} = 1/2 I_{i-3,j+2} - 2 I_{i-1,j} + I_{i-2,j}
                    const double lhs = h * oc.I(i, j, h);
                    const double t1 = 0.5 * oc.I(i - 3, j + 2, h);
                    const double t2 = 2.0 * oc.I(i - 1, j, h);
                    const double t3 = oc.I(i - 2, j, h);
                    const double scale = std::max(
                        {std::fabs(lhs), std::fabs(t1), std::fabs(t2), std::fabs(t3), 1e-9});
                    worst28 = std::max(worst28, std::fabs(lhs - (t1 - t2 + t3)) / scale);
                    ++n28;
                }
                if (i >= 1) {  // i-descent: (2i+3j-6) h I_{i,j}
                               //            = (2i+j-10) I_{i-2,j} - 4(i+j-4) I_{i-1,j}
                    const double lhs = (2 * i + 3 * j - 6) * h * oc.I(i, j, h);
                    const double t1 = (2 * i + j - 10) * oc.I(i - 2, j, h);
                    const double t2 = 4.0 * (i + j - 4) * oc.I(i - 1, j, h);
                    const double scale =
                        std::max({std::fabs(lhs), std::fabs(t1), std::fabs(t2), 1e-9});
                    worst29 = std::max(worst29, std::fabs(lhs - (t1 - t2)) / scale);
                    ++n29;
                }
            }
        }
    }
    auto rec_detail = [](int count, double worst) {
        ordered_json d;
        d["stencils"] = count;
        d["max_rel_residual"] = float17(worst);
        return d;
    };
    cl.add("j-descent recurrence", worst27 <= 1e-6, rec_detail(n27, worst27));
    cl.add("h-shift recurrence", worst28 <= 1e-6, rec_detail(n28, worst28));
    cl.add("i-descent recurrence", worst29 <= 1e-6, rec_detail(n29, worst29));
    return cl.done("identities");
}

ordered_json suite_pf() {
    CheckList cl;
    for (int k = 0; k < 10; ++k) {
        const double h = -0.95 + 0.1 * k;
        const PFResidual r = pf_residual(h);
        const double cap = 1e-6 * r.scale;
        const double worst = std::max({std::fabs(r.odd0), std::fabs(r.odd1), std::fabs(r.even0),
                                       std::fabs(r.even1)});
        ordered_json detail;
        detail["h"] = float17(h);
        detail["max_residual"] = float17(worst);
        detail["scale"] = float17(r.scale);
        cl.add("first-order system at h = " + float17(h), worst <= cap, detail);
    }
    return cl.done("pf");
}

ordered_json suite_riccati() {
    CheckList cl;
    for (int k = 0; k < 10; ++k) {
        const double h = -0.95 + 0.1 * k;
        const double r1 = riccati_residual(h, RiccatiRatio::kOmega1);
        const double r2 = riccati_residual(h, RiccatiRatio::kOmega2);
        ordered_json detail;
        detail["omega1_residual"] = float17(r1);
        detail["omega2_residual"] = float17(r2);
        cl.add("ratio equations at h = " + float17(h),
               std::fabs(r1) <= 1e-5 && std::fabs(r2) <= 1e-5, detail);
    }
    return cl.done("riccati");
}

ordered_json suite_table_n8() {
    CheckList cl;
    for (const char* file : {"base_identities.txt", "table_n8.txt"}) {
        const auto table = load_combo_table(g_golden_dir + "/" + std::string(file));
        for (const auto& [ij, combo] : table) {
            const bool same = reduce_combo({ij.first, ij.second}) == combo;
            cl.add(std::string(file) + " " + index_name(ij.first, ij.second), same);
        }
    }
    return cl.done("table-n8");
}

ordered_json suite_degrees() {
    CheckList cl;
    for (int n = 2; n <= 12; ++n) {
        try {
            const DegreeProfile p = degree_profile(n);
            bool all = true;
            for (const DegreeEntry& e : p.entries) all = all && e.ok;
            ordered_json detail;
            detail["indices_checked"] = static_cast<int>(p.entries.size());
            cl.add("degree caps, total degree " + std::to_string(n), all, detail);
        } catch (const Error& e) {
            ordered_json detail;
            detail["error"] = e.what();
            cl.add("degree caps, total degree " + std::to_string(n), false, detail);
        }
    }
    return cl.done("degrees");
}

ordered_json suite_end2end() {
    CheckList cl;
    for (int k = 1; k <= 10; ++k) {
        const int n = 1 + (k % 6);
        const bool symmetric = (k % 2 == 0);
        const PerturbationSpec spec = random_spec(n, 1000 + k, symmetric);
        const MelnikovForm form = assemble_M(spec);
        double worst = 0.0;
        for (double h : kSuiteHs) {
            const double lit = direct_M(spec, h);
            const double red = eval_M(form, h, EvalMode::kOracle);
            const double scale = std::max({std::fabs(lit), std::fabs(red), 1e-9});
            worst = std::max(worst, std::fabs(lit - red) / scale);
        }
        bool pass = worst <= 1e-6;
        ordered_json detail;
        detail["n"] = n;
        detail["symmetric"] = symmetric;
        detail["max_rel_gap"] = float17(worst);
        if (symmetric) {
            const bool even_free = form.gamma.is_zero() && form.delta.is_zero();
            detail["even_part_zero"] = even_free;
            pass = pass && even_free;
        }
        cl.add("spec seed " + std::to_string(1000 + k), pass, detail);
    }
    return cl.done("end2end");
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"identities", "pf",      "riccati",
                                                   "table-n8",   "degrees", "end2end"};
    return names;
}

std::string golden_dir() { return g_golden_dir; }
void set_golden_dir(const std::string& dir) { g_golden_dir = dir; }

nlohmann::ordered_json run_suite(const std::string& name) {
    if (name == "identities") return suite_identities();
    if (name == "pf") return suite_pf();
    if (name == "riccati") return suite_riccati();
    if (name == "table-n8") return suite_table_n8();
    if (name == "degrees") return suite_degrees();
    if (name == "end2end") return suite_end2end();
    throw UsageError("unknown suite '" + name + "'");
}

}  // namespace meln
