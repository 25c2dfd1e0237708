#include "meln/reduction.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "meln/errors.hpp"

namespace meln {

GeneratorCombo GeneratorCombo::operator+(const GeneratorCombo& o) const {
    return {c01 + o.c01, c11 + o.c11, c20 + o.c20, c02 + o.c02};
}

GeneratorCombo GeneratorCombo::operator-(const GeneratorCombo& o) const {
    return {c01 - o.c01, c11 - o.c11, c20 - o.c20, c02 - o.c02};
}

GeneratorCombo GeneratorCombo::scaled(const RatFunc& s) const {
    return {c01 * s, c11 * s, c20 * s, c02 * s};
}

double GeneratorCombo::eval(double h, const GeneratorValues& g) const {
    return c01.eval(h) * g.I01 + c11.eval(h) * g.I11 + c20.eval(h) * g.I20 + c02.eval(h) * g.I02;
}

namespace {

enum class Rule { kGen, kBase21, kBase22, kReverse29, kR29, kR27 };

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::kGen: return "GEN";
        case Rule::kBase21: return "BASE(2.1)";
        case Rule::kBase22: return "BASE(2.2)";
        case Rule::kReverse29:
        case Rule::kR29: return "R29";
        case Rule::kR27: return "R27";
    }
    return "?";
}

bool is_generator(int i, int j) {
    return (i == 0 && j == 1) || (i == 1 && j == 1) || (i == 2 && j == 0) || (i == 0 && j == 2);
}

// One term of an explicit base identity: coefficient times a referenced index.
struct IdentityTerm {
    RatFunc coef;
    IntegralIndex target;
};

// The ten small-index identities. Each right side may itself need further
// reduction; recursion resolves the references.
const std::vector<IdentityTerm>* base_identity(int i, int j) {
    static const auto* tables = [] {
        auto* m = new std::map<std::pair<int, int>, std::vector<IdentityTerm>>;
        const Poly h = Poly::variable();
        const RatFunc inv_h(Poly(1), h);  // 1/h
        // First family (constants and polynomials only):
        //   I_{-1,1} = (1/7)(h I_{1,1} + 8 I_{0,1})
        (*m)[{-1, 1}] = {{RatFunc(Rat(8, 7)), {0, 1}}, {RatFunc(Rat(1, 7) * h), {1, 1}}};
        //   I_{0,0} = (1/3)(h I_{2,0} + 4 I_{1,0})
        (*m)[{0, 0}] = {{RatFunc(Rat(1, 3) * h), {2, 0}}, {RatFunc(Rat(4, 3)), {1, 0}}};
        //   I_{-1,2} = (4/3)(h+1) I_{2,0}
        (*m)[{-1, 2}] = {{RatFunc(Rat(4, 3) * (h + Poly(1))), {2, 0}}};
        //   I_{1,0} = I_{2,0}
        (*m)[{1, 0}] = {{RatFunc(1L), {2, 0}}};
        //   I_{-1,3} = 12 (I_{1,1} - I_{0,1})
        (*m)[{-1, 3}] = {{RatFunc(12L), {1, 1}}, {RatFunc(-12L), {0, 1}}};
        // Second family (1/h weights):
        //   I_{-1,4} = 4 (I_{1,2} - I_{0,2})
        (*m)[{-1, 4}] = {{RatFunc(4L), {1, 2}}, {RatFunc(-4L), {0, 2}}};
        //   I_{0,3} = 4 (I_{2,1} - I_{1,1})
        (*m)[{0, 3}] = {{RatFunc(4L), {2, 1}}, {RatFunc(-4L), {1, 1}}};
        //   I_{1,2} = (1/h)(2 I_{0,2} - 3 I_{-1,2})
        (*m)[{1, 2}] = {{Rat(2) * inv_h, {0, 2}}, {Rat(-3) * inv_h, {-1, 2}}};
        //   I_{2,1} = (1/h)(4 I_{1,1} - 5 I_{0,1})
        (*m)[{2, 1}] = {{Rat(4) * inv_h, {1, 1}}, {Rat(-5) * inv_h, {0, 1}}};
        //   I_{3,0} = (1/h)(I_{0,2}/2 - 2 I_{2,0} + I_{1,0})
        (*m)[{3, 0}] = {{Rat(1, 2) * inv_h, {0, 2}},
                        {Rat(-2) * inv_h, {2, 0}},
                        {Rat(1) * inv_h, {1, 0}}};
        return m;
    }();
    auto it = tables->find({i, j});
    return it == tables->end() ? nullptr : &it->second;
}

Rule classify(int i, int j) {
    if (is_generator(i, j)) return Rule::kGen;
    // First identity family: I_{-1,1}, I_{0,0}, I_{-1,2}, I_{1,0}, I_{-1,3}.
    if ((i == -1 && j >= 1 && j <= 3) || (i == 0 && j == 0) || (i == 1 && j == 0))
        return Rule::kBase21;
    // Second identity family: I_{-1,4}, I_{0,3}, I_{1,2}, I_{2,1}, I_{3,0}.
    if (base_identity(i, j)) return Rule::kBase22;
    if (i == -1 && j == 0) return Rule::kReverse29;
    if (i >= 2) return Rule::kR29;
    return Rule::kR27;  // i in {-1,0,1}, j >= 3
}

// Children referenced by the rule at (i,j), in a fixed order.
std::vector<IntegralIndex> rule_children(int i, int j, Rule r) {
    switch (r) {
        case Rule::kGen: return {};
        case Rule::kBase21:
        case Rule::kBase22: {
            std::vector<IntegralIndex> out;
            for (const auto& t : *base_identity(i, j)) out.push_back(t.target);
            return out;
        }
        case Rule::kReverse29: return {{1, 0}, {0, 0}};
        case Rule::kR29: return {{i - 2, j}, {i - 1, j}};
        case Rule::kR27: return {{i + 2, j - 2}, {i + 1, j - 2}};
    }
    return {};
}

}  // namespace

const GeneratorCombo& ReductionEngine::combo(const IntegralIndex& idx) {
    validate_index(idx);
    const int i = idx.i, j = idx.j;
    auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    GeneratorCombo out;
    switch (classify(i, j)) {
        case Rule::kGen:
            out = {RatFunc(static_cast<long>(i == 0 && j == 1)),
                   RatFunc(static_cast<long>(i == 1 && j == 1)),
                   RatFunc(static_cast<long>(i == 2 && j == 0)),
                   RatFunc(static_cast<long>(i == 0 && j == 2))};
            break;
        case Rule::kBase21:
        case Rule::kBase22:
            for (const auto& term : *base_identity(i, j))
                out = out + combo(term.target).scaled(term.coef);
            break;
        case Rule::kReverse29:
            // Rearranging the i-descent recurrence at (1,0):
            //   I_{-1,0} = (h/2) I_{1,0} + (3/2) I_{0,0}
            out = combo({1, 0}).scaled(RatFunc(Rat(1, 2) * Poly::variable())) +
                  combo({0, 0}).scaled(RatFunc(Rat(3, 2)));
            break;
        case Rule::kR29: {
            // (2i+3j-6) h I_{i,j} = (2i+j-10) I_{i-2,j} - 4(i+j-4) I_{i-1,j}
            const Rat lead(2 * i + 3 * j - 6);
            const RatFunc inv(Poly(1), lead * Poly::variable());
            out = (combo({i - 2, j}).scaled(RatFunc(Rat(2 * i + j - 10))) -
                   combo({i - 1, j}).scaled(RatFunc(Rat(4 * (i + j - 4)))))
                      .scaled(inv);
            break;
        }
        case Rule::kR27: {
            // (2i+3j-6) I_{i,j} = 4j (I_{i+2,j-2} - I_{i+1,j-2})
            const RatFunc s(Rat(4 * j, 2 * i + 3 * j - 6));
            out = (combo({i + 2, j - 2}) - combo({i + 1, j - 2})).scaled(s);
            break;
        }
    }
    return memo_.emplace(key, std::move(out)).first->second;
}

ReductionTrace reduction_trace(const IntegralIndex& idx) {
    validate_index(idx);
    // Worklist processed largest-first, with terminals (GEN/BASE) ranked below
    // every rewrite node, so the last processed step is always terminal.
    using Key = std::tuple<int, int, int>;  // (nonterminal flag, j, i)
    auto key_of = [](const IntegralIndex& x) {
        Rule r = classify(x.i, x.j);
        int nonterminal = (r == Rule::kGen || r == Rule::kBase21 || r == Rule::kBase22) ? 0 : 1;
        return Key{nonterminal, x.j, x.i};
    };
    std::set<Key> pending;
    std::set<std::pair<int, int>> seen;
    auto push = [&](const IntegralIndex& x) {
        if (seen.insert({x.i, x.j}).second) pending.insert(key_of(x));
    };
    push(idx);
    ReductionTrace trace;
    while (!pending.empty()) {
        auto it = std::prev(pending.end());
        auto [nt, j, i] = *it;
        pending.erase(it);
        Rule r = classify(i, j);
        trace.steps.push_back({{i, j}, rule_name(r)});
        for (const IntegralIndex& child : rule_children(i, j, r)) push(child);
    }
    return trace;
}

namespace {
ReductionEngine& shared_engine() {
    static ReductionEngine engine;
    return engine;
}
}  // namespace

ReductionResult reduce(const IntegralIndex& idx) {
    return {shared_engine().combo(idx), reduction_trace(idx)};
}

GeneratorCombo reduce_combo(const IntegralIndex& idx) { return shared_engine().combo(idx); }

namespace {

struct DegreeCaps {
    int power;                     // max allowed k in an h^k denominator
    int a, b, g, d;                // caps on un-cancelled degrees; -1 = must vanish
};

DegreeCaps caps_for_total(int m) {
    if (m <= 2) return {0, 1, 1, 1, 1};
    if (m == 3) return {1, 1, 1, 1, 1};
    if (m <= 7) return {m - 3, m - 4, m - 3, m - 3, m - 4};
    return {m - 3, m - 5, m - 4, m - 4, -1};
}

// Degree of h^{caps.power} * c, i.e. the numerator degree before the shared
// h-power is cancelled; -1 for the zero function. Throws BoundViolation when
// the denominator is not a pure h-power or exceeds the cap.
int uncancelled_degree(const RatFunc& c, int power_cap, const IntegralIndex& idx) {
    if (c.is_zero()) return -1;
    int k = 0;
    if (!c.denominator_h_power(k))
        throw BoundViolation("coefficient of (" + std::to_string(idx.i) + "," +
                             std::to_string(idx.j) + ") has a non-h-power denominator");
    if (k > power_cap)
        throw BoundViolation("denominator h^" + std::to_string(k) + " at (" +
                             std::to_string(idx.i) + "," + std::to_string(idx.j) +
                             ") exceeds h^" + std::to_string(power_cap));
    return c.num().deg() + (power_cap - k);
}

}  // namespace

DegreeProfile degree_profile(int n) {
    if (n < 2) throw UsageError("degree_profile requires n >= 2");
    DegreeProfile profile{n, {}};
    for (int m = n - 1; m <= n; ++m) {
        const DegreeCaps caps = caps_for_total(m);
        for (int i = -1; i <= m; ++i) {
            const int j = m - i;
            const IntegralIndex idx{i, j};
            const GeneratorCombo combo = reduce_combo(idx);
            const bool odd = (j % 2) == 1;
            if (odd ? !combo.odd_part_only() : !combo.even_part_only())
                throw BoundViolation("parity violation at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
            DegreeEntry e{idx, 0, -1, -1, -1, -1, true};
            const RatFunc* cs[4] = {&combo.c01, &combo.c11, &combo.c20, &combo.c02};
            int degs[4];
            const int dcaps[4] = {caps.a, caps.b, caps.g, caps.d};
            for (int k = 0; k < 4; ++k) {
                degs[k] = uncancelled_degree(*cs[k], caps.power, idx);
                if (degs[k] > dcaps[k])
                    throw BoundViolation(
                        "degree " + std::to_string(degs[k]) + " over cap " +
                        std::to_string(dcaps[k]) + " in coefficient " + std::to_string(k) +
                        " at (" + std::to_string(i) + "," + std::to_string(j) + ")");
                int p = 0;
                if (!cs[k]->is_zero()) {
                    cs[k]->denominator_h_power(p);
                    e.den_power = std::max(e.den_power, p);
                }
            }
            e.deg01 = degs[0];
            e.deg11 = degs[1];
            e.deg20 = degs[2];
            e.deg02 = degs[3];
            profile.entries.push_back(e);
        }
    }
    return profile;
}

namespace {
std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
}  // namespace

std::map<std::pair<int, int>, GeneratorCombo> load_combo_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open combo table " + path);
    std::map<std::pair<int, int>, GeneratorCombo> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '|')) fields.push_back(trim(field));
        if (fields.size() != 5)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 5 fields");
        std::istringstream head(fields[0]);
        int i = 0, j = 0;
        if (!(head >> i >> j))
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad index field");
        GeneratorCombo combo{RatFunc::from_coeff_text(fields[1]), RatFunc::from_coeff_text(fields[2]),
                             RatFunc::from_coeff_text(fields[3]), RatFunc::from_coeff_text(fields[4])};
        table[{i, j}] = combo;
    }
    return table;
}

}  // namespace meln
