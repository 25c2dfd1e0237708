#include "meln/assembler.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "meln/analytic.hpp"
#include "meln/errors.hpp"

namespace meln {

bool PerturbationSpec::Entry::is_zero() const {
    return a_plus == 0 && a_minus == 0 && b_plus == 0 && b_minus == 0;
}

PerturbationSpec::Entry PerturbationSpec::at(int i, int j) const {
    auto it = coefficients.find({i, j});
    return it == coefficients.end() ? Entry{} : it->second;
}

bool PerturbationSpec::symmetric() const {
    for (const auto& [ij, e] : coefficients)
        if (e.a_plus != e.a_minus || e.b_plus != e.b_minus) return false;
    return true;
}

void PerturbationSpec::validate() const {
    for (const auto& [ij, e] : coefficients) {
        const auto [i, j] = ij;
        if (i < 0 || j < 0 || i + j > n)
            throw UsageError("perturbation coefficient (" + std::to_string(i) + "," +
                             std::to_string(j) + ") outside total degree " + std::to_string(n));
    }
}

RhoTable rho_coefficients(const PerturbationSpec& spec) {
    spec.validate();
    RhoTable rho;
    for (const auto& [ij, e] : spec.coefficients) {
        const auto [i, j] = ij;
        const Rat b = e.b_plus + (j % 2 == 0 ? -e.b_minus : e.b_minus);  // (-1)^(j+1) b_minus
        if (b != 0) rho[{i, j}] += b;
        const Rat a = e.a_plus + (j % 2 == 0 ? e.a_minus : -e.a_minus);  // (-1)^j a_minus
        if (a != 0 && i != 4) rho[{i - 1, j + 1}] += Rat(i - 4, j + 1) * a;
    }
    for (auto it = rho.begin(); it != rho.end();)
        it = (it->second == 0) ? rho.erase(it) : std::next(it);
    return rho;
}

bool MelnikovForm::is_zero() const {
    return alpha.is_zero() && beta.is_zero() && gamma.is_zero() && delta.is_zero();
}

RatFunc MelnikovForm::coefficient(int which) const {
    const Poly* p[4] = {&alpha, &beta, &gamma, &delta};
    if (which < 0 || which > 3) throw UsageError("coefficient index must be 0..3");
    return RatFunc(*p[which], Poly::monomial(power));
}

GeneratorCombo MelnikovForm::combo() const {
    return {coefficient(0), coefficient(1), coefficient(2), coefficient(3)};
}

namespace {

struct FormCaps {
    int power;
    int a, b, g, d;
};

FormCaps form_caps(int n) {
    if (n <= 2) return {0, 0, 1, 1, 0};
    if (n == 3) return {1, 1, 2, 2, 1};
    return {n - 3, n - 3, n - 2, n - 2, n - 3};
}

// Degree of h^cap_power * c; BoundViolation if the denominator is not a pure
// h-power within the cap.
int uncancelled_deg(const RatFunc& c, int cap_power, const char* name) {
    if (c.is_zero()) return -1;
    int k = 0;
    if (!c.denominator_h_power(k) || k > cap_power)
        throw BoundViolation(std::string("displacement coefficient ") + name +
                             " carries a denominator beyond h^" + std::to_string(cap_power));
    return c.num().deg() + (cap_power - k);
}

}  // namespace

MelnikovForm assemble_M(const PerturbationSpec& spec) {
    const RhoTable rho = rho_coefficients(spec);
    GeneratorCombo total;
    for (const auto& [ij, weight] : rho)
        total = total + reduce_combo({ij.first, ij.second}).scaled(RatFunc(weight));

    const FormCaps caps = form_caps(spec.n);
    const RatFunc* cs[4] = {&total.c01, &total.c11, &total.c20, &total.c02};
    const int dcaps[4] = {caps.a, caps.b, caps.g, caps.d};
    static const char* names[4] = {"alpha", "beta", "gamma", "delta"};
    int power = 0;
    for (int k = 0; k < 4; ++k) {
        const int deg = uncancelled_deg(*cs[k], caps.power, names[k]);
        if (deg > dcaps[k])
            throw BoundViolation(std::string("degree of ") + names[k] + " exceeds its cap " +
                                 std::to_string(dcaps[k]) + " at degree " + std::to_string(spec.n));
        int p = 0;
        if (!cs[k]->is_zero()) {
            cs[k]->denominator_h_power(p);
            power = std::max(power, p);
        }
    }
    if (spec.symmetric() && (!total.c20.is_zero() || !total.c02.is_zero()))
        throw BoundViolation("symmetric perturbation produced even-generator terms");

    const RatFunc clear(Poly::monomial(power));
    MelnikovForm form;
    form.n = spec.n;
    form.power = power;
    Poly* out[4] = {&form.alpha, &form.beta, &form.gamma, &form.delta};
    for (int k = 0; k < 4; ++k) {
        const RatFunc cleared = *cs[k] * clear;
        if (!cleared.is_poly())
            throw BoundViolation("denominator clearing failed");  // unreachable by construction
        *out[k] = cleared.num();
    }
    return form;
}

double eval_M(const MelnikovForm& form, double h, EvalMode mode, double tol) {
    GeneratorValues g = oracle_generators(h, tol);
    if (mode == EvalMode::kClosed) {
        g.I20 = closed_I20(h);
        g.I02 = closed_I02(h);
    }
    const double sum = form.alpha.eval(h) * g.I01 + form.beta.eval(h) * g.I11 +
                       form.gamma.eval(h) * g.I20 + form.delta.eval(h) * g.I02;
    return sum * std::pow(h, static_cast<double>(-form.power));
}

PerturbationSpec random_spec(int n, unsigned long long seed, bool symmetric) {
    if (n < 0) throw UsageError("spec degree must be nonnegative");
    std::mt19937_64 rng(seed);
    auto draw = [&rng]() {
        const long p = static_cast<long>(rng() % 21) - 10;  // -10..10
        const long q = static_cast<long>(rng() % 4) + 1;    // 1..4
        return Rat(p, q);
    };
    PerturbationSpec spec;
    spec.n = n;
    bool top_nonzero = false;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; i + j <= n; ++j) {
            PerturbationSpec::Entry e;
            e.a_plus = draw();
            e.b_plus = draw();
            if (symmetric) {
                e.a_minus = e.a_plus;
                e.b_minus = e.b_plus;
            } else {
                e.a_minus = draw();
                e.b_minus = draw();
            }
            if (!e.is_zero()) {
                spec.coefficients[{i, j}] = e;
                if (i + j == n) top_nonzero = true;
            }
        }
    }
    if (!top_nonzero) {
        PerturbationSpec::Entry e = spec.at(n, 0);
        e.b_plus = Rat(1);
        if (symmetric) e.b_minus = Rat(1);
        spec.coefficients[{n, 0}] = e;
    }
    return spec;
}

namespace {

Rat rat_from_json(const nlohmann::json& v, const std::string& field) {
    if (v.is_string()) return rat_from_string(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long>());
    throw ParseError("field " + field + " must be an exact fraction string");
}

}  // namespace

PerturbationSpec spec_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n"))
        throw ParseError("spec document must be an object with field n");
    PerturbationSpec spec;
    spec.n = doc.at("n").get<int>();
    for (const auto& rec : doc.value("coefficients", nlohmann::json::array())) {
        PerturbationSpec::Entry e;
        const int i = rec.at("i").get<int>();
        const int j = rec.at("j").get<int>();
        if (rec.contains("a_plus")) e.a_plus = rat_from_json(rec.at("a_plus"), "a_plus");
        if (rec.contains("a_minus")) e.a_minus = rat_from_json(rec.at("a_minus"), "a_minus");
        if (rec.contains("b_plus")) e.b_plus = rat_from_json(rec.at("b_plus"), "b_plus");
        if (rec.contains("b_minus")) e.b_minus = rat_from_json(rec.at("b_minus"), "b_minus");
        if (!e.is_zero()) spec.coefficients[{i, j}] = e;
    }
    spec.validate();
    return spec;
}

PerturbationSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open spec file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return spec_from_json_text(buf.str());
}

std::string spec_to_json(const PerturbationSpec& spec) {
    nlohmann::ordered_json doc;
    doc["n"] = spec.n;
    auto records = nlohmann::ordered_json::array();
    for (const auto& [ij, e] : spec.coefficients) {
        nlohmann::ordered_json rec;
        rec["i"] = ij.first;
        rec["j"] = ij.second;
        rec["a_plus"] = rat_to_string(e.a_plus);
        rec["a_minus"] = rat_to_string(e.a_minus);
        rec["b_plus"] = rat_to_string(e.b_plus);
        rec["b_minus"] = rat_to_string(e.b_minus);
        records.push_back(rec);
    }
    doc["coefficients"] = records;
    return doc.dump(2);
}

}  // namespace meln
