#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "meln/assembler.hpp"
#include "meln/oracle.hpp"

using namespace meln;
using doctest::Approx;

TEST_CASE("weight table: upper-arc constant forcing") {
    PerturbationSpec spec;
    spec.n = 0;
    spec.coefficients[{0, 0}].b_plus = Rat(1);
    const RhoTable rho = rho_coefficients(spec);
    REQUIRE(rho.size() == 1);
    CHECK(rho.at({0, 0}) == Rat(1));
}

TEST_CASE("weight table: signs and the integrated-by-parts shift") {
    PerturbationSpec spec;
    spec.n = 3;
    auto& e01 = spec.coefficients[{0, 1}];  // g-term, odd j: plus and minus add
    e01.b_plus = Rat(2);
    e01.b_minus = Rat(3);
    auto& e00 = spec.coefficients[{0, 0}];  // f-term lands on (-1, 1) with weight -4
    e00.a_plus = Rat(1, 2);
    e00.a_minus = Rat(1, 2);
    auto& e30 = spec.coefficients[{3, 0}];  // f-term lands on (2, 1) with weight -1
    e30.a_plus = Rat(1);
    const RhoTable rho = rho_coefficients(spec);
    CHECK(rho.at({0, 1}) == Rat(5));        // 2 + (-1)^(1+1) * 3
    CHECK(rho.at({-1, 1}) == Rat(-4));      // (0-4)/(0+1) * (1/2 + 1/2)
    CHECK(rho.at({2, 1}) == Rat(-1));       // (3-4)/(0+1) * 1
}

TEST_CASE("weight table: the x^4 forcing column is annihilated") {
    PerturbationSpec spec;
    spec.n = 4;
    spec.coefficients[{4, 0}].a_plus = Rat(7);
    spec.coefficients[{4, 0}].a_minus = Rat(7);
    const RhoTable rho = rho_coefficients(spec);
    for (const auto& [key, val] : rho) CHECK(val == Rat(0));
}

TEST_CASE("assembled form of the upper-arc constant forcing") {
    PerturbationSpec spec;
    spec.n = 0;
    spec.coefficients[{0, 0}].b_plus = Rat(1);
    const MelnikovForm form = assemble_M(spec);
    const Poly h = Poly::variable();
    CHECK(form.power == 0);
    CHECK(form.alpha.is_zero());
    CHECK(form.beta.is_zero());
    CHECK(form.delta.is_zero());
    CHECK(form.gamma == Rat(1, 3) * (h + Poly(4)));
    CHECK(eval_M(form, -0.75, EvalMode::kClosed) == Approx(13.0 / 12.0).epsilon(1e-14));
    CHECK(eval_M(form, -0.75, EvalMode::kOracle) == Approx(13.0 / 12.0).epsilon(1e-9));
}

TEST_CASE("symmetric specs drop the even generators exactly") {
    for (int n : {2, 4, 7}) {
        const PerturbationSpec spec = random_spec(n, 42 + n, /*symmetric=*/true);
        CHECK(spec.symmetric());
        const MelnikovForm form = assemble_M(spec);
        CHECK(form.gamma.is_zero());
        CHECK(form.delta.is_zero());
    }
}

TEST_CASE("degree and power caps on random forms") {
    for (int n = 2; n <= 9; ++n) {
        const PerturbationSpec spec = random_spec(n, 900 + n, /*symmetric=*/false);
        const MelnikovForm form = assemble_M(spec);
        CHECK(form.n == n);
        const int pcap = (n <= 2) ? 0 : (n == 3 ? 1 : n - 3);
        CHECK(form.power >= 0);
        CHECK(form.power <= pcap);
        const int da = (n <= 2) ? 0 : (n == 3 ? 1 : n - 3);
        const int db = (n <= 2) ? 1 : (n == 3 ? 2 : n - 2);
        CHECK(form.alpha.deg() <= da);
        CHECK(form.beta.deg() <= db);
        CHECK(form.gamma.deg() <= db);
        CHECK(form.delta.deg() <= da);
    }
}

TEST_CASE("spec validation") {
    PerturbationSpec bad;
    bad.n = 1;
    bad.coefficients[{2, 1}].b_plus = Rat(1);
    CHECK_THROWS_AS(bad.validate(), UsageError);
    CHECK_THROWS_AS(assemble_M(bad), UsageError);
    PerturbationSpec neg;
    neg.n = 2;
    neg.coefficients[{-1, 0}].b_plus = Rat(1);
    CHECK_THROWS_AS(neg.validate(), UsageError);
}

TEST_CASE("random specs are reproducible, honest in degree, and vary by seed") {
    const PerturbationSpec a = random_spec(5, 123, false);
    const PerturbationSpec b = random_spec(5, 123, false);
    const PerturbationSpec c = random_spec(5, 124, false);
    CHECK(spec_to_json(a) == spec_to_json(b));
    CHECK(spec_to_json(a) != spec_to_json(c));
    bool top_nonzero = false;
    for (const auto& [key, e] : a.coefficients)
        if (key.first + key.second == 5 && !e.is_zero()) top_nonzero = true;
    CHECK(top_nonzero);
    CHECK(random_spec(4, 7, true).symmetric());
}

TEST_CASE("JSON round trip and file loading") {
    const PerturbationSpec spec = random_spec(3, 77, false);
    const std::string text = spec_to_json(spec);
    const PerturbationSpec back = spec_from_json_text(text);
    CHECK(spec_to_json(back) == text);

    const std::string path = "meln_test_spec_tmp.json";
    {
        std::ofstream out(path);
        out << text;
    }
    const PerturbationSpec loaded = load_spec(path);
    CHECK(spec_to_json(loaded) == text);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_spec("definitely_missing_file.json"), UsageError);
    CHECK_THROWS_AS(spec_from_json_text("{ not json"), ParseError);
}

TEST_CASE("assembled form agrees with the literal displacement integral") {
    for (unsigned long long seed : {5ull, 6ull, 7ull}) {
        const int n = 2 + static_cast<int>(seed % 3);
        const PerturbationSpec spec = random_spec(n, seed, seed == 6ull);
        const MelnikovForm form = assemble_M(spec);
        for (double h : {-0.7, -0.3}) {
            const double lit = direct_M(spec, h);
            const double asm_val = eval_M(form, h, EvalMode::kOracle);
            const double scale = std::max({1.0, std::fabs(lit), std::fabs(asm_val)});
            CHECK(std::fabs(lit - asm_val) / scale < 1e-6);
        }
    }
}
