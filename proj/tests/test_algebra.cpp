#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "meln/matrix.hpp"
#include "meln/poly.hpp"
#include "meln/ratfunc.hpp"
#include "meln/rational.hpp"
#include "meln/sturm.hpp"

using namespace meln;

TEST_CASE("rational parse and print round trip") {
    CHECK(rat_from_string("3/4") == Rat(3, 4));
    CHECK(rat_from_string("-3/4") == Rat(-3, 4));
    CHECK(rat_from_string("12") == Rat(12));
    CHECK(rat_to_string(Rat(-6, 8)) == "-3/4");
    CHECK(rat_to_string(Rat(5)) == "5");
    CHECK(rat_from_string(rat_to_string(Rat(22, 7))) == Rat(22, 7));
    CHECK_THROWS_AS(rat_from_string("1/0"), ParseError);
    CHECK_THROWS_AS(rat_from_string("abc"), ParseError);
    CHECK_THROWS_AS(rat_from_string(""), ParseError);
}

TEST_CASE("dyadic rationals from doubles are exact") {
    CHECK(rat_from_double(0.375) == Rat(3, 8));
    CHECK(rat_from_double(-2.5) == Rat(-5, 2));
    CHECK(rat_from_double(0.0) == Rat(0));
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const double x = (static_cast<double>(rng() % 2000001) - 1000000.0) / 1048576.0;
        CHECK(to_double(rat_from_double(x)) == x);
    }
}

TEST_CASE("rational powers and gcd") {
    CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
    CHECK(rat_pow(Rat(5), 0) == Rat(1));
    CHECK(rat_gcd(Rat(4, 3), Rat(2, 9)) == Rat(2, 9));
    CHECK(rat_gcd(Rat(0), Rat(-7, 2)) == Rat(7, 2));
    CHECK(rat_gcd(Rat(0), Rat(0)) == Rat(0));
}

TEST_CASE("polynomial arithmetic and structure") {
    const Poly h = Poly::variable();
    const Poly p = (h + Poly(1)) * (h + Poly(1));
    CHECK(p == Poly(std::vector<Rat>{Rat(1), Rat(2), Rat(1)}));
    CHECK(p.deg() == 2);
    CHECK(p.coef(5) == Rat(0));
    CHECK(p.derivative() == Poly(std::vector<Rat>{Rat(2), Rat(2)}));
    CHECK(p.eval(Rat(-1)) == Rat(0));
    CHECK(Poly::monomial(3, Rat(2, 5)) == Rat(2, 5) * h * h * h);
    CHECK(p.shifted(2) == p * h * h);
    CHECK((p - p).is_zero());
    CHECK((p - p).deg() == -1);
}

TEST_CASE("polynomial division, gcd, content") {
    const Poly h = Poly::variable();
    const Poly a = (h - Poly(1)) * (h + Poly(2)) * (Rat(3, 2) * h + Poly(1));
    const Poly b = h - Poly(1);
    CHECK(a.divexact(b) == (h + Poly(2)) * (Rat(3, 2) * h + Poly(1)));
    CHECK_THROWS_AS(a.divexact(h + Poly(5)), DivisionByZero);

    Poly q, r;
    Poly::divmod(a, h * h + Poly(1), q, r);
    CHECK(q * (h * h + Poly(1)) + r == a);
    CHECK(r.deg() < 2);

    const Poly g = Poly::gcd((h * h - Poly(1)) * Poly(6), (h + Poly(1)) * (h + Poly(3)));
    CHECK(g == h + Poly(1));  // monic
    const Poly c = Poly(std::vector<Rat>{Rat(4, 3), Rat(8, 3), Rat(4)});
    CHECK(c.content() == Rat(4, 3));
    CHECK(c.primitive() == Poly(std::vector<Rat>{Rat(1), Rat(2), Rat(3)}));
}

TEST_CASE("polynomial text round trips") {
    const Poly p = Poly(std::vector<Rat>{Rat(-1, 2), Rat(0), Rat(3)});
    CHECK(Poly::from_coeff_text(p.coeff_text()) == p);
    CHECK(Poly::from_coeff_text("0").is_zero());
    CHECK(p.to_string() == "3*h^2 - 1/2");
}

TEST_CASE("rational functions canonicalize") {
    const Poly h = Poly::variable();
    const RatFunc f(((h * h) - Poly(1)) * Poly(4), (h - Poly(1)) * Poly(6));
    // (4h^2-4)/(6h-6) = (2/3)(h+1); canonical denominator is monic.
    CHECK(f == RatFunc(Rat(2, 3) * (h + Poly(1))));
    CHECK(f.is_poly());
    CHECK_THROWS_AS(RatFunc(h, Poly()), DivisionByZero);
    CHECK_THROWS_AS(RatFunc(h) / RatFunc(), DivisionByZero);
}

TEST_CASE("rational function arithmetic and derivative are exact") {
    const Poly h = Poly::variable();
    const RatFunc f(h + Poly(2), h);             // (h+2)/h
    const RatFunc g(Poly(1), h * h + Poly(1));   // 1/(h^2+1)
    CHECK((f + g) - g == f);
    CHECK(f * g / g == f);
    CHECK((f * g).eval(Rat(2)) == f.eval(Rat(2)) * g.eval(Rat(2)));

    // quotient rule, checked structurally: ((h+2)/h)' = -2/h^2
    CHECK(f.derivative() == RatFunc(Poly(-2), h * h));
    const RatFunc gd = g.derivative();
    CHECK(gd == RatFunc(Rat(-2) * h, (h * h + Poly(1)) * (h * h + Poly(1))));
}

TEST_CASE("rational function display and power-denominator probe") {
    const Poly h = Poly::variable();
    const Poly num = Rat(-1, 5) * (h * h + Rat(12) * h + Poly(16));
    const RatFunc c(num, Poly::monomial(5));
    CHECK(c.display() == "-(h^2 + 12*h + 16)/(5*h^5)");
    int p = -1;
    CHECK(c.denominator_h_power(p));
    CHECK(p == 5);
    const RatFunc plain(h + Poly(1), h + Poly(2));
    CHECK_FALSE(plain.denominator_h_power(p));
    CHECK(RatFunc::from_coeff_text(c.coeff_text()) == c);
}

TEST_CASE("matrix inverse, rank, singularity") {
    QMat m(3, 3);
    const int vals[9] = {2, 1, 0, 1, 3, 1, 0, 1, 2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = Rat(vals[3 * i + j]);
    const QMat inv = m.inverse();
    CHECK(m * inv == QMat::identity(3));
    CHECK(m.rank() == 3);

    QMat s(2, 2);
    s.at(0, 0) = Rat(1);
    s.at(0, 1) = Rat(2);
    s.at(1, 0) = Rat(2);
    s.at(1, 1) = Rat(4);
    CHECK(s.rank() == 1);
    CHECK_THROWS_AS(s.inverse(), SingularMatrix);
}

TEST_CASE("nullspace basis is deterministic and normalized") {
    // rows: x + 2y + 3z = 0, 2x + 4y + 6z = 0  -> rank 1, nullity 2
    QMat a(2, 3);
    a.at(0, 0) = Rat(1);
    a.at(0, 1) = Rat(2);
    a.at(0, 2) = Rat(3);
    a.at(1, 0) = Rat(2);
    a.at(1, 1) = Rat(4);
    a.at(1, 2) = Rat(6);
    const auto basis = a.nullspace();
    REQUIRE(basis.size() == 2);
    for (const auto& v : basis) {
        // a * v = 0 exactly
        for (int i = 0; i < 2; ++i) {
            Rat acc(0);
            for (int j = 0; j < 3; ++j) acc += a.at(i, j) * v[j];
            CHECK(acc == Rat(0));
        }
        // primitive integer vector, first nonzero positive
        Rat first(0);
        Rat content(0);
        for (const Rat& x : v) {
            if (first == 0) first = x;
            content = rat_gcd(content, x);
        }
        CHECK(first > 0);
        CHECK(content == Rat(1));
    }
    CHECK(a.nullspace() == basis);  // repeatable
}

TEST_CASE("sturm counts distinct roots in open intervals") {
    const Poly h = Poly::variable();
    const Poly p = (h - Poly(Rat(1, 4))) * (h + Poly(Rat(1, 2))) * (h - Poly(5));
    CHECK(sturm_count(p, Rat(0), Rat(1)) == 1);
    CHECK(sturm_count(p, Rat(-1), Rat(6)) == 3);
    CHECK(sturm_count(p, Rat(1, 4), Rat(5)) == 0);  // endpoint roots deflated
    const Poly dbl = (h - Poly(Rat(1, 3))) * (h - Poly(Rat(1, 3))) * (h + Poly(2));
    CHECK(sturm_count(dbl, Rat(0), Rat(1)) == 1);  // multiplicity collapses
    CHECK_THROWS_AS(sturm_count(Poly(), Rat(0), Rat(1)), IdenticallyZero);
}

TEST_CASE("sturm agrees with constructed random root sets") {
    std::mt19937_64 rng(11);
    const Poly h = Poly::variable();
    for (int trial = 0; trial < 20; ++trial) {
        Poly p(Rat(1));
        int inside = 0;
        bool seen[41] = {};
        for (int r = 0; r < 4; ++r) {
            const int num = static_cast<int>(rng() % 41) - 20;  // root num/8 in [-2.5, 2.5]
            p *= h - Poly(Rat(num, 8));
            if (!seen[num + 20] && num > -8 && num < 8) ++inside;  // (-1, 1)
            seen[num + 20] = true;
        }
        CHECK(sturm_count(p, Rat(-1), Rat(1)) == inside);
    }
}
