#pragma once

#include <string>
#include <vector>

#include "meln/rational.hpp"

namespace meln {

// Univariate polynomial over Q, coefficients ascending; invariant: empty
// vector is the zero polynomial, otherwise the leading coefficient is nonzero.
class Poly {
  public:
    Poly() = default;
    Poly(const Rat& constant);  // NOLINT: implicit by design
    Poly(long constant) : Poly(Rat(constant)) {}
    explicit Poly(std::vector<Rat> coeffs);

    static Poly variable();              // h
    static Poly monomial(int k, const Rat& coef = Rat(1));

    int deg() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Rat coef(int k) const;               // 0 outside stored range
    const Rat& leading() const;          // requires nonzero

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    Poly scaled(const Rat& s) const;
    Poly shifted(int k) const;           // * h^k, k >= 0
    Poly derivative() const;

    Rat eval(const Rat& x) const;
    double eval(double x) const;

    // Euclidean division a = q*b + r with deg r < deg b; DivisionByZero if b = 0.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    Poly divexact(const Poly& b) const;  // throws DivisionByZero if remainder != 0
    static Poly gcd(Poly a, Poly b);     // monic gcd; gcd(0,0) = 0

    Rat content() const;                 // nonnegative rational content; 0 for zero
    Poly primitive() const;              // integer coefficients, content 1, sign kept
    Poly monic() const;

    // Human form, descending powers: "h^2 + 12*h + 16", rational coefficients.
    std::string to_string(const std::string& var = "h") const;
    // Exact ascending coefficient list "c0 c1 ... ck" (zero poly -> "0").
    std::string coeff_text() const;
    static Poly from_coeff_text(const std::string& text);

  private:
    void trim();
    std::vector<Rat> c_;
};

Poly operator*(const Rat& s, const Poly& p);

}  // namespace meln
