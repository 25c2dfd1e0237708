#pragma once

#include <string>

#include "meln/poly.hpp"

namespace meln {

// Rational function over Q(h), always canonical: numerator and denominator
// coprime, denominator monic and nonzero; zero is 0/1.
class RatFunc {
  public:
    RatFunc() : num_(), den_(Rat(1)) {}
    RatFunc(const Rat& constant) : num_(constant), den_(Rat(1)) {}  // NOLINT
    RatFunc(long constant) : RatFunc(Rat(constant)) {}              // NOLINT
    RatFunc(Poly num) : num_(std::move(num)), den_(Rat(1)) {}       // NOLINT
    RatFunc(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.deg() == 0; }

    RatFunc operator-() const;
    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;  // DivisionByZero if o = 0
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

    RatFunc derivative() const;

    Rat eval(const Rat& h) const;    // DivisionByZero at a pole
    double eval(double h) const;

    // If the denominator is c*h^p (the shape every generator coefficient has),
    // returns p and sets scale = 1/c so that *this = scale * num / h^p.
    bool denominator_h_power(int& p) const;

    // Canonical text "(num)/(den)", numerator/denominator in human form; "(num)"
    // when the denominator is 1.
    std::string to_string(const std::string& var = "h") const;
    // Integer-normalized display, e.g. "-(h^2 + 12*h + 16)/(5*h^5)".
    std::string display(const std::string& var = "h") const;
    // Exact golden-file format "n0 n1 ... ; d0 d1 ..." (ascending coefficients).
    std::string coeff_text() const;
    static RatFunc from_coeff_text(const std::string& text);

  private:
    void canonicalize();
    Poly num_, den_;
};

RatFunc operator*(const Rat& s, const RatFunc& f);

}  // namespace meln
