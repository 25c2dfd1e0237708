#include "meln/ratfunc.hpp"

#include <cmath>

namespace meln {

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
}

void RatFunc::canonicalize() {
    if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Poly(Rat(1));
        return;
    }
    Poly g = Poly::gcd(num_, den_);
    if (g.deg() > 0) {
        num_ = num_.divexact(g);
        den_ = den_.divexact(g);
    }
    Rat lc = den_.leading();
    if (lc != 1) {
        Rat inv = Rat(1) / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw DivisionByZero("rational function division by zero");
    return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::derivative() const {
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

Rat RatFunc::eval(const Rat& h) const {
    Rat d = den_.eval(h);
    if (d == 0) throw DivisionByZero("rational function evaluated at a pole");
    return num_.eval(h) / d;
}

double RatFunc::eval(double h) const {
    double d = den_.eval(h);
    if (d == 0.0) throw DivisionByZero("rational function evaluated at a pole");
    return num_.eval(h) / d;
}

bool RatFunc::denominator_h_power(int& p) const {
    for (int k = 0; k < den_.deg(); ++k)
        if (den_.coef(k) != 0) return false;
    p = std::max(den_.deg(), 0);
    return true;  // canonical => leading coefficient is 1
}

std::string RatFunc::to_string(const std::string& var) const {
    if (is_poly()) return "(" + num_.to_string(var) + ")";
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

std::string RatFunc::display(const std::string& var) const {
    if (is_zero()) return "0";
    // clear to integer coefficients: scale both parts by the lcm of coefficient
    // denominators, then strip the shared integer content.
    mpz_class lcm = 1;
    auto fold_lcm = [&lcm](const Poly& p) {
        for (int k = 0; k <= p.deg(); ++k) {
            if (p.coef(k) == 0) continue;
            mpz_class d = p.coef(k).get_den();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
        }
    };
    fold_lcm(num_);
    fold_lcm(den_);
    Poly n = num_.scaled(Rat(lcm)), d = den_.scaled(Rat(lcm));
    Rat g = rat_gcd(n.content(), d.content());
    if (g != 0 && g != 1) {
        n = n.scaled(Rat(1) / g);
        d = d.scaled(Rat(1) / g);
    }
    bool neg = n.leading() < 0;
    if (neg) n = -n;
    std::string ns = n.to_string(var);
    if (n.deg() > 0 || neg) ns = "(" + ns + ")";
    std::string out = (neg ? "-" : "") + ns;
    if (d.deg() == 0 && d.coef(0) == 1) return out;
    std::string ds = d.to_string(var);
    return out + "/(" + ds + ")";
}

std::string RatFunc::coeff_text() const {
    return num_.coeff_text() + " ; " + den_.coeff_text();
}

RatFunc RatFunc::from_coeff_text(const std::string& text) {
    auto pos = text.find(';');
    if (pos == std::string::npos) throw ParseError("missing ';' in rational function text");
    Poly n = Poly::from_coeff_text(text.substr(0, pos));
    Poly d = Poly::from_coeff_text(text.substr(pos + 1));
    return RatFunc(std::move(n), std::move(d));
}

RatFunc operator*(const Rat& s, const RatFunc& f) { return RatFunc(s) * f; }

}  // namespace meln
