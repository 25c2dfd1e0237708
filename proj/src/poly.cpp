#include "meln/poly.hpp"

#include <sstream>

namespace meln {

Poly::Poly(const Rat& constant) {
    if (constant != 0) c_.push_back(constant);
}

Poly::Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::variable() { return monomial(1); }

Poly Poly::monomial(int k, const Rat& coef) {
    if (coef == 0) return {};
    std::vector<Rat> c(static_cast<size_t>(k) + 1, Rat(0));
    c.back() = coef;
    return Poly(std::move(c));
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rat Poly::coef(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return Rat(0);
    return c_[static_cast<size_t>(k)];
}

const Rat& Poly::leading() const {
    if (is_zero()) throw DivisionByZero("leading coefficient of zero polynomial");
    return c_.back();
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rat> c(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t k = 0; k < c.size(); ++k) {
        if (k < c_.size()) c[k] += c_[k];
        if (k < o.c_.size()) c[k] += o.c_[k];
    }
    return Poly(std::move(c));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<Rat> c(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t a = 0; a < c_.size(); ++a)
        for (size_t b = 0; b < o.c_.size(); ++b) c[a + b] += c_[a] * o.c_[b];
    return Poly(std::move(c));
}

Poly Poly::scaled(const Rat& s) const {
    if (s == 0) return {};
    Poly r = *this;
    for (auto& c : r.c_) c *= s;
    return r;
}

Poly Poly::shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    std::vector<Rat> c(static_cast<size_t>(k), Rat(0));
    c.insert(c.end(), c_.begin(), c_.end());
    return Poly(std::move(c));
}

Poly Poly::derivative() const {
    if (deg() < 1) return {};
    std::vector<Rat> c(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) c[k - 1] = Rat(static_cast<long>(k)) * c_[k];
    return Poly(std::move(c));
}

Rat Poly::eval(const Rat& x) const {
    Rat v(0);
    for (size_t k = c_.size(); k-- > 0;) v = v * x + c_[k];
    return v;
}

double Poly::eval(double x) const {
    double v = 0;
    for (size_t k = c_.size(); k-- > 0;) v = v * x + c_[k].get_d();
    return v;
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    q = Poly();
    r = a;
    const Rat& lb = b.leading();
    while (!r.is_zero() && r.deg() >= b.deg()) {
        int k = r.deg() - b.deg();
        Rat c = r.leading() / lb;
        q += Poly::monomial(k, c);
        r -= b.shifted(k).scaled(c);
    }
}

Poly Poly::divexact(const Poly& b) const {
    Poly q, r;
    divmod(*this, b, q, r);
    if (!r.is_zero()) throw DivisionByZero("inexact polynomial division");
    return q;
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
}

Rat Poly::content() const {
    Rat g(0);
    for (const auto& c : c_) g = rat_gcd(g, c);
    return g;
}

Poly Poly::primitive() const {
    if (is_zero()) return {};
    return scaled(Rat(1) / content());
}

Poly Poly::monic() const {
    if (is_zero()) return {};
    return scaled(Rat(1) / leading());
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = deg(); k >= 0; --k) {
        Rat c = coef(k);
        if (c == 0) continue;
        bool first = out.empty();
        if (!first) out += (c > 0) ? " + " : " - ";
        else if (c < 0) out += "-";
        Rat m = abs(c);
        bool unit = (m == 1);
        if (k == 0) {
            out += rat_to_string(m);
        } else {
            if (!unit) out += rat_to_string(m) + "*";
            out += var;
            if (k > 1) out += "^" + std::to_string(k);
        }
    }
    return out;
}

std::string Poly::coeff_text() const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = 0; k <= deg(); ++k) {
        if (k) out += " ";
        out += rat_to_string(coef(k));
    }
    return out;
}

Poly Poly::from_coeff_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<Rat> c;
    std::string tok;
    while (in >> tok) c.push_back(rat_from_string(tok));
    if (c.empty()) throw ParseError("empty polynomial coefficient list");
    return Poly(std::move(c));
}

Poly operator*(const Rat& s, const Poly& p) { return p.scaled(s); }

}  // namespace meln
