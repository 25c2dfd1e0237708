#include "meln/rational.hpp"

#include <cctype>
#include <cmath>

namespace meln {

Rat rat_from_string(const std::string& s) {
    // strict shape check; mpq_set_str is permissive about some junk we reject.
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw ParseError("empty rational literal");
    auto digits = [](const std::string& u) {
        if (u.empty()) return false;
        for (char c : u)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    std::string num = t, den = "1";
    if (auto pos = t.find('/'); pos != std::string::npos) {
        num = t.substr(0, pos);
        den = t.substr(pos + 1);
    }
    std::string num_mag = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? num.substr(1) : num;
    if (!digits(num_mag) || !digits(den)) throw ParseError("malformed rational '" + s + "'");
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0)
        throw ParseError("malformed rational '" + s + "'");
    if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& r) {
    Rat c = r;
    c.canonicalize();  // guard against values built by raw two-argument construction
    std::string s = c.get_num().get_str();
    if (c.get_den() != 1) s += "/" + c.get_den().get_str();
    return s;
}

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw ParseError("non-finite double");
    Rat r;
    mpq_set_d(r.get_mpq_t(), x);
    r.canonicalize();
    return r;
}

Rat rat_pow(const Rat& r, long e) {
    if (e == 0) return Rat(1);
    if (r == 0 && e < 0) throw DivisionByZero("0 raised to negative power");
    Rat base = e > 0 ? r : Rat(1) / r;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rat out(1), acc = base;
    while (n) {
        if (n & 1) out *= acc;
        if (n >>= 1) acc *= acc;
    }
    return out;
}

Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0 && b == 0) return Rat(0);
    mpz_class g, l;
    mpz_gcd(g.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    Rat r(g, l);
    r.canonicalize();
    return r;
}

}  // namespace meln
