#include "meln/sturm.hpp"

#include <vector>

namespace meln {

namespace {

int sign_variations(const std::vector<Poly>& chain, const Rat& x) {
    int var = 0, prev = 0;
    for (const auto& p : chain) {
        int s = rat_sign(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

}  // namespace

int sturm_count(Poly p, const Rat& a, const Rat& b) {
    if (p.is_zero()) throw IdenticallyZero("root count of the zero polynomial");
    if (!(a < b)) throw UsageError("empty interval for root count");

    // deflate endpoint roots exactly: the count is over the open interval
    Poly at_a(std::vector<Rat>{-a, Rat(1)});
    Poly at_b(std::vector<Rat>{-b, Rat(1)});
    while (!p.is_zero() && p.eval(a) == 0) p = p.divexact(at_a);
    while (!p.is_zero() && p.eval(b) == 0) p = p.divexact(at_b);
    if (p.deg() <= 0) return 0;

    // squarefree part: Sturm's theorem counts distinct roots
    Poly g = Poly::gcd(p, p.derivative());
    if (g.deg() > 0) p = p.divexact(g);
    if (p.deg() <= 0) return 0;

    std::vector<Poly> chain{p, p.derivative()};
    while (!chain.back().is_zero() && chain.back().deg() > 0) {
        Poly q, r;
        Poly::divmod(chain[chain.size() - 2], chain.back(), q, r);
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return sign_variations(chain, a) - sign_variations(chain, b);
}

}  // namespace meln
