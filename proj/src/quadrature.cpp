#include "meln/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace meln {

namespace {

struct TSNode {
    double t;    // tanh((pi/2) sinh u) in [0, 1)
    double om;   // 1 - t, computed without cancellation
    double w;    // (pi/2) cosh(u) / cosh^2((pi/2) sinh u)
};

// Nodes for u >= 0 per level: level 0 holds u = 0, delta, 2*delta, ...;
// level k > 0 holds the new points u = m * 2^-k, m odd.
struct TSTable {
    std::vector<std::vector<TSNode>> levels;
};

const TSTable& ts_table(int max_level) {
    static TSTable table = [] {
        constexpr double u_max = 4.0;
        constexpr int kMax = 14;
        TSTable t;
        t.levels.resize(kMax + 1);
        auto make = [](double u) {
            double v = 0.5 * std::numbers::pi * std::sinh(u);
            double e = std::exp(-2.0 * v);
            double om = 2.0 * e / (1.0 + e);          // 1 - tanh(v)
            double sech = 2.0 * std::exp(-v) / (1.0 + e);  // 1/cosh(v)
            return TSNode{1.0 - om, om, 0.5 * std::numbers::pi * std::cosh(u) * sech * sech};
        };
        for (int k = 0; k <= kMax; ++k) {
            double delta = std::ldexp(1.0, -k);
            if (k == 0) {
                for (double u = 0.0; u <= u_max; u += delta) t.levels[0].push_back(make(u));
            } else {
                for (double u = delta; u <= u_max; u += 2.0 * delta) t.levels[static_cast<size_t>(k)].push_back(make(u));
            }
        }
        return t;
    }();
    (void)max_level;
    return table;
}

}  // namespace

QuadratureResult tanh_sinh(const EndpointAwareFn& f, double a, double b, double tol,
                           int max_level) {
    QuadratureResult res;
    const double r = 0.5 * (b - a);
    if (r <= 0.0) {
        res.converged = true;
        return res;
    }
    const TSTable& table = ts_table(max_level);
    max_level = std::min<int>(max_level, static_cast<int>(table.levels.size()) - 1);

    auto eval_node = [&](const TSNode& n, int side) -> double {
        // side +1: x near b, side -1: x near a; u = 0 handled once by caller
        double near_dist = r * n.om;
        if (near_dist <= 0.0) return 0.0;  // underflow: weight is negligible too
        double far_dist = 2.0 * r - near_dist;
        double x, dl, dr;
        if (side > 0) {
            dr = near_dist;
            dl = far_dist;
            x = b - dr;
        } else {
            dl = near_dist;
            dr = far_dist;
            x = a + dl;
        }
        ++res.evaluations;
        double fv = f(x, dl, dr);
        return std::isfinite(fv) ? n.w * fv : 0.0;
    };

    double sum = 0.0;
    {
        const auto& l0 = table.levels[0];
        sum += eval_node(l0[0], +1) * 0.5;  // u = 0 once; symmetric pair halves
        sum += eval_node(l0[0], -1) * 0.5;
        for (size_t i = 1; i < l0.size(); ++i) {
            sum += eval_node(l0[i], +1);
            sum += eval_node(l0[i], -1);
        }
    }
    double delta = 1.0;
    double integral = sum * delta * r;
    double prev = integral;
    res.error_estimate = std::fabs(integral);

    for (int k = 1; k <= max_level; ++k) {
        delta = std::ldexp(1.0, -k);
        double level_sum = 0.0;
        for (const auto& n : table.levels[static_cast<size_t>(k)]) {
            level_sum += eval_node(n, +1);
            level_sum += eval_node(n, -1);
        }
        integral = 0.5 * prev + delta * r * level_sum;
        double diff = std::fabs(integral - prev);
        res.error_estimate = diff;
        prev = integral;
        if (k >= 3 && diff <= tol * std::max(1.0, std::fabs(integral))) {
            res.converged = true;
            break;
        }
    }
    res.value = integral;
    return res;
}

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth) {
    QuadratureResult res;
    auto eval = [&](double x) {
        ++res.evaluations;
        double v = f(x);
        return std::isfinite(v) ? v : 0.0;
    };
    struct Frame {
        double a, b, fa, fm, fb, whole;
        int depth;
    };
    double m = 0.5 * (a + b);
    double fa = eval(a), fm = eval(m), fb = eval(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    std::vector<Frame> stack{{a, b, fa, fm, fb, whole, 0}};
    double total = 0.0, err_total = 0.0;
    bool ok = true;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        double mid = 0.5 * (fr.a + fr.b);
        double lm = 0.5 * (fr.a + mid), rm = 0.5 * (mid + fr.b);
        double flm = eval(lm), frm = eval(rm);
        double left = (mid - fr.a) / 6.0 * (fr.fa + 4.0 * flm + fr.fm);
        double right = (fr.b - mid) / 6.0 * (fr.fm + 4.0 * frm + fr.fb);
        double err = (left + right - fr.whole) / 15.0;
        double width_frac = (fr.b - fr.a) / (b - a);
        if (std::fabs(err) <= tol * std::max(1.0, std::fabs(left + right)) * width_frac ||
            fr.depth >= max_depth) {
            if (fr.depth >= max_depth) ok = false;
            total += left + right + err;
            err_total += std::fabs(err);
        } else {
            stack.push_back({fr.a, mid, fr.fa, flm, fr.fm, left, fr.depth + 1});
            stack.push_back({mid, fr.b, fr.fm, frm, fr.fb, right, fr.depth + 1});
        }
    }
    res.value = total;
    res.error_estimate = err_total;
    res.converged = ok;
    return res;
}

}  // namespace meln
