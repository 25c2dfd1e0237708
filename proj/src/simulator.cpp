#include "meln/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "meln/errors.hpp"
#include "meln/geometry.hpp"

namespace meln {

namespace {

// Dense double-coefficient table of one perturbation polynomial.
struct DensePoly {
    int n = 0;
    std::vector<double> c;  // (n+1)^2 row-major, index i*(n+1)+j for x^i y^j

    double eval(double x, double y) const {
        double acc = 0.0;
        for (int i = n; i >= 0; --i) {
            double row = 0.0;
            for (int j = n; j >= 0; --j) row = row * y + c[static_cast<size_t>(i) * (n + 1) + j];
            acc = acc * x + row;
        }
        return acc;
    }
};

struct HalfField {
    DensePoly f, g;
};

struct Fields {
    HalfField upper, lower;
};

Fields build_fields(const PerturbationSpec& spec) {
    spec.validate();
    Fields fl;
    const int n = std::max(spec.n, 0);
    for (DensePoly* p : {&fl.upper.f, &fl.upper.g, &fl.lower.f, &fl.lower.g}) {
        p->n = n;
        p->c.assign(static_cast<size_t>(n + 1) * (n + 1), 0.0);
    }
    for (const auto& [ij, e] : spec.coefficients) {
        const auto [i, j] = ij;
        const size_t at = static_cast<size_t>(i) * (n + 1) + j;
        fl.upper.f.c[at] = to_double(e.a_plus);
        fl.upper.g.c[at] = to_double(e.b_plus);
        fl.lower.f.c[at] = to_double(e.a_minus);
        fl.lower.g.c[at] = to_double(e.b_minus);
    }
    return fl;
}

struct Deriv {
    double dx, dy;
};

Deriv rhs(double x, double y, const HalfField& hf, double eps) {
    return {x * y + eps * hf.f.eval(x, y),
            1.5 * y * y - 2.0 * x * x + 2.0 * x + eps * hf.g.eval(x, y)};
}

// Dormand-Prince 5(4) coefficients, with the quartic dense-output weights.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
constexpr double kD1 = -12715105075.0 / 11282082432.0, kD3 = 87487479700.0 / 32700410799.0,
                 kD4 = -10690763975.0 / 1880347072.0, kD5 = 701980252875.0 / 199316789632.0,
                 kD6 = -1453857185.0 / 822651844.0, kD7 = 69997945.0 / 29380423.0;

struct DenseStep {
    double t0 = 0.0, dt = 0.0;
    double rcont[5][2] = {};

    void eval(double theta, double out[2]) const {
        const double th1 = 1.0 - theta;
        for (int c = 0; c < 2; ++c)
            out[c] = rcont[0][c] +
                     theta * (rcont[1][c] +
                              th1 * (rcont[2][c] + theta * (rcont[3][c] + th1 * rcont[4][c])));
    }
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

HalfPlane pick_half(double x, const Fields& fields, double eps) {
    const double dy_up = rhs(x, 0.0, fields.upper, eps).dy;
    const double dy_lo = rhs(x, 0.0, fields.lower, eps).dy;
    if (dy_up > 1e-8) return HalfPlane::kUpper;
    if (dy_lo < -1e-8) return HalfPlane::kLower;
    throw NonTransversal("flow does not leave the switching line at x = " + std::to_string(x));
}

TransitResult transit(const PhaseState& start, const Fields& fields, const FlowConfig& cfg,
                      std::vector<TrajectorySample>* trajectory, double sample_dt) {
    if (!(start.x > 0.0)) throw LeftDomain("start has x <= 0");
    HalfPlane active = start.half;
    if (active == HalfPlane::kOnSwitch) {
        active = (std::fabs(start.y) > cfg.event_tol) ? (start.y > 0 ? HalfPlane::kUpper
                                                                     : HalfPlane::kLower)
                                                      : pick_half(start.x, fields, cfg.epsilon);
    } else {
        const double inward = (active == HalfPlane::kUpper) ? start.y : -start.y;
        if (inward < -cfg.event_tol)
            throw UsageError("state's half-plane tag contradicts the sign of y");
    }
    const HalfField& hf = (active == HalfPlane::kUpper) ? fields.upper : fields.lower;
    const int half_sign = (active == HalfPlane::kUpper) ? 1 : -1;
    if (std::fabs(start.y) <= cfg.event_tol) {
        // Directional start on the line: the chosen half's field must actually
        // carry the state into that half.
        const double dy0 = rhs(start.x, 0.0, hf, cfg.epsilon).dy;
        if (sign_of(dy0) != half_sign)
            throw NonTransversal("flow does not enter the requested half-plane at x = " +
                                 std::to_string(start.x));
    }
    const double arm_threshold = std::max(100.0 * cfg.event_tol, 1e-10);

    double t = 0.0;
    double u[2] = {start.x, start.y};
    bool armed = std::fabs(u[1]) > arm_threshold;
    Deriv k1 = rhs(u[0], u[1], hf, cfg.epsilon);
    double dt = 1e-4;
    long steps = 0;
    double next_sample = sample_dt;
    if (trajectory) trajectory->push_back({0.0, u[0], u[1]});

    while (true) {
        if (++steps > cfg.max_steps)
            throw StepLimit("no switching-line crossing within " + std::to_string(cfg.max_steps) +
                            " steps");
        if (dt < 1e-14) throw StepLimit("step size underflow while locating the crossing");
        dt = std::min(dt, 0.5);

        const double e = cfg.epsilon;
        double us[2];
        us[0] = u[0] + dt * kA21 * k1.dx;
        us[1] = u[1] + dt * kA21 * k1.dy;
        const Deriv k2 = rhs(us[0], us[1], hf, e);
        us[0] = u[0] + dt * (kA31 * k1.dx + kA32 * k2.dx);
        us[1] = u[1] + dt * (kA31 * k1.dy + kA32 * k2.dy);
        const Deriv k3 = rhs(us[0], us[1], hf, e);
        us[0] = u[0] + dt * (kA41 * k1.dx + kA42 * k2.dx + kA43 * k3.dx);
        us[1] = u[1] + dt * (kA41 * k1.dy + kA42 * k2.dy + kA43 * k3.dy);
        const Deriv k4 = rhs(us[0], us[1], hf, e);
        us[0] = u[0] + dt * (kA51 * k1.dx + kA52 * k2.dx + kA53 * k3.dx + kA54 * k4.dx);
        us[1] = u[1] + dt * (kA51 * k1.dy + kA52 * k2.dy + kA53 * k3.dy + kA54 * k4.dy);
        const Deriv k5 = rhs(us[0], us[1], hf, e);
        us[0] = u[0] + dt * (kA61 * k1.dx + kA62 * k2.dx + kA63 * k3.dx + kA64 * k4.dx + kA65 * k5.dx);
        us[1] = u[1] + dt * (kA61 * k1.dy + kA62 * k2.dy + kA63 * k3.dy + kA64 * k4.dy + kA65 * k5.dy);
        const Deriv k6 = rhs(us[0], us[1], hf, e);
        double unew[2];
        unew[0] = u[0] + dt * (kB1 * k1.dx + kB3 * k3.dx + kB4 * k4.dx + kB5 * k5.dx + kB6 * k6.dx);
        unew[1] = u[1] + dt * (kB1 * k1.dy + kB3 * k3.dy + kB4 * k4.dy + kB5 * k5.dy + kB6 * k6.dy);
        const Deriv k7 = rhs(unew[0], unew[1], hf, e);
        const double err[2] = {
            dt * (kE1 * k1.dx + kE3 * k3.dx + kE4 * k4.dx + kE5 * k5.dx + kE6 * k6.dx + kE7 * k7.dx),
            dt * (kE1 * k1.dy + kE3 * k3.dy + kE4 * k4.dy + kE5 * k5.dy + kE6 * k6.dy + kE7 * k7.dy)};
        double acc = 0.0;
        for (int c = 0; c < 2; ++c) {
            const double sc = cfg.atol + cfg.rtol * std::max(std::fabs(u[c]), std::fabs(unew[c]));
            acc += (err[c] / sc) * (err[c] / sc);
        }
        const double err_norm = std::sqrt(0.5 * acc);
        const double fac =
            (err_norm == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        if (err_norm > 1.0) {
            dt *= std::min(fac, 1.0);
            continue;
        }

        DenseStep ds;
        ds.t0 = t;
        ds.dt = dt;
        const double kk1[2] = {k1.dx, k1.dy}, kk7[2] = {k7.dx, k7.dy};
        const double dd[2] = {dt * (kD1 * k1.dx + kD3 * k3.dx + kD4 * k4.dx + kD5 * k5.dx +
                                    kD6 * k6.dx + kD7 * k7.dx),
                              dt * (kD1 * k1.dy + kD3 * k3.dy + kD4 * k4.dy + kD5 * k5.dy +
                                    kD6 * k6.dy + kD7 * k7.dy)};
        for (int c = 0; c < 2; ++c) {
            const double ydiff = unew[c] - u[c];
            const double bspl = dt * kk1[c] - ydiff;
            ds.rcont[0][c] = u[c];
            ds.rcont[1][c] = ydiff;
            ds.rcont[2][c] = bspl;
            ds.rcont[3][c] = ydiff - dt * kk7[c] - bspl;
            ds.rcont[4][c] = dd[c];
        }

        const bool crossed =
            armed && (sign_of(unew[1]) != half_sign || std::fabs(unew[1]) <= cfg.event_tol);
        if (crossed) {
            double lo = 0.0, hi = 1.0, best_theta = 1.0, best_abs = std::fabs(unew[1]);
            double pt[2];
            for (int it = 0; it < 200 && best_abs > cfg.event_tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                ds.eval(mid, pt);
                const double ay = std::fabs(pt[1]);
                if (ay < best_abs) {
                    best_abs = ay;
                    best_theta = mid;
                }
                if (ay <= cfg.event_tol) break;
                if (sign_of(pt[1]) == half_sign)
                    lo = mid;
                else
                    hi = mid;
            }
            ds.eval(best_theta, pt);
            if (std::fabs(pt[1]) > cfg.event_tol)
                throw NonTransversal("crossing could not be located to the event tolerance");
            const double t_cross = t + best_theta * dt;
            if (pt[0] <= 0.0) throw LeftDomain("trajectory reached x <= 0");
            const Deriv at_cross = rhs(pt[0], pt[1], hf, e);
            if (std::fabs(at_cross.dy) < 1e-8)
                throw NonTransversal("|dy/dt| below 1e-8 at the located crossing");
            if (trajectory) {
                if (sample_dt > 0.0) {
                    double interp[2];
                    while (next_sample < t_cross) {
                        ds.eval((next_sample - t) / dt, interp);
                        if (next_sample > t) trajectory->push_back({next_sample, interp[0], interp[1]});
                        next_sample += sample_dt;
                    }
                }
                trajectory->push_back({t_cross, pt[0], pt[1]});
            }
            return {{pt[0], pt[1], HalfPlane::kOnSwitch}, t_cross, steps};
        }

        if (unew[0] <= 0.0) throw LeftDomain("trajectory reached x <= 0");
        if (!armed && std::fabs(unew[1]) > arm_threshold) armed = true;
        if (trajectory) {
            if (sample_dt > 0.0) {
                double interp[2];
                while (next_sample <= t + dt) {
                    ds.eval((next_sample - t) / dt, interp);
                    if (next_sample > t) trajectory->push_back({next_sample, interp[0], interp[1]});
                    next_sample += sample_dt;
                }
            } else {
                trajectory->push_back({t + dt, unew[0], unew[1]});
            }
        }
        t += dt;
        u[0] = unew[0];
        u[1] = unew[1];
        k1 = k7;
        dt *= fac;
    }
}

}  // namespace

void validate_flow_config(const FlowConfig& cfg) {
    if (!(std::fabs(cfg.epsilon) <= 0.05))
        throw UsageError("|epsilon| must be <= 0.05 for first-order validity");
    if (!(cfg.rtol > 0 && cfg.atol > 0 && cfg.event_tol > 0))
        throw UsageError("tolerances must be positive");
    if (cfg.max_steps <= 0) throw UsageError("max_steps must be positive");
}

TransitResult flow_until_switch(const PhaseState& start, const PerturbationSpec& spec,
                                const FlowConfig& cfg, std::vector<TrajectorySample>* trajectory,
                                double sample_dt) {
    validate_flow_config(cfg);
    if (sample_dt < 0) throw UsageError("sample_dt must be nonnegative");
    return transit(start, build_fields(spec), cfg, trajectory, sample_dt);
}

DisplacementSample poincare_displacement(double x0, const PerturbationSpec& spec,
                                         const FlowConfig& cfg) {
    validate_flow_config(cfg);
    if (!(x0 > 1.0 + 1e-3))
        throw UsageError("section point must satisfy x0 > 1 + 1e-3 (transversality guard band)");
    const double h0 = h_from_section(x0);
    if (!(h0 >= kWindowLo && h0 <= kWindowHi))
        throw OutOfAnnulus("section point maps outside the supported energy window");
    const Fields fields = build_fields(spec);
    const TransitResult down = transit({x0, 0.0, HalfPlane::kLower}, fields, cfg, nullptr, 0.0);
    const TransitResult up = transit(down.state, fields, cfg, nullptr, 0.0);
    DisplacementSample s;
    s.x0 = x0;
    s.h0 = h0;
    s.d = up.state.x - x0;
    s.transit_time = down.time + up.time;
    return s;
}

std::vector<LimitCycle> find_limit_cycles(const PerturbationSpec& spec, const FlowConfig& cfg,
                                          int section_grid, double h_lo, double h_hi) {
    validate_flow_config(cfg);
    if (section_grid < 2) throw UsageError("section grid needs at least 2 points");
    if (!(h_lo < h_hi && h_lo > -1.0 && h_hi < 0.0))
        throw UsageError("section window must satisfy -1 < h_lo < h_hi < 0");
    const Fields fields = build_fields(spec);
    auto displacement = [&](double x0) {
        const TransitResult down = transit({x0, 0.0, HalfPlane::kLower}, fields, cfg, nullptr, 0.0);
        const TransitResult up = transit(down.state, fields, cfg, nullptr, 0.0);
        return up.state.x - x0;
    };
    std::vector<double> xs(section_grid), dsamp(section_grid);
    for (int k = 0; k < section_grid; ++k) {
        const double h = h_lo + (h_hi - h_lo) * k / (section_grid - 1);
        xs[k] = section_from_h(h);
        dsamp[k] = displacement(xs[k]);
    }
    // Two-layer noise rejection. A sign-change bracket is pursued only when at
    // least one end clears the significance floor, and the refined point is
    // accepted only when its displacement has dropped two orders below the
    // bracket's own scale (or to the hard floor tied to the event tolerance):
    // integrator noise cannot do that, a transversal fixed point always does.
    const double significance = std::max(100.0 * cfg.event_tol, 10.0 * cfg.atol);
    const double accept_floor = 10.0 * cfg.event_tol;
    std::vector<LimitCycle> cycles;
    for (int k = 0; k + 1 < section_grid; ++k) {
        const int s0 = sign_of(dsamp[k]), s1 = sign_of(dsamp[k + 1]);
        if (s0 == 0 || s1 == 0 || s0 == s1) continue;
        if (std::max(std::fabs(dsamp[k]), std::fabs(dsamp[k + 1])) <= significance) continue;
        const double bracket_scale = std::min(std::fabs(dsamp[k]), std::fabs(dsamp[k + 1]));
        const double accept = std::max(accept_floor, 1e-2 * bracket_scale);
        double lo = xs[k], hi = xs[k + 1];
        double mid = 0.5 * (lo + hi), dmid = displacement(mid);
        while (std::fabs(dmid) > accept_floor && hi - lo > 1e-10 * std::max(1.0, std::fabs(hi))) {
            if (sign_of(dmid) == s0)
                lo = mid;
            else
                hi = mid;
            mid = 0.5 * (lo + hi);
            dmid = displacement(mid);
        }
        if (std::fabs(dmid) <= accept)
            cycles.push_back({mid, h_from_section(mid), std::fabs(dmid)});
    }
    return cycles;
}

double upper_transit_time(double h, const FlowConfig& cfg) {
    validate_flow_config(cfg);
    FlowConfig unperturbed = cfg;
    unperturbed.epsilon = 0.0;
    const LevelEndpoints le = level_endpoints(h);
    PerturbationSpec empty;
    const TransitResult up =
        transit({le.xA, 0.0, HalfPlane::kUpper}, build_fields(empty), unperturbed, nullptr, 0.0);
    return up.time;
}

double max_energy_drift(double x0, const FlowConfig& cfg) {
    validate_flow_config(cfg);
    FlowConfig unperturbed = cfg;
    unperturbed.epsilon = 0.0;
    if (!(x0 > 1.0 + 1e-3)) throw UsageError("section point must satisfy x0 > 1 + 1e-3");
    const double h0 = h_from_section(x0);
    const Fields fields = build_fields(PerturbationSpec{});
    std::vector<TrajectorySample> traj;
    const TransitResult down =
        transit({x0, 0.0, HalfPlane::kLower}, fields, unperturbed, &traj, 0.0);
    const TransitResult up = transit(down.state, fields, unperturbed, &traj, 0.0);
    (void)up;
    double drift = 0.0;
    for (const TrajectorySample& s : traj)
        drift = std::max(drift, std::fabs(energy(s.x, s.y) - h0));
    return drift;
}

}  // namespace meln
