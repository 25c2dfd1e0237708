#pragma once

#include <vector>

#include "meln/assembler.hpp"

namespace meln {

// Integration controls. epsilon is the perturbation strength; first-order
// theory is only exercised in |epsilon| <= 0.05.
struct FlowConfig {
    double epsilon = 0.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 2000000;
    double event_tol = 1e-12;
};

void validate_flow_config(const FlowConfig& cfg);

enum class HalfPlane { kUpper, kLower, kOnSwitch };

struct PhaseState {
    double x = 1.0;
    double y = 0.0;
    HalfPlane half = HalfPlane::kOnSwitch;
};

struct TrajectorySample {
    double t = 0.0, x = 0.0, y = 0.0;
};

struct TransitResult {
    PhaseState state;  // on the switching line, |y| <= event_tol
    double time = 0.0;
    long steps = 0;
};

// Integrates the active half's polynomial vector field (embedded Runge-Kutta
// 5(4) pair with dense output) until y crosses 0; the crossing is located on
// the dense output to |y| <= event_tol. A start on the switching line picks
// the half the flow enters (by the sign of dy/dt there). When trajectory is
// given, states are appended at multiples of sample_dt (dense interpolation)
// plus the final crossing. Errors: LeftDomain when x <= 0 is reached,
// StepLimit, NonTransversal when |dy/dt| < 1e-8 at a crossing.
TransitResult flow_until_switch(const PhaseState& start, const PerturbationSpec& spec,
                                const FlowConfig& cfg, std::vector<TrajectorySample>* trajectory = nullptr,
                                double sample_dt = 0.0);

// One full revolution from the section {y = 0, x > 1}, lower half first
// (the flow crosses downward there), then the upper half back to the section.
struct DisplacementSample {
    double x0 = 0.0;           // section point, x0 > 1 + 1e-3
    double h0 = 0.0;           // h_from_section(x0)
    double d = 0.0;            // x_return - x0
    double transit_time = 0.0;  // full revolution time
};

DisplacementSample poincare_displacement(double x0, const PerturbationSpec& spec,
                                         const FlowConfig& cfg);

struct LimitCycle {
    double x0 = 0.0;        // section point of the detected cycle
    double h = 0.0;         // h_from_section(x0)
    double residual = 0.0;  // |d(x0)| at detection
};

// Sweeps the section over an h-uniform grid (mapped through section_from_h),
// brackets significant sign changes of the displacement and bisects each until
// |d| <= 10 * event_tol. Sign changes below the noise floor (both endpoints
// under max(100 * event_tol, 10 * atol)) are not brackets, so an unperturbed
// run returns an empty list.
std::vector<LimitCycle> find_limit_cycles(const PerturbationSpec& spec, const FlowConfig& cfg,
                                          int section_grid, double h_lo = -0.95,
                                          double h_hi = -0.05);

// Time for the unperturbed flow to traverse the upper arc from (xA, 0) to
// (xB, 0) at energy h.
double upper_transit_time(double h, const FlowConfig& cfg);

// Largest |H(x,y) - h0| along one full unperturbed revolution from the
// section point x0, sampled at every accepted step.
double max_energy_drift(double x0, const FlowConfig& cfg);

}  // namespace meln
