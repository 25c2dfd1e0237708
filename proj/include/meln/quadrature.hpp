#pragma once

#include <functional>

namespace meln {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Integrand for tanh-sinh nodes: f(x, dl, dr) with dl = x - a and dr = b - x
// supplied in a form that stays accurate (and positive) arbitrarily close to
// the endpoints, so integrable endpoint singularities can be evaluated safely.
using EndpointAwareFn = std::function<double(double x, double dl, double dr)>;

// Double-exponential (tanh-sinh) quadrature on (a, b). Converges when the
// level-to-level difference falls below tol * max(1, |I|); nodes whose
// endpoint distance underflows to zero are skipped.
QuadratureResult tanh_sinh(const EndpointAwareFn& f, double a, double b, double tol,
                           int max_level = 12);

// Classic adaptive Simpson on [a, b]; independent of the tanh-sinh route.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth = 48);

}  // namespace meln
