#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace dfcnoma::numerics {

/// Tolerances for integrate_adaptive(). Defaults are tight enough that
/// quadrature error never shows up next to Monte Carlo noise.
struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;

    /// Throws std::invalid_argument if a field is out of range.
    void validate() const;
};

/// Thrown when adaptive subdivision runs out of budget before meeting the
/// requested tolerance. Carries the best available estimate.
class ToleranceNotMet : public std::runtime_error {
public:
    ToleranceNotMet(double estimate, double error_bound);

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Exponential integral Ei(x) = -E1(-x) for x < 0.
///
/// Uses the convergent power series for |x| <= 6 and a continued fraction
/// for E1 beyond. Throws std::domain_error for x >= 0 or non-finite x.
double exp_integral_ei(double x);

/// e^{-x} Ei(x) for x < 0, computed without overflowing e^{-x}.
///
/// This is the combination e^{y} Ei(-y) (y = -x) that appears in every
/// closed-form ergodic capacity; it tends to 1/x as x -> -inf.
double scaled_exp_integral_ei(double x);

inline constexpr double kSeriesCutoff = 6.0;

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature.
///
/// `upper` may be +infinity; the half-line is mapped onto [0, 1) with
/// x = lower + t / (1 - t) before subdivision. The integrand is evaluated at
/// interior nodes only, so one-sided endpoint limits are fine.
double integrate_adaptive(const Integrand& f, double lower, double upper,
                          const QuadratureSpec& spec = {});

}  // namespace dfcnoma::numerics
