#include "dfcnoma/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace dfcnoma::numerics {

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
    if (!(abs_tol >= 0.0))
        throw std::invalid_argument("QuadratureSpec: abs_tol must be >= 0");
    if (max_subdivisions < 1)
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
}

ToleranceNotMet::ToleranceNotMet(double estimate, double error_bound)
    : std::runtime_error("quadrature tolerance not met: estimate " + std::to_string(estimate) +
                         ", error bound " + std::to_string(error_bound)),
      estimate_(estimate),
      error_bound_(error_bound)
{
}

namespace {

void require_negative_finite(double x)
{
    if (!std::isfinite(x))
        throw std::domain_error("exp_integral_ei: argument must be finite");
    if (!(x < 0.0))
        throw std::domain_error("exp_integral_ei: argument must be negative");
}

// gamma + ln|x| + sum_{k>=1} x^k / (k k!), accumulated in extended precision
// so the alternating terms near |x| = 6 do not cost significant digits.
long double ei_series(long double x)
{
    long double term = 1.0L;
    long double sum = 0.0L;
    for (int k = 1; k < 500; ++k) {
        term *= x / k;
        const long double contrib = term / k;
        sum += contrib;
        if (std::fabs(contrib) <= std::numeric_limits<long double>::epsilon() * std::fabs(sum))
            break;
    }
    return static_cast<long double>(kEulerGamma) + std::log(std::fabs(x)) + sum;
}

// e^{z} E1(z) for z > 0 by modified Lentz on the even continued fraction.
double scaled_e1_continued_fraction(double z)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) <= eps)
            break;
    }
    return h;
}

}  // namespace

double exp_integral_ei(double x)
{
    require_negative_finite(x);
    if (-x <= kSeriesCutoff)
        return static_cast<double>(ei_series(x));
    return -scaled_e1_continued_fraction(-x) * std::exp(x);
}

double scaled_exp_integral_ei(double x)
{
    require_negative_finite(x);
    if (-x <= kSeriesCutoff)
        return static_cast<double>(std::exp(-static_cast<long double>(x)) * ei_series(x));
    return -scaled_e1_continued_fraction(-x);
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
};

template <class F>
Segment gauss_kronrod_15(const F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double kronrod = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1)
            gauss += kGaussWeights[i / 2] * pair;
    }
    return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

template <class F>
double adaptive_on_finite(const F& f, double a, double b, const QuadratureSpec& spec)
{
    std::vector<Segment> segments;
    segments.reserve(static_cast<std::size_t>(spec.max_subdivisions));
    segments.push_back(gauss_kronrod_15(f, a, b));

    for (;;) {
        double total = 0.0;
        double total_error = 0.0;
        for (const auto& s : segments) {
            total += s.value;
            total_error += s.error;
        }
        if (total_error <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)))
            return total;
        if (static_cast<int>(segments.size()) >= spec.max_subdivisions)
            throw ToleranceNotMet(total, total_error);

        auto worst = std::max_element(segments.begin(), segments.end(),
                                      [](const Segment& l, const Segment& r) { return l.error < r.error; });
        const double lo = worst->a;
        const double hi = worst->b;
        const double mid = 0.5 * (lo + hi);
        if (!(lo < mid && mid < hi))
            throw ToleranceNotMet(total, total_error);
        *worst = gauss_kronrod_15(f, lo, mid);
        segments.push_back(gauss_kronrod_15(f, mid, hi));
    }
}

}  // namespace

double integrate_adaptive(const Integrand& f, double lower, double upper, const QuadratureSpec& spec)
{
    spec.validate();
    if (!std::isfinite(lower) || std::isnan(upper) || upper == -std::numeric_limits<double>::infinity())
        throw std::invalid_argument("integrate_adaptive: lower must be finite and upper finite or +inf");
    if (upper == lower)
        return 0.0;
    if (upper < lower)
        return -integrate_adaptive(f, upper, lower, spec);

    auto checked = [&f](double x) {
        const double y = f(x);
        if (!std::isfinite(y))
            throw std::domain_error("integrate_adaptive: integrand is not finite at x = " + std::to_string(x));
        return y;
    };

    if (std::isinf(upper)) {
        auto mapped = [&](double t) {
            const double one_minus = 1.0 - t;
            return checked(lower + t / one_minus) / (one_minus * one_minus);
        };
        return adaptive_on_finite(mapped, 0.0, 1.0, spec);
    }
    return adaptive_on_finite(checked, lower, upper, spec);
}

}  // namespace dfcnoma::numerics
