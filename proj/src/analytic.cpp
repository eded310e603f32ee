#include "dfcnoma/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dfcnoma::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2e = std::numbers::log2e;
constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

// Below this |1 - alpha beta| the two Ei terms cancel too much.
constexpr double kSingularGap = 1e-6;

bool nearly_equal(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b)); }

// e^{y} Ei(-y) for y > 0, with the y -> inf limit 0.
double scaled_ei_neg(double y)
{
    if (std::isinf(y))
        return 0.0;
    return numerics::scaled_exp_integral_ei(-y);
}

// Power-ratio ceiling of an interference-limited SINR; no ceiling when the
// interfering share is zero.
double ceiling_ratio(double hi, double lo) { return lo > 0.0 ? hi / lo : kInf; }

// 1 - e^{-x} / (1 + y) without cancellation when both x and y are small.
double one_minus_exp_over(double x, double y) { return (y - std::expm1(-x)) / (1.0 + y); }

void require_u3_asymptotic_regime(const SystemConfig& cfg)
{
    if (!nearly_equal(cfg.rho_b, cfg.rho_u))
        throw RegimeError("asymptotic far-user capacity requires rho_b == rho_u");
    if (!nearly_equal(cfg.theta1, cfg.theta2) || !nearly_equal(cfg.theta3, cfg.theta3p))
        throw RegimeError("asymptotic far-user capacity requires theta1 == theta2 and theta3 == theta3p");
    if (cfg.sigma1 != 0.0)
        throw RegimeError("asymptotic far-user capacity requires perfect SI cancellation (sigma1 == 0)");
}

}  // namespace

DerivedConstants derive_constants(const SystemConfig& cfg)
{
    DerivedConstants c;
    c.alpha = 1.0 / (cfg.theta1 * cfg.rho_b * cfg.lambda_b1);
    c.beta = cfg.rho_u * cfg.residual_interference_mean();
    c.a_d = cfg.theta2 * cfg.rho_u * cfg.lambda_2d;
    c.a = cfg.theta3 * cfg.rho_b * cfg.lambda_b2;
    c.b = cfg.theta3 * cfg.rho_b * cfg.lambda_b1;
    c.d = (1.0 / cfg.rho_b) * (1.0 / cfg.lambda_b2 + 1.0 / cfg.lambda_b1);
    c.e = (1.0 / cfg.rho_u) * (1.0 / cfg.lambda_23 + 1.0 / cfg.lambda_2d);
    c.g = cfg.sigma1 * cfg.rho_u * cfg.lambda_22 - cfg.theta1 * cfg.rho_b * cfg.lambda_b2;
    c.j = cfg.theta1 * cfg.rho_b * cfg.lambda_b1;

    const double kappa = c.beta - cfg.theta1 * cfg.rho_u * cfg.lambda_b1;
    c.psi = cfg.theta3 * cfg.rho_u * cfg.lambda_b1 / kappa;
    c.chi = cfg.theta1 * cfg.rho_u * cfg.lambda_b1 / kappa;

    c.lambda1 = rate_to_snr_threshold(cfg.r1);
    c.lambda3 = rate_to_snr_threshold(cfg.r3);
    c.lambda_d = rate_to_snr_threshold(cfg.rd);
    c.varpi = c.lambda3 > 0.0 ? (cfg.theta3 - cfg.theta1 * c.lambda3) / c.lambda3 : kInf;
    c.varphi = std::min(c.varpi, c.lambda1 > 0.0 ? cfg.theta1 / c.lambda1 : kInf);
    c.aleph = cfg.theta3p - cfg.theta2 * c.lambda3;
    return c;
}

// ---------------------------------------------------------------------------

double cdf_q(double q, const DerivedConstants& c)
{
    if (q <= 0.0)
        return 0.0;
    if (std::isinf(q))
        return 1.0;
    return 1.0 - std::exp(-c.alpha * q) / (1.0 + c.alpha * c.beta * q);
}

double cdf_x(double x, const SystemConfig& cfg)
{
    if (x <= 0.0)
        return 0.0;
    const double gap = cfg.theta3 - cfg.theta1 * x;
    if (gap <= 0.0)
        return 1.0;
    const double u = x / (gap * cfg.rho_b * cfg.lambda_b2);
    return 1.0 - std::exp(-u) / (1.0 + cfg.sigma1 * cfg.rho_u * cfg.lambda_22 * u);
}

double cdf_y(double y, const SystemConfig& cfg)
{
    if (y <= 0.0)
        return 0.0;
    const double gap = cfg.theta3 - cfg.theta1 * y;
    if (gap <= 0.0)
        return 1.0;
    const double u = y / (gap * cfg.rho_b * cfg.lambda_b1);
    return 1.0 - std::exp(-u) / (1.0 + cfg.rho_u * cfg.residual_interference_mean() * u);
}

double cdf_z(double z, const SystemConfig& cfg)
{
    if (z <= 0.0)
        return 0.0;
    const double gap = cfg.theta3p - cfg.theta2 * z;
    if (gap <= 0.0)
        return 1.0;
    return 1.0 - std::exp(-z / (gap * cfg.rho_u * cfg.lambda_23));
}

double cdf_w(double w, const SystemConfig& cfg)
{
    if (!cfg.d2d_present() || w <= 0.0)
        return 0.0;
    const double gap = cfg.theta3p - cfg.theta2 * w;
    if (gap <= 0.0)
        return 1.0;
    return 1.0 - std::exp(-w / (gap * cfg.rho_u * cfg.lambda_2d));
}

double min_sinr_s3_ceiling(const SystemConfig& cfg)
{
    return std::min(ceiling_ratio(cfg.theta3, cfg.theta1), ceiling_ratio(cfg.theta3p, cfg.theta2));
}

double cdf_min_sinr_s3(double r, const SystemConfig& cfg)
{
    if (r <= 0.0)
        return 0.0;
    if (r >= min_sinr_s3_ceiling(cfg))
        return 1.0;
    const double survival = (1.0 - cdf_x(r, cfg)) * (1.0 - cdf_y(r, cfg)) * (1.0 - cdf_z(r, cfg)) *
                            (1.0 - cdf_w(r, cfg));
    return 1.0 - survival;
}

double cdf_min_sinr_s3_grouped(double r, const SystemConfig& cfg)
{
    if (!cfg.d2d_present())
        throw std::domain_error("grouped min-SINR CDF needs the D2D receiver (theta2 > 0)");
    if (r <= 0.0)
        return 0.0;
    if (r >= min_sinr_s3_ceiling(cfg))
        return 1.0;
    const auto c = derive_constants(cfg);
    const double gap_b = cfg.theta3 - cfg.theta1 * r;
    const double gap_u = cfg.theta3p - cfg.theta2 * r;
    const double exponent = -c.d * r / gap_b - c.e * r / gap_u;
    const double numerator = gap_b * gap_b * cfg.rho_b * cfg.rho_b * cfg.lambda_b1 * cfg.lambda_b2;
    const double denominator = (c.a + c.g * r) * (c.b + (c.beta - c.j) * r);
    return 1.0 - std::exp(exponent) * numerator / denominator;
}

double cdf_n(double n, const SystemConfig& cfg)
{
    const double ceiling = cfg.theta3 / cfg.theta1;
    if (n <= 0.0)
        return 0.0;
    if (n >= ceiling)
        return 1.0;
    const double beta = derive_constants(cfg).beta;
    const double weighted = n * beta;
    return weighted / (cfg.rho_u * cfg.lambda_b1 * (cfg.theta3 - cfg.theta1 * n) + weighted);
}

// ---------------------------------------------------------------------------

double ec_u1_exact(const SystemConfig& cfg, const numerics::QuadratureSpec& quad)
{
    const auto c = derive_constants(cfg);
    const double ab = c.alpha * c.beta;
    if (std::fabs(1.0 - ab) < kSingularGap) {
        // Removable singularity of the partial-fraction split.
        auto integrand = [&](double q) { return std::exp(-c.alpha * q) / ((1.0 + q) * (1.0 + ab * q)); };
        return kInvLn2 * numerics::integrate_adaptive(integrand, 0.0, kInf, quad);
    }
    const double interference_term = c.beta > 0.0 ? scaled_ei_neg(1.0 / c.beta) : 0.0;
    return kLog2e / (1.0 - ab) * (interference_term - scaled_ei_neg(c.alpha));
}

double ec_u1_asymptotic(const SystemConfig& cfg)
{
    const auto c = derive_constants(cfg);
    if (!(c.beta > 0.0))
        throw RegimeError("asymptotic near-user capacity needs residual interference (beta > 0)");
    const double gamma = numerics::kEulerGamma;
    const double interference = (1.0 + 1.0 / c.beta) * (gamma - std::log(c.beta));
    const double signal = (1.0 + c.alpha) * (gamma + std::log(c.alpha));
    return kLog2e / (1.0 - c.alpha * c.beta) * (interference - signal);
}

double ec_d1_exact(const SystemConfig& cfg)
{
    if (!cfg.d2d_present())
        return 0.0;
    const auto c = derive_constants(cfg);
    return -kInvLn2 * scaled_ei_neg(1.0 / c.a_d);
}

double ec_d1_asymptotic(const SystemConfig& cfg)
{
    if (!cfg.d2d_present())
        return 0.0;
    const double inv = 1.0 / derive_constants(cfg).a_d;
    return -kLog2e * (1.0 + inv) * (numerics::kEulerGamma + std::log(inv));
}

double ec_u3_exact(const SystemConfig& cfg, const numerics::QuadratureSpec& quad)
{
    auto integrand = [&cfg](double r) { return (1.0 - cdf_min_sinr_s3(r, cfg)) / (1.0 + r); };
    return kInvLn2 * numerics::integrate_adaptive(integrand, 0.0, min_sinr_s3_ceiling(cfg), quad);
}

double ec_u3_asymptotic_integral(const SystemConfig& cfg, const numerics::QuadratureSpec& quad)
{
    require_u3_asymptotic_regime(cfg);
    auto integrand = [&cfg](double n) { return (1.0 - cdf_n(n, cfg)) / (1.0 + n); };
    return kInvLn2 * numerics::integrate_adaptive(integrand, 0.0, cfg.theta3 / cfg.theta1, quad);
}

double ec_u3_asymptotic(const SystemConfig& cfg)
{
    require_u3_asymptotic_regime(cfg);
    const auto c = derive_constants(cfg);
    const double ceiling = cfg.theta3 / cfg.theta1;
    if (c.beta == 0.0)
        return std::log2(1.0 + ceiling);
    const double kappa = c.beta - cfg.theta1 * cfg.rho_u * cfg.lambda_b1;
    if (std::fabs(kappa) <= 1e-12 * c.beta || std::fabs(1.0 - c.psi) < kSingularGap)
        return ec_u3_asymptotic_integral(cfg);
    return kLog2e / (1.0 - c.psi) *
           (c.psi * (1.0 + c.chi) * std::log((ceiling + c.psi) / c.psi) -
            (c.psi + c.chi) * std::log(ceiling + 1.0));
}

CapacitySet ergodic_capacities(const SystemConfig& cfg, const numerics::QuadratureSpec& quad)
{
    CapacitySet s;
    s.u1 = ec_u1_exact(cfg, quad);
    s.d1 = ec_d1_exact(cfg);
    s.u3 = ec_u3_exact(cfg, quad);
    s.total = s.u1 + s.d1 + s.u3;
    return s;
}

CapacitySet ergodic_capacities_asymptotic(const SystemConfig& cfg)
{
    CapacitySet s;
    s.u1 = ec_u1_asymptotic(cfg);
    s.d1 = ec_d1_asymptotic(cfg);
    s.u3 = ec_u3_asymptotic(cfg);
    s.total = s.u1 + s.d1 + s.u3;
    return s;
}

double esc(const SystemConfig& cfg, const numerics::QuadratureSpec& quad)
{
    return ergodic_capacities(cfg, quad).total;
}

double esc_asymptotic(const SystemConfig& cfg) { return ergodic_capacities_asymptotic(cfg).total; }

// ---------------------------------------------------------------------------

double op_u1(const SystemConfig& cfg)
{
    const auto c = derive_constants(cfg);
    if (c.lambda3 >= cfg.theta3 / cfg.theta1)
        return 1.0;
    const double scale = c.varphi * cfg.rho_b * cfg.lambda_b1;
    return one_minus_exp_over(1.0 / scale, c.beta / scale);
}

double op_u3(const SystemConfig& cfg)
{
    const auto c = derive_constants(cfg);
    if (c.lambda3 >= cfg.theta3 / cfg.theta1)
        return 1.0;
    if (cfg.d2d_present() && c.lambda3 >= cfg.theta3p / cfg.theta2)
        return 1.0;
    const double relay_scale = c.varpi * cfg.rho_b * cfg.lambda_b2;
    const double exponent = c.lambda3 / (c.aleph * cfg.rho_u * cfg.lambda_23) + 1.0 / relay_scale;
    return one_minus_exp_over(exponent, cfg.sigma1 * cfg.lambda_22 * cfg.rho_u / relay_scale);
}

namespace {

struct D1Thresholds {
    double s3;  ///< g_2d needed to decode s3
    double s2;  ///< g_2d needed to decode s2 after SIC
};

std::optional<D1Thresholds> d1_thresholds(const SystemConfig& cfg, const DerivedConstants& c)
{
    if (c.lambda3 >= cfg.theta3p / cfg.theta2)
        return std::nullopt;
    return D1Thresholds{c.lambda3 / (c.aleph * cfg.rho_u), c.lambda_d / (cfg.theta2 * cfg.rho_u)};
}

}  // namespace

std::optional<double> op_d1(const SystemConfig& cfg)
{
    if (!cfg.d2d_present())
        return std::nullopt;
    const auto c = derive_constants(cfg);
    const auto t = d1_thresholds(cfg, c);
    if (!t)
        return 1.0;
    return -std::expm1(-std::max(t->s3, t->s2) / cfg.lambda_2d);
}

std::optional<double> op_d1_product_form(const SystemConfig& cfg)
{
    if (!cfg.d2d_present())
        return std::nullopt;
    const auto c = derive_constants(cfg);
    const auto t = d1_thresholds(cfg, c);
    if (!t)
        return 1.0;
    return -std::expm1(-(t->s3 + t->s2) / cfg.lambda_2d);
}

OutageSet outage_probabilities(const SystemConfig& cfg)
{
    return {op_u1(cfg), op_u3(cfg), op_d1(cfg)};
}

OutageSet op_asymptotic(const SystemConfig& cfg, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw RegimeError("relay power ratio epsilon must lie in (0, 1]");
    if (!nearly_equal(cfg.rho_u, epsilon * cfg.rho_b))
        throw RegimeError("op_asymptotic requires rho_u == epsilon * rho_b");

    const auto c = derive_constants(cfg);
    OutageSet out;

    if (c.lambda3 < cfg.theta3 / cfg.theta1) {
        // The two sigma3 branches coincide: with sigma3 == 0, beta / rho_b
        // reduces to epsilon sigma2 theta2 lambda_21.
        const double ratio = epsilon * cfg.residual_interference_mean() / (c.varphi * cfg.lambda_b1);
        out.u1 = 1.0 - 1.0 / (1.0 + ratio);
    }

    const bool relay_link_ok =
        c.lambda3 < cfg.theta3 / cfg.theta1 && (!cfg.d2d_present() || c.lambda3 < cfg.theta3p / cfg.theta2);
    if (relay_link_ok) {
        if (cfg.sigma1 > 0.0) {
            out.u3 = 1.0 - 1.0 / (1.0 + epsilon * cfg.sigma1 * cfg.lambda_22 / (c.varpi * cfg.lambda_b2));
        } else {
            out.u3 = std::min(1.0, c.lambda3 / (c.aleph * cfg.rho_u * cfg.lambda_23) +
                                       1.0 / (c.varpi * cfg.rho_b * cfg.lambda_b2));
        }
    }

    if (cfg.d2d_present()) {
        const auto t = d1_thresholds(cfg, c);
        out.d1 = t ? std::min(1.0, std::max(t->s3, t->s2) / cfg.lambda_2d) : 1.0;
    }
    return out;
}

double diversity_order(std::span<const CurvePoint> curve)
{
    if (curve.size() < 2)
        throw std::invalid_argument("diversity_order needs at least two points");
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!(curve[i].rho_b > 0.0) || (i > 0 && !(curve[i].rho_b > curve[i - 1].rho_b)))
            throw std::invalid_argument("diversity_order needs strictly increasing positive rho_b");
        if (curve[i].op == 0.0)
            throw BelowNumericalFloor(
                "OP is 0 at a curve point: below numerical floor, increase sample count or use analytic OP");
        if (!(curve[i].op > 0.0 && curve[i].op <= 1.0))
            throw std::invalid_argument("diversity_order needs OP in (0, 1]");
    }

    const double n = static_cast<double>(curve.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : curve) {
        sx += std::log10(p.rho_b);
        sy += -std::log10(p.op);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : curve) {
        const double dx = std::log10(p.rho_b) - mx;
        sxx += dx * dx;
        sxy += dx * (-std::log10(p.op) - my);
    }
    return sxy / sxx;
}

}  // namespace dfcnoma::analytic
