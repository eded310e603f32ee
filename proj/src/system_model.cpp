#include "dfcnoma/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dfcnoma {

namespace {

constexpr double kSumTolerance = 1e-9;

void require_finite(const char* key, double v)
{
    if (!std::isfinite(v))
        throw ConfigError(key, "must be finite");
}

void require_positive(const char* key, double v)
{
    require_finite(key, v);
    if (!(v > 0.0))
        throw ConfigError(key, "must be > 0");
}

void require_unit_interval(const char* key, double v)
{
    require_finite(key, v);
    if (v < 0.0 || v > 1.0)
        throw ConfigError(key, "must lie in [0, 1]");
}

}  // namespace

void SystemConfig::validate() const
{
    require_positive("theta1", theta1);
    require_positive("theta3", theta3);
    if (std::fabs(theta1 + theta3 - 1.0) > kSumTolerance)
        throw ConfigError("theta3", "theta1 + theta3 must equal 1");
    if (!(theta1 < theta3))
        throw ConfigError("theta1", "theta1 must be smaller than theta3");

    require_finite("theta2", theta2);
    if (theta2 < 0.0)
        throw ConfigError("theta2", "must be >= 0");
    require_positive("theta3p", theta3p);
    if (std::fabs(theta2 + theta3p - 1.0) > kSumTolerance)
        throw ConfigError("theta3p", "theta2 + theta3p must equal 1");
    if (!(theta2 < theta3p))
        throw ConfigError("theta2", "theta2 must be smaller than theta3p");

    require_positive("rho_b", rho_b);
    require_positive("rho_u", rho_u);

    require_positive("lambda_b1", lambda_b1);
    require_positive("lambda_b2", lambda_b2);
    require_positive("lambda_21", lambda_21);
    require_positive("lambda_23", lambda_23);
    require_positive("lambda_2d", lambda_2d);
    require_positive("lambda_22", lambda_22);

    require_unit_interval("sigma1", sigma1);
    require_unit_interval("sigma3", sigma3);
    if (sigma2 != 1.0)
        throw ConfigError("sigma2", "unknown-interference level is fixed to 1");

    for (auto [key, r] : {std::pair{"r1", r1}, std::pair{"r3", r3}, std::pair{"rd", rd}}) {
        require_finite(key, r);
        if (r < 0.0)
            throw ConfigError(key, "rate threshold must be >= 0");
    }
}

ChannelSample sample_channels(const SystemConfig& cfg, CounterRng& rng)
{
    auto exponential = [&rng](double mean) { return -mean * std::log(rng.uniform_open()); };

    ChannelSample s;
    s.g_b1 = exponential(cfg.lambda_b1);
    s.g_b2 = exponential(cfg.lambda_b2);
    s.g_23 = exponential(cfg.lambda_23);
    s.g_2d = exponential(cfg.lambda_2d);
    s.gt_22 = exponential(cfg.sigma1 * cfg.lambda_22);
    s.gt_21 = exponential(cfg.residual_interference_mean());
    return s;
}

ChannelSample sample_channels_complex_gaussian(const SystemConfig& cfg, CounterRng& rng)
{
    // Box-Muller: one pair of uniforms gives the real and imaginary parts.
    auto gain = [&rng](double variance) {
        const double radius = std::sqrt(-2.0 * std::log(rng.uniform_open()));
        const double angle = 2.0 * std::numbers::pi * rng.uniform_open();
        const double scale = std::sqrt(variance / 2.0);
        const double re = scale * radius * std::cos(angle);
        const double im = scale * radius * std::sin(angle);
        return re * re + im * im;
    };

    ChannelSample s;
    s.g_b1 = gain(cfg.lambda_b1);
    s.g_b2 = gain(cfg.lambda_b2);
    s.g_23 = gain(cfg.lambda_23);
    s.g_2d = gain(cfg.lambda_2d);
    s.gt_22 = gain(cfg.sigma1 * cfg.lambda_22);
    s.gt_21 = gain(cfg.residual_interference_mean());
    return s;
}

SinrSet compute_sinrs(const SystemConfig& cfg, const ChannelSample& s)
{
    const double rb = cfg.rho_b;
    const double ru = cfg.rho_u;

    SinrSet out;
    out.gamma_b2_s3 = cfg.theta3 * rb * s.g_b2 / (cfg.theta1 * rb * s.g_b2 + ru * s.gt_22 + 1.0);

    const double u1_noise = ru * s.gt_21 + 1.0;
    out.gamma_b1_s3 = cfg.theta3 * rb * s.g_b1 / (cfg.theta1 * rb * s.g_b1 + u1_noise);
    out.gamma_b1_s1 = cfg.theta1 * rb * s.g_b1 / u1_noise;

    out.gamma_23_s3 = cfg.theta3p * ru * s.g_23 / (cfg.theta2 * ru * s.g_23 + 1.0);
    out.gamma_2d_s3 = cfg.theta3p * ru * s.g_2d / (cfg.theta2 * ru * s.g_2d + 1.0);
    out.gamma_2d_s2 = cfg.theta2 * ru * s.g_2d;
    out.d2d_receiver = cfg.d2d_present();
    return out;
}

RateSet compute_rates(const SinrSet& g)
{
    double weakest = std::min({g.gamma_b2_s3, g.gamma_b1_s3, g.gamma_23_s3});
    if (g.d2d_receiver)
        weakest = std::min(weakest, g.gamma_2d_s3);

    RateSet r;
    r.c1 = std::log2(1.0 + g.gamma_b1_s1);
    r.cd = g.d2d_receiver ? std::log2(1.0 + g.gamma_2d_s2) : 0.0;
    r.c3 = std::log2(1.0 + weakest);
    r.c_total = r.c1 + r.cd + r.c3;
    return r;
}

double rate_to_snr_threshold(double rate) { return std::exp2(rate) - 1.0; }

}  // namespace dfcnoma
