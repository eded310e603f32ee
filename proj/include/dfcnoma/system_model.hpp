#pragma once

#include <stdexcept>
#include <string>

#include "dfcnoma/random_stream.hpp"

namespace dfcnoma {

/// Raised when a configuration value violates a model invariant.
/// key() names the offending field using its config-file spelling.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Scalar parameters of the BS -> {U1, U2 -> (U3, D1)} downlink.
///
/// Everything is linear; dB only exists at the config-file boundary.
/// Defaults are the reference scenario: rho_b = 20 dB, rho_b = 2 rho_u,
/// residual interference 0.08^2 / 0.1^2 and unit rate thresholds.
///
/// theta2 == 0 (with theta3p == 1) is the degenerate relay that forwards
/// s3 only; there is no D2D receiver in that configuration.
struct SystemConfig {
    double theta1 = 0.05;   ///< BS share for s1 (near user)
    double theta3 = 0.95;   ///< BS share for s3 (far user)
    double theta2 = 0.05;   ///< relay share for s2 (D2D user)
    double theta3p = 0.95;  ///< relay share for forwarded s3

    double rho_b = 100.0;  ///< BS transmit SNR
    double rho_u = 50.0;   ///< relay transmit SNR

    double lambda_b1 = 1.0;
    double lambda_b2 = 0.5;
    double lambda_21 = 0.5;
    double lambda_23 = 0.5;
    double lambda_2d = 1.0;
    double lambda_22 = 0.3;

    double sigma1 = 0.08 * 0.08;  ///< residual self-interference at the relay
    double sigma2 = 1.0;          ///< unknown (s2) interference at U1, always 1
    double sigma3 = 0.1 * 0.1;    ///< residual known (s3) interference at U1

    double r1 = 1.0;  ///< rate thresholds, bit/s/Hz
    double r3 = 1.0;
    double rd = 1.0;

    /// Throws ConfigError naming the first violated field.
    void validate() const;

    bool d2d_present() const noexcept { return theta2 > 0.0; }

    /// Mean of the residual interference gain at U1 from the relay:
    /// (sigma2 theta2 + sigma3 theta3p) lambda_21.
    double residual_interference_mean() const noexcept
    {
        return (sigma2 * theta2 + sigma3 * theta3p) * lambda_21;
    }
};

/// One joint draw of every link gain.
struct ChannelSample {
    double g_b1 = 0.0;
    double g_b2 = 0.0;
    double g_23 = 0.0;
    double g_2d = 0.0;
    double gt_22 = 0.0;  ///< residual self-interference at the relay
    double gt_21 = 0.0;  ///< residual relay interference at U1
};

struct SinrSet {
    double gamma_b2_s3 = 0.0;  ///< relay decoding s3
    double gamma_b1_s3 = 0.0;  ///< U1 decoding s3 before SIC
    double gamma_b1_s1 = 0.0;  ///< U1 decoding s1
    double gamma_23_s3 = 0.0;  ///< U3 decoding forwarded s3
    double gamma_2d_s3 = 0.0;  ///< D1 decoding s3 before SIC
    double gamma_2d_s2 = 0.0;  ///< D1 decoding s2
    /// False for the s3-only relay; D1's s3 decoding then does not limit U3.
    bool d2d_receiver = true;
};

struct RateSet {
    double c1 = 0.0;
    double cd = 0.0;
    double c3 = 0.0;
    double c_total = 0.0;
};

/// Draws one ChannelSample. Consumes exactly six values from `rng`, one per
/// field in declaration order.
ChannelSample sample_channels(const SystemConfig& cfg, CounterRng& rng);

/// Same distribution as sample_channels() but built the long way, as |h|^2
/// of a circularly-symmetric complex Gaussian. Used to cross-check the
/// direct exponential sampler.
ChannelSample sample_channels_complex_gaussian(const SystemConfig& cfg, CounterRng& rng);

SinrSet compute_sinrs(const SystemConfig& cfg, const ChannelSample& s);

RateSet compute_rates(const SinrSet& sinrs);

/// SNR threshold 2^R - 1 for a rate threshold R.
double rate_to_snr_threshold(double rate);

}  // namespace dfcnoma
