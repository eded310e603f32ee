#pragma once

#include <optional>
#include <span>
#include <stdexcept>

#include "dfcnoma/numerics.hpp"
#include "dfcnoma/system_model.hpp"

namespace dfcnoma::analytic {

/// Shorthand constants shared by the closed forms. Infinite values are
/// legitimate (e.g. varpi when R3 = 0, psi when beta = theta1 rho_u lambda_b1).
struct DerivedConstants {
    double alpha = 0.0;   ///< 1 / (theta1 rho_b lambda_b1)
    double beta = 0.0;    ///< rho_u (sigma2 theta2 + sigma3 theta3p) lambda_21
    double a_d = 0.0;     ///< theta2 rho_u lambda_2d
    double a = 0.0;       ///< theta3 rho_b lambda_b2
    double b = 0.0;       ///< theta3 rho_b lambda_b1
    double d = 0.0;       ///< (1/rho_b)(1/lambda_b2 + 1/lambda_b1)
    double e = 0.0;       ///< (1/rho_u)(1/lambda_23 + 1/lambda_2d)
    double g = 0.0;       ///< sigma1 rho_u lambda_22 - theta1 rho_b lambda_b2
    double j = 0.0;       ///< theta1 rho_b lambda_b1
    double psi = 0.0;     ///< theta3 rho_u lambda_b1 / (beta - theta1 rho_u lambda_b1)
    double chi = 0.0;     ///< theta1 rho_u lambda_b1 / (beta - theta1 rho_u lambda_b1)
    double lambda1 = 0.0;   ///< 2^R1 - 1
    double lambda3 = 0.0;   ///< 2^R3 - 1
    double lambda_d = 0.0;  ///< 2^Rd - 1
    double varpi = 0.0;   ///< (theta3 - theta1 Lambda3) / Lambda3
    double varphi = 0.0;  ///< min(varpi, theta1 / Lambda1)
    double aleph = 0.0;   ///< theta3p - theta2 Lambda3
};

DerivedConstants derive_constants(const SystemConfig& cfg);

/// Raised when an asymptotic expression is requested outside the parameter
/// regime it was derived for.
class RegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised by diversity_order() when a curve point has OP == 0.
class BelowNumericalFloor : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Distributions

/// CDF of U1's s1 SINR: 1 - e^{-alpha q} / (1 + alpha beta q).
double cdf_q(double q, const DerivedConstants& c);

/// Per-link CDFs of the four s3 SINRs. Each is 1 at and beyond its power
/// ratio ceiling (theta3/theta1 or theta3p/theta2).
double cdf_x(double x, const SystemConfig& cfg);  ///< relay, gamma_b2^{s3}
double cdf_y(double y, const SystemConfig& cfg);  ///< U1, gamma_b1^{s3}
double cdf_z(double z, const SystemConfig& cfg);  ///< U3, gamma_23^{s3}
double cdf_w(double w, const SystemConfig& cfg);  ///< D1, gamma_2d^{s3}; 0 when D1 is absent

/// Upper end of the support of the min s3 SINR.
double min_sinr_s3_ceiling(const SystemConfig& cfg);

/// CDF of min(X, Y, Z, W) as 1 - prod(1 - F_i). W is left out when the
/// configuration has no D2D receiver.
double cdf_min_sinr_s3(double r, const SystemConfig& cfg);

/// The same CDF in the grouped form with the D, E, A, G, B, J, beta
/// shorthands. Only defined when D1 is present. Kept as a cross-check of the
/// product form.
double cdf_min_sinr_s3_grouped(double r, const SystemConfig& cfg);

/// CDF of U1's high-SNR s3 SINR ratio N under perfect SI cancellation,
/// supported on [0, theta3/theta1].
double cdf_n(double n, const SystemConfig& cfg);

// ---------------------------------------------------------------------------
// Ergodic capacities, bit/s/Hz

double ec_u1_exact(const SystemConfig& cfg, const numerics::QuadratureSpec& quad = {});
double ec_u1_asymptotic(const SystemConfig& cfg);

double ec_d1_exact(const SystemConfig& cfg);
double ec_d1_asymptotic(const SystemConfig& cfg);

/// Integrates (1 - F_R(r)) / (1 + r) over the support of R.
/// Propagates numerics::ToleranceNotMet.
double ec_u3_exact(const SystemConfig& cfg, const numerics::QuadratureSpec& quad = {});

/// High-SNR far-user capacity. Requires rho_b == rho_u, theta1 == theta2,
/// theta3 == theta3p and sigma1 == 0; throws RegimeError otherwise.
double ec_u3_asymptotic(const SystemConfig& cfg);

/// The integral the asymptotic far-user capacity is the closed form of,
/// (1/ln 2) int_0^{theta3/theta1} (1 - F_N(n)) / (1 + n) dn, by quadrature.
/// Same regime requirements as ec_u3_asymptotic().
double ec_u3_asymptotic_integral(const SystemConfig& cfg, const numerics::QuadratureSpec& quad = {});

struct CapacitySet {
    double u1 = 0.0;
    double d1 = 0.0;
    double u3 = 0.0;
    double total = 0.0;
};

CapacitySet ergodic_capacities(const SystemConfig& cfg, const numerics::QuadratureSpec& quad = {});
CapacitySet ergodic_capacities_asymptotic(const SystemConfig& cfg);

double esc(const SystemConfig& cfg, const numerics::QuadratureSpec& quad = {});
double esc_asymptotic(const SystemConfig& cfg);

// ---------------------------------------------------------------------------
// Outage

double op_u1(const SystemConfig& cfg);
double op_u3(const SystemConfig& cfg);

/// D1 outage: both of D1's decoding conditions on the same g_2d, so the
/// survival is exp(-max(t3, td) / lambda_2d). std::nullopt without D1.
std::optional<double> op_d1(const SystemConfig& cfg);

/// D1 outage with the two conditions multiplied as if independent,
/// exp(-(t3 + td) / lambda_2d). Always >= op_d1(); equal when one threshold
/// is zero. Not used by the engines.
std::optional<double> op_d1_product_form(const SystemConfig& cfg);

struct OutageSet {
    double u1 = 1.0;
    double u3 = 1.0;
    std::optional<double> d1;
};

OutageSet outage_probabilities(const SystemConfig& cfg);

/// High-SNR outage with rho_u = epsilon rho_b. cfg.rho_u must match
/// epsilon * cfg.rho_b; throws RegimeError otherwise. Values are clamped to 1.
OutageSet op_asymptotic(const SystemConfig& cfg, double epsilon);

struct CurvePoint {
    double rho_b;  ///< linear
    double op;
};

/// Least-squares slope of -log10(OP) against log10(rho_b).
double diversity_order(std::span<const CurvePoint> curve);

}  // namespace dfcnoma::analytic
