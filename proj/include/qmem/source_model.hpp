#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qmem/numerics.hpp"

/**
 * Second-moment model of the synchronized sub-Poissonian laser that feeds
 * the memory. All quantities are normally ordered X-quadrature statistics in
 * dimensionless time (units of the control Rabi frequency).
 */
namespace qmem::source {

struct LaserSource {
    double p = -1.0;       ///< pump statistics: 0 Poissonian, -1 regular pumping
    double kappa = 100.0;  ///< laser linewidth
    double mu = 0.0;       ///< synchronization parameter

    /// Throws DomainError unless p >= -1, kappa > 0 and 0 <= mu < 1.
    void validate() const;
};

/// kappa * (1 - mu/2), the decay rate of the input correlation.
double correlation_rate(const LaserSource& src);

/// <: dX_in(t) dX_in(t') :> for a pulse cut out by the window [0, T_W].
double input_autocorrelation(const LaserSource& src, double t, double t_prime, double write_time);

/// 4 <|dX_in,omega|^2> = 1 + p kappa^2 (1 - mu) / (kappa^2 (1 - mu/2)^2 + omega^2).
/// Zero only in the perfect-squeezing limit p = -1, mu = 0, omega = 0.
double input_spectrum(const LaserSource& src, double omega);

/// p (1 - mu) / (1 - mu/2)^2: normally ordered white-noise strength of the
/// source once the correlation time is negligible against the pulse.
double noise_coefficient(const LaserSource& src);

/// Normally ordered strength of the Y quadrature assumed when a moment table
/// needs one: the minimum-uncertainty partner of noise_coefficient, i.e.
/// 1/(1 + n) - 1. Perfect squeezing (1 + n == 0) has no finite partner; the
/// result is then 0 and `defined` is false.
struct ConjugateNoise {
    double coefficient;
    bool defined;
};
ConjugateNoise conjugate_noise_coefficient(const LaserSource& src);

enum class SourceMode { white_noise, exact };

/**
 * Quadratic form of the input correlation on a time grid,
 *
 *     B(f, g) = int int <: dX_in(t) dX_in(t') :> f(t) conj(g(t')) dt dt',
 *
 * either in the white-noise limit, B = (n/4) int f conj(g) dt, or with the
 * exact exponential correlator. The exact form integrates the exponential
 * against a piecewise-linear interpolant of g, then applies the grid
 * quadrature in t.
 */
class CorrelationForm {
public:
    CorrelationForm(const LaserSource& src, const numerics::UniformGrid& grid, SourceMode mode);

    SourceMode mode() const { return mode_; }
    const numerics::UniformGrid& grid() const { return grid_; }

    std::complex<double> bilinear(std::span<const std::complex<double>> f,
                                  std::span<const std::complex<double>> g) const;
    double bilinear(std::span<const double> f, std::span<const double> g) const;

    /// Re B(f, f).
    double quadratic(std::span<const std::complex<double>> f) const;

private:
    LaserSource src_;
    numerics::UniformGrid grid_;
    SourceMode mode_;
    std::vector<double> weights_;
    Eigen::MatrixXd exponential_;  ///< exact mode: (K g)_j = int exp(-rate |t_j - t|) g(t) dt
    double amplitude_ = 0.0;       ///< prefactor of the exponential or of the delta
};

}  // namespace qmem::source
