#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qmem/numerics.hpp"

/**
 * Green's-function kernels of the tripod memory in dimensionless units
 * (time in units of 1/Omega, length in units of Omega / (2 g^2 N)).
 *
 * The write kernel maps the input signal onto the symmetric spin wave b+:
 *
 *     G_ab(z, t) = int_0^t cos(t - 2 t') J0(sqrt(z t')) J0(sqrt(z (t - t'))) dt'
 *
 * and the backward-read cycle kernel is the Gram integral
 *
 *     G(t, t') = 1/2 int_0^L G_ab(z, t) G_ab(z, t') dz.
 */
namespace qmem::kernels {

using numerics::UniformGrid;

enum class GridPolicy {
    production,  ///< n >= 129 and n = 2^k + 1
    diagnostic,  ///< n >= 5 and n = 2^k + 1 (coarse grids for validation runs)
};

struct MemoryConfig {
    double length = 10.0;     ///< L
    double write_time = 5.5;  ///< T_W
    double read_time = 5.5;   ///< T_R, must equal T_W
    std::size_t n_z = 513;
    std::size_t n_t = 513;
    /// Delay T0 between the two successive read pulses. It enters no second
    /// moment; it is only checked against T0 >= 10 T_R.
    double readout_delay = 100.0;

    void validate(GridPolicy policy = GridPolicy::production) const;

    UniformGrid z_grid() const { return {0.0, length, n_z}; }
    UniformGrid t_grid() const { return {0.0, write_time, n_t}; }

    static MemoryConfig make(double length, double write_time, std::size_t n = 513);
};

class WriteKernel {
public:
    WriteKernel(UniformGrid z_grid, UniformGrid t_grid, Eigen::MatrixXd values);

    const UniformGrid& z_grid() const { return z_grid_; }
    const UniformGrid& t_grid() const { return t_grid_; }
    /// Row j is z_j, column m is t_m.
    const Eigen::MatrixXd& values() const { return values_; }
    double operator()(std::size_t j, std::size_t m) const {
        return values_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m));
    }

private:
    UniformGrid z_grid_;
    UniformGrid t_grid_;
    Eigen::MatrixXd values_;
};

class CycleKernel {
public:
    CycleKernel(UniformGrid t_grid, Eigen::MatrixXd values, double asymmetry = 0.0);

    const UniformGrid& t_grid() const { return t_grid_; }
    const Eigen::MatrixXd& values() const { return values_; }
    /// max|G - G^T| / max|G| measured before symmetrization.
    double asymmetry() const { return asymmetry_; }

private:
    UniformGrid t_grid_;
    Eigen::MatrixXd values_;
    double asymmetry_;
};

struct SpinWaveProfile {
    SpinWaveProfile(UniformGrid z_grid, std::vector<std::complex<double>> values);

    UniformGrid z_grid;
    std::vector<std::complex<double>> values;
};

/// Inner-integral resolution follows the configured t-grid: the range [0, t]
/// is split into round(t / step) intervals (at least one).
double write_kernel_point(double z, double t, const MemoryConfig& cfg);

/// The write-kernel integrand in its original complex form,
/// exp(-i t') J0(sqrt(z t')) exp(i (t - t')) J0(sqrt(z (t - t'))), integrated
/// with the same rule as write_kernel_point. Its imaginary part vanishes by
/// the t' -> t - t' symmetry; used as a cross-check of the real form.
std::complex<double> write_kernel_point_complex(double z, double t, const MemoryConfig& cfg);

/// G_ab(z, t_m) for every node of the configured t-grid.
std::vector<double> write_kernel_row(double z, const MemoryConfig& cfg);

WriteKernel sample_write_kernel(const MemoryConfig& cfg,
                                GridPolicy policy = GridPolicy::production);

/// Raises NumericalQualityError if the Gram matrix is asymmetric beyond
/// 1e-7 * max|G| before symmetrization.
CycleKernel cycle_kernel(const WriteKernel& wk);

/// G_ab(k, t) = (1/sqrt(L)) int_0^L G_ab(z, t) exp(-i k z) dz, k on the 2*pi/L grain.
numerics::ComplexSampledFunction1D spatial_spectrum_kernel(const WriteKernel& wk, double k);

enum class SpinChannel {
    symmetric,  ///< b+ = (b1 + b2)/sqrt2, prefactor -1/sqrt2
    first,      ///< b1, prefactor -1/2
    second,     ///< b2, prefactor -1/2
};

/// Signal part of the spin wave after writing the pulse `input` (sampled on
/// the kernel's t-grid): b(z) = c * int_0^T a_in(T - t) G_ab(z, t) dt.
SpinWaveProfile write_spin_wave(const WriteKernel& wk, const numerics::SampledFunction1D& input,
                                SpinChannel channel = SpinChannel::symmetric);

// ---------------------------------------------------------------------------
// Finite-difference oracle

/// Constant that maps the raw finite-difference b+ amplitude onto the
/// normalization of write_spin_wave. Fixed once by a least-squares fit on
/// the reference pulse (reference_pulse below) at L = 10, T_W = 5.5.
inline constexpr double kPdeAmplitudeScale = 0.70726;

struct PdeOptions {
    double tolerance = 0.01;  ///< relative L2 change between successive halvings
    int max_refinements = 4;
    bool apply_scale = true;  ///< false returns the raw PDE amplitude
};

struct PdeResult {
    SpinWaveProfile b_plus;   ///< on the configured z-grid
    SpinWaveProfile b_minus;  ///< untouched by writing with equal Rabi frequencies
    std::size_t n_z = 0;      ///< finest grid actually used
    std::size_t n_t = 0;
    double self_consistency = 0.0;  ///< relative L2 change at the last halving
};

/// Integrates the three coupled equations for the field a, the optical
/// coherence c and the spin wave b+ directly:
///
///     d_z a = -c / 2,   d_t c = a + b,   d_t b = -c
///
/// (units where the raw b+ amplitude equals -int a_in(T - t) G_ab dt) with
/// the trapezoid rule in both z and t, halving both steps until the b+
/// profile changes by less than `tolerance`. b- obeys d_t b- = 0 and is
/// returned unchanged (zero when `initial_b_minus` is empty).
PdeResult pde_oracle_write(const MemoryConfig& cfg, const numerics::SampledFunction1D& input,
                           const PdeOptions& options = {},
                           const std::optional<SpinWaveProfile>& initial_b_minus = std::nullopt);

/// Gaussian test pulse centred in the write window, width T_W / 8.
numerics::SampledFunction1D reference_pulse(const MemoryConfig& cfg);

/// Relative L2 distance ||a - b|| / ||b|| under the z quadrature.
double relative_l2(const SpinWaveProfile& a, const SpinWaveProfile& b);

}  // namespace qmem::kernels
