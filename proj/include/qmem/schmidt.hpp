#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qmem/kernels.hpp"
#include "qmem/numerics.hpp"

/**
 * Schmidt modes of the write-store-read channel: eigenfunctions phi_i(t) of
 * the cycle kernel, their spatial partners g_i(z) and the channel
 * transmissions lambda_i.
 *
 * The integral operator is discretized with the grid quadrature weights W
 * (Nystrom): the symmetric matrix W^1/2 G W^1/2 is diagonalized and its
 * eigenvectors are mapped back with W^-1/2. Orthonormality of phi_i then
 * holds exactly in the quadrature inner product.
 */
namespace qmem::schmidt {

using numerics::SampledFunction1D;

inline constexpr std::size_t kDefaultModes = 8;
/// Spatial modes are formed only above this lambda; (4 lambda)^-1/4 diverges at 0.
inline constexpr double kSpatialModeThreshold = 1e-6;

struct ClampDiagnostics {
    std::size_t clamped_count = 0;  ///< negative operator eigenvalues set to zero
    double worst_negative = 0.0;    ///< most negative raw value (0 if none)
};

struct SchmidtDecomposition {
    numerics::UniformGrid t_grid{0.0, 1.0, 2};
    numerics::UniformGrid z_grid{0.0, 1.0, 2};
    /// Raw operator eigenvalues (sqrt(lambda)) of the whole discretized
    /// operator, descending, before clamping.
    std::vector<double> raw_operator_eigenvalues;
    /// Clamped operator eigenvalues of the kept modes.
    std::vector<double> operator_eigenvalues;
    /// lambda_i = operator_eigenvalues[i]^2, descending.
    std::vector<double> lambdas;
    std::vector<SampledFunction1D> temporal_modes;
    /// g_i for the leading modes with lambda_i > kSpatialModeThreshold.
    std::vector<SampledFunction1D> spatial_modes;
    std::size_t n_modes_kept = 0;
    ClampDiagnostics clamp;
};

/// Keeps the n_modes leading modes. n_modes larger than the t-grid raises
/// DomainError.
SchmidtDecomposition decompose(const kernels::CycleKernel& ck, const kernels::WriteKernel& wk,
                               std::size_t n_modes = kDefaultModes);

/// sum_{i<n} sqrt(lambda_i) phi_i(t) phi_i(t').
kernels::CycleKernel reconstruct(const SchmidtDecomposition& sd, std::size_t n);

/// phi_{i,omega} for 0-based mode index i; omega on the 2*pi/T_W grain.
std::complex<double> mode_spectrum(const SchmidtDecomposition& sd, std::size_t i, double omega);

struct OrthonormalityResiduals {
    double temporal_off_diagonal = 0.0;  ///< max_{i != j} |<phi_i, phi_j>|
    double temporal_diagonal = 0.0;      ///< max_i |<phi_i, phi_i> - 1|
    double spatial_off_diagonal = 0.0;
    double spatial_diagonal = 0.0;
};

/// Spatial residuals cover the modes with lambda above `spatial_threshold`.
OrthonormalityResiduals orthonormality(const SchmidtDecomposition& sd, double spatial_threshold = 1e-3);

/// ||A - B||_F / ||B||_F.
double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace qmem::schmidt
