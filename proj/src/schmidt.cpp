#include "qmem/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmem::schmidt {

namespace {

double inner(const std::vector<double>& w, const std::vector<double>& f, const std::vector<double>& g) {
    double sum = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * f[j] * g[j];
    return sum;
}

void residuals(const std::vector<SampledFunction1D>& modes, std::size_t count, double& off, double& diag) {
    if (count == 0) return;
    const std::vector<double> w = numerics::quadrature_weights(modes.front().grid);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i; j < count; ++j) {
            const double s = inner(w, modes[i].values, modes[j].values);
            if (i == j) {
                diag = std::max(diag, std::fabs(s - 1.0));
            } else {
                off = std::max(off, std::fabs(s));
            }
        }
    }
}

}  // namespace

SchmidtDecomposition decompose(const kernels::CycleKernel& ck, const kernels::WriteKernel& wk,
                               std::size_t n_modes) {
    if (!(ck.t_grid() == wk.t_grid())) throw DomainError("decompose: kernels do not share the t-grid");
    const std::size_t n = ck.t_grid().count();
    if (n_modes > n) throw DomainError("decompose: more modes requested than grid points");

    const std::vector<double> wt = numerics::quadrature_weights(ck.t_grid());
    Eigen::VectorXd root(static_cast<Eigen::Index>(n));
    for (std::size_t m = 0; m < n; ++m) root(static_cast<Eigen::Index>(m)) = std::sqrt(wt[m]);
    const Eigen::MatrixXd scaled = root.asDiagonal() * ck.values() * root.asDiagonal();
    const numerics::SymmetricEigenResult eig = numerics::eigh_symmetric(scaled);

    SchmidtDecomposition sd;
    sd.t_grid = ck.t_grid();
    sd.z_grid = wk.z_grid();
    sd.raw_operator_eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
    for (double e : sd.raw_operator_eigenvalues) {
        if (e < 0.0) {
            ++sd.clamp.clamped_count;
            sd.clamp.worst_negative = std::min(sd.clamp.worst_negative, e);
        }
    }
    sd.n_modes_kept = n_modes;

    const std::vector<double> wz = numerics::quadrature_weights(wk.z_grid());
    for (std::size_t i = 0; i < n_modes; ++i) {
        const double e = std::max(0.0, sd.raw_operator_eigenvalues[i]);
        sd.operator_eigenvalues.push_back(e);
        sd.lambdas.push_back(e * e);

        const Eigen::VectorXd phi = eig.vectors.col(static_cast<Eigen::Index>(i)).cwiseQuotient(root);
        sd.temporal_modes.emplace_back(sd.t_grid, std::vector<double>(phi.data(), phi.data() + phi.size()));

        const double lambda = e * e;
        if (lambda > kSpatialModeThreshold && sd.spatial_modes.size() == i) {
            Eigen::VectorXd weighted = phi;
            for (std::size_t m = 0; m < n; ++m) weighted(static_cast<Eigen::Index>(m)) *= wt[m];
            const Eigen::VectorXd g = std::pow(4.0 * lambda, -0.25) * (wk.values() * weighted);
            sd.spatial_modes.emplace_back(sd.z_grid, std::vector<double>(g.data(), g.data() + g.size()));
        }
    }
    return sd;
}

kernels::CycleKernel reconstruct(const SchmidtDecomposition& sd, std::size_t n) {
    if (n > sd.n_modes_kept) throw DomainError("reconstruct: more modes than were kept");
    const auto size = static_cast<Eigen::Index>(sd.t_grid.count());
    Eigen::MatrixXd modes(size, static_cast<Eigen::Index>(n));
    Eigen::VectorXd weights(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        modes.col(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Eigen::VectorXd>(sd.temporal_modes[i].values.data(), size);
        weights(static_cast<Eigen::Index>(i)) = sd.operator_eigenvalues[i];
    }
    Eigen::MatrixXd values = modes * weights.asDiagonal() * modes.transpose();
    return {sd.t_grid, std::move(values)};
}

std::complex<double> mode_spectrum(const SchmidtDecomposition& sd, std::size_t i, double omega) {
    if (i >= sd.n_modes_kept) throw DomainError("mode_spectrum: mode index out of range");
    return numerics::spectral_projection(sd.temporal_modes[i], omega);
}

OrthonormalityResiduals orthonormality(const SchmidtDecomposition& sd, double spatial_threshold) {
    OrthonormalityResiduals r;
    residuals(sd.temporal_modes, sd.temporal_modes.size(), r.temporal_off_diagonal, r.temporal_diagonal);
    std::size_t spatial = 0;
    while (spatial < sd.spatial_modes.size() && sd.lambdas[spatial] > spatial_threshold) ++spatial;
    residuals(sd.spatial_modes, spatial, r.spatial_off_diagonal, r.spatial_diagonal);
    return r;
}

double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double ref = b.norm();
    const double diff = (a - b).norm();
    if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / ref;
}

}  // namespace qmem::schmidt
