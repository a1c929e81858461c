#include "qmem/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmem::source {

using numerics::UniformGrid;

void LaserSource::validate() const {
    if (!std::isfinite(p) || p < -1.0) throw DomainError("LaserSource: p must be >= -1");
    if (!std::isfinite(kappa) || !(kappa > 0.0)) throw DomainError("LaserSource: kappa must be > 0");
    if (!std::isfinite(mu) || mu < 0.0 || mu >= 1.0) {
        throw DomainError("LaserSource: mu must lie in [0, 1)");
    }
}

double correlation_rate(const LaserSource& src) { return src.kappa * (1.0 - 0.5 * src.mu); }

double input_autocorrelation(const LaserSource& src, double t, double t_prime, double write_time) {
    src.validate();
    if (!(write_time > 0.0)) throw DomainError("input_autocorrelation: T_W must be positive");
    auto inside = [&](double s) { return s >= 0.0 && s <= write_time; };
    if (!inside(t) || !inside(t_prime)) return 0.0;
    const double rate = correlation_rate(src);
    return src.p / 8.0 * src.kappa * (1.0 - src.mu) / (1.0 - 0.5 * src.mu) *
           std::exp(-rate * std::fabs(t - t_prime));
}

double input_spectrum(const LaserSource& src, double omega) {
    src.validate();
    const double rate = correlation_rate(src);
    const double k2 = src.kappa * src.kappa;
    const double value = 1.0 + src.p * k2 * (1.0 - src.mu) / (rate * rate + omega * omega);
    // Zero is reached only by perfect squeezing (p = -1, mu = 0, omega = 0).
    if (!(value >= -1e-12)) {
        throw DomainError("input_spectrum: negative variance, parameters out of range");
    }
    return std::max(value, 0.0);
}

double noise_coefficient(const LaserSource& src) {
    src.validate();
    const double half = 1.0 - 0.5 * src.mu;
    return src.p * (1.0 - src.mu) / (half * half);
}

ConjugateNoise conjugate_noise_coefficient(const LaserSource& src) {
    const double n = noise_coefficient(src);
    if (!(1.0 + n > 0.0)) return {0.0, false};
    return {1.0 / (1.0 + n) - 1.0, true};
}

namespace {

// 1 - exp(-x) (1 + x), accurate for small x.
double one_minus_exp_one_plus(double x) {
    if (x < 1e-3) {
        // sum_{k>=2} (-1)^k (k-1) x^k / k!
        double sum = 0.0;
        double power_over_factorial = x * x / 2.0;
        for (int k = 2; k < 12; ++k) {
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * (k - 1) * power_over_factorial;
            power_over_factorial *= x / (k + 1);
        }
        return sum;
    }
    return -std::expm1(-x) - x * std::exp(-x);
}

Eigen::MatrixXd exponential_matrix(const UniformGrid& grid, double rate) {
    const std::size_t n = grid.count();
    const double h = grid.step();
    const double x = rate * h;
    const double e0 = -std::expm1(-x) / rate;
    const double e1 = h * one_minus_exp_one_plus(x) / (x * x);
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            // Interval [t_i, t_{i+1}]; nearest end to t_j is `near`.
            const bool right = i >= j;
            const std::size_t near = right ? i : i + 1;
            const std::size_t far = right ? i + 1 : i;
            const double d0 = std::fabs(static_cast<double>(near) - static_cast<double>(j)) * h;
            const double decay = std::exp(-rate * d0);
            k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(near)) += decay * (e0 - e1);
            k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(far)) += decay * e1;
        }
    }
    return k;
}

}  // namespace

CorrelationForm::CorrelationForm(const LaserSource& src, const UniformGrid& grid, SourceMode mode)
    : src_(src), grid_(grid), mode_(mode), weights_(numerics::quadrature_weights(grid)) {
    src_.validate();
    if (mode_ == SourceMode::white_noise) {
        amplitude_ = noise_coefficient(src_) / 4.0;
    } else {
        amplitude_ = src_.p / 8.0 * src_.kappa * (1.0 - src_.mu) / (1.0 - 0.5 * src_.mu);
        exponential_ = exponential_matrix(grid_, correlation_rate(src_));
    }
}

std::complex<double> CorrelationForm::bilinear(std::span<const std::complex<double>> f,
                                               std::span<const std::complex<double>> g) const {
    const std::size_t n = grid_.count();
    if (f.size() != n || g.size() != n) throw DomainError("CorrelationForm: grid mismatch");
    std::complex<double> sum = 0.0;
    if (mode_ == SourceMode::white_noise) {
        for (std::size_t j = 0; j < n; ++j) sum += weights_[j] * f[j] * std::conj(g[j]);
        return amplitude_ * sum;
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> smoothed = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            smoothed += exponential_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) *
                        std::conj(g[i]);
        }
        sum += weights_[j] * f[j] * smoothed;
    }
    return amplitude_ * sum;
}

double CorrelationForm::bilinear(std::span<const double> f, std::span<const double> g) const {
    std::vector<std::complex<double>> fc(f.begin(), f.end());
    std::vector<std::complex<double>> gc(g.begin(), g.end());
    return bilinear(fc, gc).real();
}

double CorrelationForm::quadratic(std::span<const std::complex<double>> f) const {
    return bilinear(f, f).real();
}

}  // namespace qmem::source
