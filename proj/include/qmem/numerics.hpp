#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "qmem/errors.hpp"

/**
 * Numerical building blocks shared by every other module: uniform grids,
 * sampled functions, the zero-order Bessel function, composite quadrature,
 * projection onto the discrete frequency scale and the dense symmetric
 * eigensolver.
 */
namespace qmem::numerics {

inline constexpr double kPi = 3.14159265358979323846;

/// Uniformly spaced samples start + j * step, j = 0 .. count-1.
class UniformGrid {
public:
    UniformGrid(double start, double stop, std::size_t count);

    double start() const { return start_; }
    double stop() const { return stop_; }
    std::size_t count() const { return count_; }
    double step() const { return step_; }
    double length() const { return stop_ - start_; }

    double operator[](std::size_t j) const { return start_ + static_cast<double>(j) * step_; }
    std::vector<double> samples() const;

    bool operator==(const UniformGrid& other) const = default;

private:
    double start_;
    double stop_;
    std::size_t count_;
    double step_;
};

struct SampledFunction1D {
    SampledFunction1D(UniformGrid grid, std::vector<double> values);

    UniformGrid grid;
    std::vector<double> values;
};

struct ComplexSampledFunction1D {
    ComplexSampledFunction1D(UniformGrid grid, std::vector<std::complex<double>> values);

    UniformGrid grid;
    std::vector<std::complex<double>> values;
};

/// Row index follows `rows`, column index follows `cols`.
struct SampledFunction2D {
    SampledFunction2D(UniformGrid rows, UniformGrid cols, Eigen::MatrixXd values);

    UniformGrid rows;
    UniformGrid cols;
    Eigen::MatrixXd values;
};

/// Bessel function of the first kind, order zero. Absolute error below
/// 1e-12 on [0, 1e3]. Non-finite input raises DomainError.
double bessel_j0(double x);

/// Quadrature weights for `count` equally spaced nodes with spacing `step`:
/// composite Simpson for odd counts, Simpson with a 3/8 end panel (mirrored
/// and averaged, so the weights are symmetric) for even counts >= 4, and
/// the trapezoid rule for two nodes.
std::vector<double> quadrature_weights(std::size_t count, double step);
std::vector<double> quadrature_weights(const UniformGrid& grid);

double integrate(std::span<const double> values, double step);
std::complex<double> integrate(std::span<const std::complex<double>> values, double step);
double integrate(const SampledFunction1D& f);

/// 2*pi / period.
double grain(double period);

/// Integer n with argument == n * grain; DomainError if the argument is off
/// the discrete scale by more than 1e-9 of a grain.
long grain_index(double argument, double grain_size);

/// (1/sqrt(T)) * integral_0^T f(t) exp(i omega t) dt for f sampled on [0, T].
/// omega must be an integer multiple of 2*pi/T.
std::complex<double> spectral_projection(const SampledFunction1D& f, double omega);

struct SymmetricEigenResult {
    Eigen::VectorXd values;   ///< descending
    Eigen::MatrixXd vectors;  ///< column i pairs with values[i]; orthonormal
    double asymmetry = 0.0;   ///< max|M - M^T| / max|M| of the input
};

/// Dense symmetric eigen-decomposition. The input is symmetrized before
/// solving; asymmetry above 1e-9 * max|M| raises DomainError. Each
/// eigenvector is sign-fixed so that its entry sum is non-negative (exact
/// ties: first significant entry positive).
SymmetricEigenResult eigh_symmetric(const Eigen::MatrixXd& m);

inline constexpr double kSymmetryTolerance = 1e-9;

/// Worker count for parallel loops: QMEM_THREADS if set to a positive
/// integer, otherwise the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) over contiguous static chunks. Each index is
/// handled by exactly one worker, so results written per index do not depend
/// on the thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace qmem::numerics
