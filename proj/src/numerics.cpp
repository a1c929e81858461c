#include "qmem/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace qmem::numerics {

UniformGrid::UniformGrid(double start, double stop, std::size_t count)
    : start_(start), stop_(stop), count_(count), step_(0.0) {
    if (!std::isfinite(start) || !std::isfinite(stop)) {
        throw DomainError("UniformGrid: bounds must be finite");
    }
    if (count < 2) {
        throw DomainError("UniformGrid: count must be at least 2");
    }
    step_ = (stop - start) / static_cast<double>(count - 1);
    if (!(step_ > 0.0)) {
        throw DomainError("UniformGrid: stop must exceed start");
    }
}

std::vector<double> UniformGrid::samples() const {
    std::vector<double> out(count_);
    for (std::size_t j = 0; j < count_; ++j) out[j] = (*this)[j];
    return out;
}

namespace {

void require_finite(std::span<const double> values, const char* who) {
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError(std::string(who) + ": non-finite sample");
    }
}

}  // namespace

SampledFunction1D::SampledFunction1D(UniformGrid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.count()) {
        throw DomainError("SampledFunction1D: value count does not match grid");
    }
    require_finite(values, "SampledFunction1D");
}

ComplexSampledFunction1D::ComplexSampledFunction1D(UniformGrid g,
                                                   std::vector<std::complex<double>> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.count()) {
        throw DomainError("ComplexSampledFunction1D: value count does not match grid");
    }
    for (const auto& c : values) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw DomainError("ComplexSampledFunction1D: non-finite sample");
        }
    }
}

SampledFunction2D::SampledFunction2D(UniformGrid r, UniformGrid c, Eigen::MatrixXd v)
    : rows(r), cols(c), values(std::move(v)) {
    if (static_cast<std::size_t>(values.rows()) != rows.count() ||
        static_cast<std::size_t>(values.cols()) != cols.count()) {
        throw DomainError("SampledFunction2D: matrix shape does not match grids");
    }
    if (!values.allFinite()) throw DomainError("SampledFunction2D: non-finite sample");
}

// ---------------------------------------------------------------------------
// Bessel J0

namespace {

double j0_series(double x) {
    const long double y = -0.25L * static_cast<long double>(x) * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= y / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-24L) break;
    }
    return static_cast<double>(sum);
}

// Miller's backward recurrence normalized by J0 + 2 (J2 + J4 + ...) = 1.
double j0_recurrence(double x) {
    int start = static_cast<int>(x + 30.0 + 10.0 * std::cbrt(x));
    if (start % 2 != 0) ++start;
    const long double lx = x;
    long double next = 0.0L;      // J_{k+1}
    long double current = 1e-300L;  // J_k
    long double even_sum = 0.0L;
    for (int k = start; k > 0; --k) {
        const long double prev = (2.0L * k / lx) * current - next;  // J_{k-1}
        next = current;
        current = prev;
        if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += current;
    }
    const long double norm = current + 2.0L * even_sum;
    return static_cast<double>(current / norm);
}

double j0_asymptotic(double x) {
    double p = 0.0;
    double q = 0.0;
    double term = 1.0;
    double previous = 2.0;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            const double odd = 2.0 * k - 1.0;
            term *= -(odd * odd) / (8.0 * k * x);
        }
        if (std::fabs(term) > std::fabs(previous)) break;
        // Pattern of signs: P = t0 - t2 + t4 ..., Q = t1 - t3 + ...
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if (std::fabs(term) < 1e-17) break;
        previous = term;
    }
    // cos(x - pi/4) and sin(x - pi/4) without forming x - pi/4.
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double inv_sqrt2 = 0.70710678118654752440;
    const double cos_chi = (c + s) * inv_sqrt2;
    const double sin_chi = (s - c) * inv_sqrt2;
    return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

double bessel_j0(double x) {
    if (!std::isfinite(x)) throw DomainError("bessel_j0: non-finite argument");
    x = std::fabs(x);
    if (x < 12.0) return j0_series(x);
    if (x < 35.0) return j0_recurrence(x);
    return j0_asymptotic(x);
}

// ---------------------------------------------------------------------------
// Quadrature

std::vector<double> quadrature_weights(std::size_t count, double step) {
    if (count < 2) throw DomainError("quadrature: at least two nodes are required");
    std::vector<double> w(count, 0.0);
    if (count == 2) {
        w[0] = w[1] = 0.5 * step;
        return w;
    }
    const std::size_t intervals = count - 1;
    auto add_simpson = [&](std::size_t first, std::size_t last) {
        for (std::size_t j = first; j < last; j += 2) {
            w[j] += step / 3.0;
            w[j + 1] += 4.0 * step / 3.0;
            w[j + 2] += step / 3.0;
        }
    };
    if (intervals % 2 == 0) {
        add_simpson(0, intervals);
        return w;
    }
    const std::size_t tail = intervals - 3;
    add_simpson(0, tail);
    const double e = 3.0 * step / 8.0;
    w[tail] += e;
    w[tail + 1] += 3.0 * e;
    w[tail + 2] += 3.0 * e;
    w[tail + 3] += e;
    std::vector<double> sym(count);
    for (std::size_t j = 0; j < count; ++j) sym[j] = 0.5 * (w[j] + w[count - 1 - j]);
    return sym;
}

std::vector<double> quadrature_weights(const UniformGrid& grid) {
    return quadrature_weights(grid.count(), grid.step());
}

double integrate(std::span<const double> values, double step) {
    const auto w = quadrature_weights(values.size(), step);
    double sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) sum += w[j] * values[j];
    return sum;
}

std::complex<double> integrate(std::span<const std::complex<double>> values, double step) {
    const auto w = quadrature_weights(values.size(), step);
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) sum += w[j] * values[j];
    return sum;
}

double integrate(const SampledFunction1D& f) { return integrate(f.values, f.grid.step()); }

double grain(double period) {
    if (!(period > 0.0)) throw DomainError("grain: period must be positive");
    return 2.0 * kPi / period;
}

long grain_index(double argument, double grain_size) {
    if (!std::isfinite(argument)) throw DomainError("grain_index: non-finite argument");
    const double ratio = argument / grain_size;
    const double n = std::round(ratio);
    if (std::fabs(ratio - n) > 1e-9) {
        throw DomainError("argument " + std::to_string(argument) +
                          " is not on the discrete scale with grain " + std::to_string(grain_size));
    }
    return static_cast<long>(n);
}

std::complex<double> spectral_projection(const SampledFunction1D& f, double omega) {
    const UniformGrid& g = f.grid;
    if (std::fabs(g.start()) > 1e-12 * g.length()) {
        throw DomainError("spectral_projection: function must be sampled on [0, T]");
    }
    const double period = g.length();
    grain_index(omega, grain(period));
    std::vector<std::complex<double>> integrand(g.count());
    for (std::size_t j = 0; j < g.count(); ++j) {
        const double phase = omega * g[j];
        integrand[j] = f.values[j] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return integrate(integrand, g.step()) / std::sqrt(period);
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver

SymmetricEigenResult eigh_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw DomainError("eigh_symmetric: matrix must be square");
    if (m.size() == 0) throw DomainError("eigh_symmetric: empty matrix");
    if (!m.allFinite()) throw DomainError("eigh_symmetric: non-finite entry");

    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    const double relative = scale > 0.0 ? asym / scale : 0.0;
    if (relative > kSymmetryTolerance) {
        throw DomainError("eigh_symmetric: asymmetry " + std::to_string(relative) +
                          " exceeds tolerance");
    }
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalQualityError("eigh_symmetric: eigensolver did not converge");
    }

    const Eigen::Index n = m.rows();
    SymmetricEigenResult out;
    out.asymmetry = relative;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // Eigen returns ascending order.
        const Eigen::Index src = n - 1 - i;
        out.values[i] = solver.eigenvalues()[src];
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        v.normalize();
        const double sum = v.sum();
        const double amax = v.cwiseAbs().maxCoeff();
        double sign = 1.0;
        if (std::fabs(sum) > 1e-12 * amax * std::sqrt(static_cast<double>(n))) {
            sign = sum < 0.0 ? -1.0 : 1.0;
        } else {
            for (Eigen::Index k = 0; k < n; ++k) {
                if (std::fabs(v[k]) > 1e-12 * amax) {
                    sign = v[k] < 0.0 ? -1.0 : 1.0;
                    break;
                }
            }
        }
        out.vectors.col(i) = sign * v;
    }
    return out;
}

std::size_t thread_count() {
    if (const char* env = std::getenv("QMEM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace qmem::numerics
