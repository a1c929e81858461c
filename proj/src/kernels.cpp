#include "qmem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qmem::kernels {

using numerics::bessel_j0;
using numerics::quadrature_weights;

namespace {

bool is_power_of_two_plus_one(std::size_t n) {
    if (n < 3) return false;
    const std::size_t m = n - 1;
    return (m & (m - 1)) == 0;
}

void check_grid_count(std::size_t n, GridPolicy policy, const char* name) {
    const std::size_t minimum = policy == GridPolicy::production ? 129 : 5;
    if (n < minimum || !is_power_of_two_plus_one(n)) {
        throw DomainError(std::string("MemoryConfig: ") + name + " must be 2^k + 1 and >= " +
                          std::to_string(minimum));
    }
}

// Relative slack for coordinates that land on the end of a range through
// floating-point arithmetic.
constexpr double kRangeSlack = 1e-12;

double clamp_into(double x, double hi, const char* what) {
    if (!std::isfinite(x) || x < -kRangeSlack * hi || x > hi * (1.0 + kRangeSlack)) {
        throw DomainError(std::string("write kernel: ") + what + " out of range");
    }
    return std::min(std::max(x, 0.0), hi);
}

std::size_t inner_intervals(double t, double step) {
    const long m = std::lround(t / step);
    return m < 1 ? 1 : static_cast<std::size_t>(m);
}

template <typename Phase>
auto inner_integral(double z, double t, double step, Phase phase) {
    using Value = decltype(phase(0.0));
    const std::size_t m = inner_intervals(t, step);
    const double h = t / static_cast<double>(m);
    auto integrand = [&](double s) {
        return phase(s) * (bessel_j0(std::sqrt(z * s)) * bessel_j0(std::sqrt(z * (t - s))));
    };
    if (m == 1) {
        // Single interval: Simpson with an off-grid midpoint.
        return Value(h / 6.0) * (integrand(0.0) + Value(4.0) * integrand(0.5 * t) + integrand(t));
    }
    const std::vector<double> w = quadrature_weights(m + 1, h);
    Value sum{};
    for (std::size_t k = 0; k <= m; ++k) sum += Value(w[k]) * integrand(static_cast<double>(k) * h);
    return sum;
}

}  // namespace

void MemoryConfig::validate(GridPolicy policy) const {
    if (!std::isfinite(length) || !(length > 0.0)) throw DomainError("MemoryConfig: L must be > 0");
    if (!std::isfinite(write_time) || !(write_time > 0.0)) {
        throw DomainError("MemoryConfig: T_W must be > 0");
    }
    if (!std::isfinite(read_time) || std::fabs(read_time - write_time) > 1e-12 * write_time) {
        throw DomainError("MemoryConfig: T_R must equal T_W");
    }
    if (!std::isfinite(readout_delay) || readout_delay < 10.0 * read_time) {
        throw DomainError("MemoryConfig: readout delay must be at least 10 T_R");
    }
    check_grid_count(n_z, policy, "n_z");
    check_grid_count(n_t, policy, "n_t");
}

MemoryConfig MemoryConfig::make(double length, double write_time, std::size_t n) {
    MemoryConfig cfg;
    cfg.length = length;
    cfg.write_time = write_time;
    cfg.read_time = write_time;
    cfg.n_z = n;
    cfg.n_t = n;
    cfg.readout_delay = std::max(100.0, 10.0 * write_time);
    return cfg;
}

WriteKernel::WriteKernel(UniformGrid z_grid, UniformGrid t_grid, Eigen::MatrixXd values)
    : z_grid_(z_grid), t_grid_(t_grid), values_(std::move(values)) {
    if (values_.rows() != static_cast<Eigen::Index>(z_grid_.count()) ||
        values_.cols() != static_cast<Eigen::Index>(t_grid_.count())) {
        throw DomainError("WriteKernel: value matrix does not match the grids");
    }
    if (!values_.allFinite()) throw DomainError("WriteKernel: non-finite value");
}

CycleKernel::CycleKernel(UniformGrid t_grid, Eigen::MatrixXd values, double asymmetry)
    : t_grid_(t_grid), values_(std::move(values)), asymmetry_(asymmetry) {
    const auto n = static_cast<Eigen::Index>(t_grid_.count());
    if (values_.rows() != n || values_.cols() != n) {
        throw DomainError("CycleKernel: value matrix does not match the grid");
    }
    if (!values_.allFinite()) throw DomainError("CycleKernel: non-finite value");
}

SpinWaveProfile::SpinWaveProfile(UniformGrid grid, std::vector<std::complex<double>> v)
    : z_grid(grid), values(std::move(v)) {
    if (values.size() != z_grid.count()) throw DomainError("SpinWaveProfile: size mismatch");
    for (const auto& x : values) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            throw DomainError("SpinWaveProfile: non-finite value");
        }
    }
}

double write_kernel_point(double z, double t, const MemoryConfig& cfg) {
    z = clamp_into(z, cfg.length, "z");
    t = clamp_into(t, cfg.write_time, "t");
    if (t == 0.0) return 0.0;
    return inner_integral(z, t, cfg.t_grid().step(), [t](double s) { return std::cos(t - 2.0 * s); });
}

std::complex<double> write_kernel_point_complex(double z, double t, const MemoryConfig& cfg) {
    z = clamp_into(z, cfg.length, "z");
    t = clamp_into(t, cfg.write_time, "t");
    if (t == 0.0) return 0.0;
    return inner_integral(z, t, cfg.t_grid().step(), [t](double s) {
        return std::exp(std::complex<double>(0.0, -s)) * std::exp(std::complex<double>(0.0, t - s));
    });
}

std::vector<double> write_kernel_row(double z, const MemoryConfig& cfg) {
    const UniformGrid tg = cfg.t_grid();
    std::vector<double> row(tg.count());
    for (std::size_t m = 0; m < row.size(); ++m) row[m] = write_kernel_point(z, tg[m], cfg);
    return row;
}

WriteKernel sample_write_kernel(const MemoryConfig& cfg, GridPolicy policy) {
    cfg.validate(policy);
    const UniformGrid zg = cfg.z_grid();
    const UniformGrid tg = cfg.t_grid();
    const std::size_t nz = zg.count();
    const std::size_t nt = tg.count();
    const double h = tg.step();

    // J0(sqrt(z_j t_k)) for every grid pair; the inner nodes coincide with the t-grid.
    Eigen::MatrixXd bessel(static_cast<Eigen::Index>(nz), static_cast<Eigen::Index>(nt));
    numerics::parallel_for(nz, [&](std::size_t j) {
        for (std::size_t k = 0; k < nt; ++k) {
            bessel(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                bessel_j0(std::sqrt(zg[j] * tg[k]));
        }
    });
    // cos(t_m - 2 t_k) = cos((m - 2k) h) depends only on |m - 2k| < nt.
    std::vector<double> cosine(nt);
    for (std::size_t d = 0; d < nt; ++d) cosine[d] = std::cos(static_cast<double>(d) * h);
    std::vector<double> midpoint(nz);
    for (std::size_t j = 0; j < nz; ++j) midpoint[j] = bessel_j0(std::sqrt(zg[j] * 0.5 * h));

    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nz), static_cast<Eigen::Index>(nt));
    numerics::parallel_for(nt, [&](std::size_t m) {
        const auto col = static_cast<Eigen::Index>(m);
        if (m == 0) return;
        if (m == 1) {
            for (std::size_t j = 0; j < nz; ++j) {
                const double b1 = bessel(static_cast<Eigen::Index>(j), 1);
                const double mid = midpoint[j];
                values(static_cast<Eigen::Index>(j), col) =
                    h / 6.0 * (2.0 * cosine[1] * b1 + 4.0 * mid * mid);
            }
            return;
        }
        const std::vector<double> w = quadrature_weights(m + 1, h);
        for (std::size_t j = 0; j < nz; ++j) {
            const auto row = static_cast<Eigen::Index>(j);
            double sum = 0.0;
            for (std::size_t k = 0; k <= m; ++k) {
                const std::size_t d = m >= 2 * k ? m - 2 * k : 2 * k - m;
                sum += w[k] * cosine[d] * bessel(row, static_cast<Eigen::Index>(k)) *
                       bessel(row, static_cast<Eigen::Index>(m - k));
            }
            values(row, col) = sum;
        }
    });
    return {zg, tg, std::move(values)};
}

CycleKernel cycle_kernel(const WriteKernel& wk) {
    const std::vector<double> wz = quadrature_weights(wk.z_grid());
    const Eigen::Map<const Eigen::VectorXd> weights(wz.data(), static_cast<Eigen::Index>(wz.size()));
    const Eigen::MatrixXd weighted = weights.asDiagonal() * wk.values();
    Eigen::MatrixXd gram = 0.5 * (wk.values().transpose() * weighted);

    const double scale = gram.cwiseAbs().maxCoeff();
    const double asymmetry = scale > 0.0 ? (gram - gram.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
    if (asymmetry > 1e-7) {
        throw NumericalQualityError("cycle kernel: asymmetry " + std::to_string(asymmetry) +
                                    " exceeds 1e-7 before symmetrization");
    }
    Eigen::MatrixXd symmetric = 0.5 * (gram + gram.transpose());
    return {wk.t_grid(), std::move(symmetric), asymmetry};
}

numerics::ComplexSampledFunction1D spatial_spectrum_kernel(const WriteKernel& wk, double k) {
    const UniformGrid& zg = wk.z_grid();
    numerics::grain_index(k, numerics::grain(zg.length()));
    const std::vector<double> wz = quadrature_weights(zg);
    std::vector<std::complex<double>> phase(zg.count());
    for (std::size_t j = 0; j < zg.count(); ++j) {
        phase[j] = wz[j] * std::exp(std::complex<double>(0.0, -k * zg[j]));
    }
    const double norm = 1.0 / std::sqrt(zg.length());
    std::vector<std::complex<double>> out(wk.t_grid().count());
    for (std::size_t m = 0; m < out.size(); ++m) {
        std::complex<double> sum = 0.0;
        for (std::size_t j = 0; j < zg.count(); ++j) sum += phase[j] * wk(j, m);
        out[m] = norm * sum;
    }
    return {wk.t_grid(), std::move(out)};
}

SpinWaveProfile write_spin_wave(const WriteKernel& wk, const numerics::SampledFunction1D& input,
                                SpinChannel channel) {
    if (!(input.grid == wk.t_grid())) throw DomainError("write_spin_wave: pulse not on the kernel t-grid");
    const double prefactor = channel == SpinChannel::symmetric ? -1.0 / std::sqrt(2.0) : -0.5;
    const std::size_t nt = wk.t_grid().count();
    const std::vector<double> wt = quadrature_weights(wk.t_grid());
    // a_in(T - t_m) sits at index nt-1-m on the same grid.
    Eigen::VectorXd reversed(static_cast<Eigen::Index>(nt));
    for (std::size_t m = 0; m < nt; ++m) reversed(static_cast<Eigen::Index>(m)) = wt[m] * input.values[nt - 1 - m];
    const Eigen::VectorXd b = prefactor * (wk.values() * reversed);
    return {wk.z_grid(), std::vector<std::complex<double>>(b.data(), b.data() + b.size())};
}

double relative_l2(const SpinWaveProfile& a, const SpinWaveProfile& b) {
    if (!(a.z_grid == b.z_grid)) throw DomainError("relative_l2: grid mismatch");
    const std::vector<double> w = quadrature_weights(a.z_grid);
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        diff += w[j] * std::norm(a.values[j] - b.values[j]);
        ref += w[j] * std::norm(b.values[j]);
    }
    if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(diff / ref);
}

numerics::SampledFunction1D reference_pulse(const MemoryConfig& cfg) {
    const UniformGrid tg = cfg.t_grid();
    const double centre = 0.5 * cfg.write_time;
    const double width = cfg.write_time / 8.0;
    std::vector<double> v(tg.count());
    for (std::size_t m = 0; m < v.size(); ++m) {
        const double x = (tg[m] - centre) / width;
        v[m] = std::exp(-0.5 * x * x);
    }
    return {tg, std::move(v)};
}

}  // namespace qmem::kernels
