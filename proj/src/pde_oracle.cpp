#include <algorithm>
#include <cmath>
#include <string>

#include "qmem/kernels.hpp"

namespace qmem::kernels {

namespace {

// Four-point Lagrange interpolation on a uniform grid.
double interpolate_cubic(const UniformGrid& grid, std::span<const double> v, double x) {
    const std::size_t n = grid.count();
    const double u = (x - grid.start()) / grid.step();
    long base = static_cast<long>(std::floor(u)) - 1;
    base = std::clamp(base, 0L, static_cast<long>(n) - 4);
    if (n < 4) throw DomainError("interpolate_cubic: need at least 4 samples");
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
        double basis = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            basis *= (u - static_cast<double>(base + b)) / static_cast<double>(a - b);
        }
        sum += basis * v[static_cast<std::size_t>(base + a)];
    }
    return sum;
}

struct March {
    std::vector<double> b_final;  // b+(z_j, T) on the march grid
};

// Trapezoid in z and t; each cell couples (a, c, b) through one scalar solve.
March march(const UniformGrid& zg, const UniformGrid& tg, const std::vector<double>& a_in) {
    const std::size_t nz = zg.count();
    const std::size_t nt = tg.count();
    const double dz = zg.step();
    const double dt = tg.step();

    std::vector<double> a(a_in);  // a(z_{j-1}, t_k), then overwritten with row j
    std::vector<double> c(nt, 0.0);
    std::vector<double> b(nt, 0.0);
    std::vector<double> b_final(nz);

    // z = 0: a is prescribed.
    for (std::size_t k = 1; k < nt; ++k) {
        const double beta = b[k - 1] - 0.5 * dt * c[k - 1];
        c[k] = (c[k - 1] + 0.5 * dt * (a[k - 1] + b[k - 1] + a[k] + beta)) / (1.0 + 0.25 * dt * dt);
        b[k] = beta - 0.5 * dt * c[k];
    }
    b_final[0] = b[nt - 1];

    const double denom = 1.0 + 0.5 * dt * 0.25 * dz + 0.25 * dt * dt;
    std::vector<double> a_row(nt);
    std::vector<double> c_row(nt);
    std::vector<double> b_row(nt);
    for (std::size_t j = 1; j < nz; ++j) {
        a_row[0] = a[0] - 0.25 * dz * c[0];
        c_row[0] = 0.0;
        b_row[0] = 0.0;
        for (std::size_t k = 1; k < nt; ++k) {
            const double alpha = a[k] - 0.25 * dz * c[k];
            const double beta = b_row[k - 1] - 0.5 * dt * c_row[k - 1];
            c_row[k] = (c_row[k - 1] + 0.5 * dt * (alpha + beta + a_row[k - 1] + b_row[k - 1])) / denom;
            a_row[k] = alpha - 0.25 * dz * c_row[k];
            b_row[k] = beta - 0.5 * dt * c_row[k];
        }
        std::swap(a, a_row);
        std::swap(c, c_row);
        std::swap(b, b_row);
        b_final[j] = b[nt - 1];
    }
    return {std::move(b_final)};
}

std::vector<double> resample(const UniformGrid& from, const std::vector<double>& v, const UniformGrid& to) {
    std::vector<double> out(to.count());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = interpolate_cubic(from, v, to[j]);
    return out;
}

double relative_change(const std::vector<double>& fine, const std::vector<double>& coarse,
                       const std::vector<double>& w) {
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        diff += w[j] * (fine[j] - coarse[j]) * (fine[j] - coarse[j]);
        ref += w[j] * fine[j] * fine[j];
    }
    return ref == 0.0 ? 0.0 : std::sqrt(diff / ref);
}

}  // namespace

PdeResult pde_oracle_write(const MemoryConfig& cfg, const numerics::SampledFunction1D& input,
                           const PdeOptions& options,
                           const std::optional<SpinWaveProfile>& initial_b_minus) {
    cfg.validate(GridPolicy::diagnostic);
    const UniformGrid out_z = cfg.z_grid();
    const UniformGrid out_t = cfg.t_grid();
    if (!(input.grid == out_t)) throw DomainError("pde_oracle_write: pulse not on the configured t-grid");
    if (initial_b_minus && !(initial_b_minus->z_grid == out_z)) {
        throw DomainError("pde_oracle_write: b- profile not on the configured z-grid");
    }

    const std::vector<double> wz = numerics::quadrature_weights(out_z);
    const std::vector<double> wt = numerics::quadrature_weights(out_t);
    double input_norm = 0.0;
    for (std::size_t m = 0; m < wt.size(); ++m) input_norm += wt[m] * input.values[m] * input.values[m];
    input_norm = std::sqrt(input_norm);

    const double scale = options.apply_scale ? kPdeAmplitudeScale : 1.0;
    std::size_t n = 65;
    std::vector<double> previous;
    std::vector<double> current;
    double change = 0.0;
    std::size_t used = n;
    for (int level = 0; level <= options.max_refinements; ++level, n = 2 * n - 1) {
        const UniformGrid zg(0.0, cfg.length, n);
        const UniformGrid tg(0.0, cfg.write_time, n);
        std::vector<double> a_in(n);
        for (std::size_t k = 0; k < n; ++k) a_in[k] = interpolate_cubic(out_t, input.values, tg[k]);
        const March result = march(zg, tg, a_in);
        current = resample(zg, result.b_final, out_z);
        used = n;

        double norm = 0.0;
        for (std::size_t j = 0; j < wz.size(); ++j) norm += wz[j] * current[j] * current[j];
        norm = std::sqrt(norm);
        if (!std::isfinite(norm) || norm > 10.0 * std::sqrt(2.0) * input_norm) {
            throw NumericalQualityError("pde_oracle_write: spin-wave norm grew beyond 10x the input bound");
        }
        if (!previous.empty()) {
            change = relative_change(current, previous, wz);
            if (change < options.tolerance) break;
        }
        previous = current;
    }
    if (change >= options.tolerance) {
        throw NumericalQualityError("pde_oracle_write: no self-consistency after " +
                                    std::to_string(options.max_refinements) + " halvings");
    }

    std::vector<std::complex<double>> b_plus(current.size());
    for (std::size_t j = 0; j < current.size(); ++j) b_plus[j] = scale * current[j];
    std::vector<std::complex<double>> b_minus =
        initial_b_minus ? initial_b_minus->values : std::vector<std::complex<double>>(out_z.count());
    PdeResult out{SpinWaveProfile(out_z, std::move(b_plus)), SpinWaveProfile(out_z, std::move(b_minus))};
    out.n_z = used;
    out.n_t = used;
    out.self_consistency = change;
    return out;
}

}  // namespace qmem::kernels
