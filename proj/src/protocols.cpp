#include "qmem/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

namespace qmem::protocols {

using cd = std::complex<double>;
using entanglement::Beam;
using entanglement::Quadrature;
using entanglement::SpectralOperator;
using numerics::UniformGrid;

namespace {

std::vector<cd> spatial_kernel(const MemoryModel& model, long index) {
    const double k = static_cast<double>(index) * numerics::grain(model.config().length);
    return kernels::spatial_spectrum_kernel(model.write_kernel(), k).values;
}

// h_w(t1) = (1/sqrt T) int G(t, t1) exp(i w t) dt: the source weight of the
// retrieved spectral component at w.
std::vector<cd> readout_weight(const MemoryModel& model, long index) {
    const UniformGrid& tg = model.cycle_kernel().t_grid();
    const double omega = static_cast<double>(index) * numerics::grain(tg.length());
    const std::vector<double> w = numerics::quadrature_weights(tg);
    const Eigen::MatrixXd& g = model.cycle_kernel().values();
    std::vector<cd> phase(tg.count());
    for (std::size_t m = 0; m < phase.size(); ++m) phase[m] = w[m] * std::exp(cd(0.0, omega * tg[m]));
    const double norm = 1.0 / std::sqrt(tg.length());
    std::vector<cd> h(tg.count());
    for (std::size_t b = 0; b < h.size(); ++b) {
        cd sum = 0.0;
        for (std::size_t a = 0; a < h.size(); ++a) {
            sum += phase[a] * g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
        h[b] = norm * sum;
    }
    return h;
}

// sum_i lambda_i phi_{i,w} phi_{i,w'} over the kept modes.
cd mode_sum(const MemoryModel& model, long a, long b) {
    const auto& sd = model.schmidt();
    const double grain = numerics::grain(sd.t_grid.length());
    cd sum = 0.0;
    for (std::size_t i = 0; i < sd.n_modes_kept; ++i) {
        sum += sd.lambdas[i] * schmidt::mode_spectrum(sd, i, static_cast<double>(a) * grain) *
               schmidt::mode_spectrum(sd, i, static_cast<double>(b) * grain);
    }
    return sum;
}

// Normally ordered <: dX_w dX_-w :> of the simultaneously read beam.
double simultaneous_normal(const MemoryModel& model, const LaserSource& src, long index, SourceMode mode) {
    if (mode == SourceMode::white_noise) {
        return source::noise_coefficient(src) / 4.0 * mode_sum(model, index, -index).real();
    }
    const source::CorrelationForm form(src, model.cycle_kernel().t_grid(), mode);
    return form.quadratic(readout_weight(model, index));
}

double spin_normal(const MemoryModel& model, const source::CorrelationForm& form, long index) {
    return form.quadratic(spatial_kernel(model, index)) / 4.0;
}

double successive_normal(const MemoryModel& model, const LaserSource& src, long index, SourceMode mode) {
    if (mode == SourceMode::white_noise) {
        return source::noise_coefficient(src) / 2.0 * mode_sum(model, index, -index).real();
    }
    return 2.0 * simultaneous_normal(model, src, index, mode);
}

long index_of(double argument, double grain) { return numerics::grain_index(argument, grain); }

SpectralCurve make_curve(std::string name, Axis axis, double grain, const std::vector<long>& indices,
                         const std::vector<double>& values) {
    SpectralCurve c{std::move(name), axis, grain, {}};
    for (std::size_t i = 0; i < indices.size(); ++i) {
        c.points.push_back({indices[i], static_cast<double>(indices[i]) * grain, values[i]});
    }
    return c;
}

std::vector<double> evaluate(const std::vector<long>& indices, const std::function<double(long)>& f) {
    std::vector<double> out(indices.size());
    numerics::parallel_for(indices.size(), [&](std::size_t i) { out[i] = f(indices[i]); });
    return out;
}

double conjugate_coefficient(const LaserSource& src, bool& defined) {
    const source::ConjugateNoise y = source::conjugate_noise_coefficient(src);
    defined = y.defined;
    return y.coefficient;
}

// Fills X moments from `normal_x(a, b)` and Y moments from `normal_y(a, b)`,
// where a, b are grain indices and the value is <: dO_a dO_b :>, the same for
// every beam pair. Vacuum is added on the diagonal of each beam.
void fill_table(entanglement::QuadratureSecondMoments& table, long half, bool second_beam,
                const std::function<cd(long, long)>& normal_x, const std::function<cd(long, long)>& normal_y) {
    std::vector<Beam> beams{Beam::first};
    if (second_beam) beams.push_back(Beam::second);
    for (long a = -half; a <= half; ++a) {
        for (long b = a; b <= half; ++b) {
            const cd x = normal_x(a, b);
            const cd y = normal_y(a, b);
            for (Beam p : beams) {
                for (Beam q : beams) {
                    const cd vacuum = (p == q && a == -b) ? entanglement::kVacuumVariance : 0.0;
                    table.set_moment({p, Quadrature::x, a}, {q, Quadrature::x, b}, vacuum + x);
                    table.set_moment({p, Quadrature::y, a}, {q, Quadrature::y, b}, vacuum + y);
                }
            }
        }
    }
}

double percent_below_one(double v) { return (1.0 - v) * 100.0; }

}  // namespace

MemoryModel::MemoryModel(const MemoryConfig& cfg, std::size_t n_modes, kernels::GridPolicy policy)
    : cfg_(cfg),
      write_(kernels::sample_write_kernel(cfg, policy)),
      cycle_(kernels::cycle_kernel(write_)),
      schmidt_(schmidt::decompose(cycle_, write_, n_modes)) {}

double SpectralCurve::at(long index) const {
    for (const auto& p : points) {
        if (p.index == index) return p.value;
    }
    throw DomainError("SpectralCurve: index " + std::to_string(index) + " not sampled");
}

std::vector<long> centered_indices(long half) {
    std::vector<long> out;
    for (long n = -half; n <= half; ++n) out.push_back(n);
    return out;
}

SpectralCurve spin_wave_spectrum(const MemoryModel& model, const LaserSource& src, const CurveOptions& options) {
    const source::CorrelationForm form(src, model.write_kernel().t_grid(), options.mode);
    const std::vector<double> values =
        evaluate(options.indices, [&](long n) { return 1.0 + 4.0 * spin_normal(model, form, n); });
    return make_curve("spin-wave", Axis::wavenumber, numerics::grain(model.config().length), options.indices,
                      values);
}

double spin_wave_duan(const MemoryModel& model, const LaserSource& src, double k, SourceMode mode) {
    const long n = index_of(k, numerics::grain(model.config().length));
    const source::CorrelationForm form(src, model.write_kernel().t_grid(), mode);
    return 1.0 + 4.0 * spin_normal(model, form, n);
}

double spin_wave_covariance(const MemoryModel& model, const LaserSource& src, double z, double z_prime,
                            SourceMode mode) {
    const auto& cfg = model.config();
    const std::vector<double> gz = kernels::write_kernel_row(z, cfg);
    const std::vector<double> gzp = kernels::write_kernel_row(z_prime, cfg);
    const UniformGrid tg = cfg.t_grid();
    if (mode == SourceMode::white_noise) {
        // The exponential on t' < t collapses to a delta of half weight on the
        // boundary; the mirrored term restores the other half.
        const double strength = source::noise_coefficient(src) / 32.0;
        std::vector<double> forward(gz.size());
        std::vector<double> mirrored(gz.size());
        for (std::size_t m = 0; m < gz.size(); ++m) {
            forward[m] = gz[m] * gzp[m];
            mirrored[m] = gzp[m] * gz[m];
        }
        return strength * numerics::integrate(forward, tg.step()) +
               strength * numerics::integrate(mirrored, tg.step());
    }
    const source::CorrelationForm form(src, tg, mode);
    return form.bilinear(gz, gzp) / 4.0;
}

SpectralCurve simultaneous_readout_spectrum(const MemoryModel& model, const LaserSource& src,
                                            const CurveOptions& options) {
    const std::vector<double> values = evaluate(options.indices, [&](long n) {
        if (options.mode == SourceMode::white_noise) {
            return 1.0 + source::noise_coefficient(src) * mode_sum(model, n, -n).real();
        }
        return 1.0 + 4.0 * simultaneous_normal(model, src, n, options.mode);
    });
    return make_curve("read-simultaneous", Axis::frequency, numerics::grain(model.config().write_time),
                      options.indices, values);
}

SpectralCurve successive_readout_spectrum(const MemoryModel& model, const LaserSource& src,
                                          const CurveOptions& options) {
    const std::vector<double> values = evaluate(
        options.indices, [&](long n) { return 1.0 + successive_normal(model, src, n, options.mode); });
    return make_curve("read-successive", Axis::frequency, numerics::grain(model.config().write_time),
                      options.indices, values);
}

DuanValue successive_readout_duan(const MemoryModel& model, const LaserSource& src, double omega,
                                  SourceMode mode) {
    const long n = index_of(omega, numerics::grain(model.config().write_time));
    const double normal = successive_normal(model, src, n, mode);
    return {normal, 1.0 + normal};
}

TwoPulseResult two_pulse_conversion(const MemoryModel& model, const LaserSource& first,
                                    const LaserSource& second, double k, SourceMode mode) {
    const long n = index_of(k, numerics::grain(model.config().length));
    const UniformGrid tg = model.write_kernel().t_grid();
    const std::vector<cd> gk = spatial_kernel(model, n);
    const source::CorrelationForm form_x(first, tg, mode);
    const source::CorrelationForm form_y(second, tg, mode);
    const double plus_x = 1.0 + 2.0 * form_x.quadratic(gk);
    const double minus_y = 1.0 + 2.0 * form_y.quadratic(gk);
    TwoPulseResult r;
    r.plus_x_spectrum = plus_x;
    r.minus_y_spectrum = minus_y;
    r.duan = 0.5 * (plus_x + minus_y);
    return r;
}

MomentTableInfo spin_wave_moments(const MemoryModel& model, const LaserSource& src, long half, SourceMode mode) {
    MomentTableInfo info{entanglement::QuadratureSecondMoments(numerics::grain(model.config().length), half)};
    const source::CorrelationForm form(src, model.write_kernel().t_grid(), mode);
    const double ny = conjugate_coefficient(src, info.y_defined);

    std::map<long, std::vector<cd>> kernels;
    for (long n = -half; n <= half; ++n) kernels.emplace(n, spatial_kernel(model, n));
    const UniformGrid tg = model.write_kernel().t_grid();
    // <: dX_a dX_b :> = B(G_a, conj G_b) / 4 and conj G_b = G_-b.
    auto normal_x = [&](long a, long b) { return form.bilinear(kernels.at(a), kernels.at(-b)) / 4.0; };
    auto normal_y = [&](long a, long b) {
        std::vector<cd> product(tg.count());
        for (std::size_t m = 0; m < product.size(); ++m) product[m] = kernels.at(a)[m] * std::conj(kernels.at(-b)[m]);
        return ny / 16.0 * numerics::integrate(product, tg.step());
    };
    fill_table(info.table, half, true, normal_x, normal_y);
    return info;
}

MomentTableInfo successive_readout_moments(const MemoryModel& model, const LaserSource& src, long half,
                                           SourceMode mode) {
    MomentTableInfo info{entanglement::QuadratureSecondMoments(numerics::grain(model.config().write_time), half)};
    const double ny = conjugate_coefficient(src, info.y_defined);
    std::function<cd(long, long)> normal_x;
    std::map<long, std::vector<cd>> weights;
    std::optional<source::CorrelationForm> form;
    if (mode == SourceMode::white_noise) {
        const double nx = source::noise_coefficient(src);
        normal_x = [&model, nx](long a, long b) { return nx / 8.0 * mode_sum(model, a, b); };
    } else {
        form.emplace(src, model.cycle_kernel().t_grid(), mode);
        for (long n = -half; n <= half; ++n) weights.emplace(n, readout_weight(model, n));
        normal_x = [&](long a, long b) { return 0.5 * form->bilinear(weights.at(a), weights.at(-b)); };
    }
    auto normal_y = [&model, ny](long a, long b) { return ny / 8.0 * mode_sum(model, a, b); };
    fill_table(info.table, half, true, normal_x, normal_y);
    return info;
}

MomentTableInfo simultaneous_readout_moments(const MemoryModel& model, const LaserSource& src, long half,
                                             SourceMode mode) {
    MomentTableInfo info{entanglement::QuadratureSecondMoments(numerics::grain(model.config().write_time), half)};
    const double ny = conjugate_coefficient(src, info.y_defined);
    std::function<cd(long, long)> normal_x;
    std::map<long, std::vector<cd>> weights;
    std::optional<source::CorrelationForm> form;
    if (mode == SourceMode::white_noise) {
        const double nx = source::noise_coefficient(src);
        normal_x = [&model, nx](long a, long b) { return nx / 4.0 * mode_sum(model, a, b); };
    } else {
        form.emplace(src, model.cycle_kernel().t_grid(), mode);
        for (long n = -half; n <= half; ++n) weights.emplace(n, readout_weight(model, n));
        normal_x = [&](long a, long b) { return form->bilinear(weights.at(a), weights.at(-b)); };
    }
    auto normal_y = [&model, ny](long a, long b) { return ny / 4.0 * mode_sum(model, a, b); };
    fill_table(info.table, half, false, normal_x, normal_y);
    return info;
}

Protocol parse_protocol(const std::string& name) {
    if (name == "write") return Protocol::write;
    if (name == "read-simultaneous") return Protocol::read_simultaneous;
    if (name == "read-successive") return Protocol::read_successive;
    if (name == "two-pulse") return Protocol::two_pulse;
    throw DomainError("unknown protocol '" + name + "'");
}

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::write: return "write";
        case Protocol::read_simultaneous: return "read-simultaneous";
        case Protocol::read_successive: return "read-successive";
        case Protocol::two_pulse: return "two-pulse";
    }
    return "unknown";
}

ProtocolResult run_protocol(Protocol protocol, const MemoryModel& model, const LaserSource& src,
                            const RunOptions& options) {
    ProtocolResult r;
    r.protocol = protocol_name(protocol);
    r.config = model.config();
    r.sources.emplace_back("source", src);
    const SourceMode mode = options.curve.mode;
    r.flags.emplace_back("exact_source", mode == SourceMode::exact);

    switch (protocol) {
        case Protocol::write: {
            r.curves.push_back(spin_wave_spectrum(model, src, options.curve));
            const double zero = spin_wave_duan(model, src, 0.0, mode);
            r.headline = {{"zero_argument_value", zero},
                          {"squeezing_percent", percent_below_one(zero)},
                          {"duan", zero}};
            r.flags.emplace_back("entangled", zero < 1.0);
            break;
        }
        case Protocol::read_simultaneous: {
            r.curves.push_back(simultaneous_readout_spectrum(model, src, options.curve));
            const double zero = 1.0 + 4.0 * simultaneous_normal(model, src, 0, mode);
            const auto& sd = model.schmidt();
            r.headline = {{"zero_argument_value", zero},
                          {"squeezing_percent", percent_below_one(zero)},
                          {"duan", zero}};
            for (std::size_t i = 0; i < std::min<std::size_t>(2, sd.n_modes_kept); ++i) {
                const std::string id = std::to_string(i + 1);
                r.headline.emplace_back("lambda_" + id, sd.lambdas[i]);
                r.headline.emplace_back("mode_" + id + "_zero_frequency_magnitude",
                                        std::abs(schmidt::mode_spectrum(sd, i, 0.0)));
            }
            r.flags.emplace_back("entangled", zero < 1.0);
            break;
        }
        case Protocol::read_successive: {
            r.curves.push_back(successive_readout_spectrum(model, src, options.curve));
            const DuanValue d = successive_readout_duan(model, src, 0.0, mode);
            r.headline = {{"zero_argument_value", d.duan},
                          {"squeezing_percent", percent_below_one(d.duan)},
                          {"duan", d.duan},
                          {"duan_normally_ordered", d.normally_ordered}};
            r.flags.emplace_back("entangled", d.entangled());
            r.notes.push_back("the delay between the two read pulses does not enter any second moment");
            break;
        }
        case Protocol::two_pulse: {
            r.sources.clear();
            r.sources.emplace_back("pulse_1", src);
            r.sources.emplace_back("pulse_2", options.second_source);
            const double grain = numerics::grain(model.config().length);
            const std::vector<double> values = evaluate(options.curve.indices, [&](long n) {
                return two_pulse_conversion(model, src, options.second_source, static_cast<double>(n) * grain, mode)
                    .duan;
            });
            r.curves.push_back(make_curve("two-pulse", Axis::wavenumber, grain, options.curve.indices, values));
            const TwoPulseResult t = two_pulse_conversion(model, src, options.second_source, 0.0, mode);
            r.headline = {{"zero_argument_value", t.duan},
                          {"duan", t.duan},
                          {"plus_x_spectrum", t.plus_x_spectrum},
                          {"minus_y_spectrum", t.minus_y_spectrum}};
            r.flags.emplace_back("entangled", t.entangled());
            r.notes.push_back(t.note);
            break;
        }
    }
    return r;
}

}  // namespace qmem::protocols
