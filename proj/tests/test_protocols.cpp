#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qmem/protocols.hpp"

using namespace qmem;
using namespace qmem::protocols;
using entanglement::Beam;

namespace {

const MemoryModel& matched() {
    static const MemoryModel model(MemoryConfig::make(10.0, 5.5));
    return model;
}

const LaserSource kSqueezed{-1.0, 100.0, 0.0};
const LaserSource kPoisson{0.0, 100.0, 0.0};

double mode_weight(const MemoryModel& m, long n) {
    const auto& sd = m.schmidt();
    double s = 0.0;
    for (std::size_t i = 0; i < sd.n_modes_kept; ++i) {
        s += sd.lambdas[i] * std::norm(schmidt::mode_spectrum(sd, i, n * numerics::grain(5.5)));
    }
    return s;
}

}  // namespace

TEST_CASE("Poissonian pumping leaves every curve at the vacuum level") {
    const auto& m = matched();
    for (const auto& c : {spin_wave_spectrum(m, kPoisson), simultaneous_readout_spectrum(m, kPoisson),
                          successive_readout_spectrum(m, kPoisson)}) {
        REQUIRE(c.points.size() == 33);
        for (const auto& p : c.points) CHECK(p.value == 1.0);
    }
    CHECK(spin_wave_duan(m, kPoisson, 0.0) == 1.0);
    const DuanValue d = successive_readout_duan(m, kPoisson, 0.0);
    CHECK(d.normally_ordered == 0.0);
    CHECK(d.duan == 1.0);
    CHECK_FALSE(d.entangled());
    CHECK(spin_wave_covariance(m, kPoisson, 2.0, 3.0) == 0.0);
    CHECK(two_pulse_conversion(m, kPoisson, kPoisson, 0.0).duan == 1.0);
}

TEST_CASE("curves are even and sit on their grain") {
    const auto& m = matched();
    for (const auto& c : {spin_wave_spectrum(m, kSqueezed), simultaneous_readout_spectrum(m, kSqueezed),
                          successive_readout_spectrum(m, kSqueezed)}) {
        const double expected_grain = c.axis == Axis::wavenumber ? numerics::grain(10.0) : numerics::grain(5.5);
        CHECK(c.grain == doctest::Approx(expected_grain));
        for (const auto& p : c.points) {
            CHECK(p.value == doctest::Approx(c.at(-p.index)).epsilon(1e-12));
            CHECK(p.argument == doctest::Approx(p.index * c.grain));
            CHECK(p.value > 0.0);
        }
        CHECK_THROWS_AS(c.at(17), DomainError);
    }
    CHECK_THROWS_AS(spin_wave_duan(m, kSqueezed, 0.3), DomainError);
    CHECK_THROWS_AS(successive_readout_duan(m, kSqueezed, 0.3), DomainError);
}

TEST_CASE("variances decrease monotonically as pumping becomes regular") {
    const auto& m = matched();
    const CurveOptions few{{-3, 0, 2, 9}, SourceMode::white_noise};
    std::vector<SpectralCurve> spin, sim;
    for (double p : {0.0, -0.25, -0.5, -0.75, -1.0}) {
        spin.push_back(spin_wave_spectrum(m, {p, 100.0, 0.0}, few));
        sim.push_back(simultaneous_readout_spectrum(m, {p, 100.0, 0.0}, few));
    }
    for (std::size_t i = 1; i < spin.size(); ++i) {
        for (std::size_t j = 0; j < few.indices.size(); ++j) {
            CHECK(spin[i].points[j].value <= spin[i - 1].points[j].value);
            CHECK(sim[i].points[j].value <= sim[i - 1].points[j].value);
        }
    }
}

TEST_CASE("simultaneous read-out bounds") {
    const auto& m = matched();
    for (double p : {0.0, -0.5, -1.0}) {
        const auto c = simultaneous_readout_spectrum(m, {p, 100.0, 0.0});
        for (const auto& pt : c.points) {
            CHECK(pt.value > 0.0);
            CHECK(pt.value <= 1.0);
            CHECK(pt.value >= 1.0 - mode_weight(m, pt.index) - 1e-12);
        }
    }
}

TEST_CASE("read-out identities") {
    const auto& m = matched();
    for (const LaserSource& src : {kSqueezed, LaserSource{-0.6, 100.0, 0.2}}) {
        const auto sim = simultaneous_readout_spectrum(m, src);
        const auto suc = successive_readout_spectrum(m, src);
        for (std::size_t i = 0; i < sim.points.size(); ++i) {
            CHECK(std::fabs(suc.points[i].value - 0.5 * (1.0 + sim.points[i].value)) <= 1e-12);
            const DuanValue d = successive_readout_duan(m, src, suc.points[i].argument);
            CHECK(d.duan == suc.points[i].value);
            CHECK(d.duan == doctest::Approx(1.0 + d.normally_ordered).epsilon(1e-15));
            CHECK(std::fabs(sim.points[i].value - (1.0 + noise_coefficient(src) * mode_weight(m, sim.points[i].index))) <= 1e-12);
        }
        const auto spin = spin_wave_spectrum(m, src);
        for (const auto& p : spin.points) CHECK(std::fabs(spin_wave_duan(m, src, p.argument) - p.value) <= 1e-12);
    }
}

TEST_CASE("spin-wave covariance") {
    const auto& m = matched();
    const auto& wk = m.write_kernel();
    const double n = source::noise_coefficient(kSqueezed);
    const auto wt = numerics::quadrature_weights(wk.t_grid());
    const auto wz = numerics::quadrature_weights(wk.z_grid());
    // Covariance matrix on the z-grid from the sampled kernel.
    const Eigen::MatrixXd cov =
        n / 16.0 * wk.values() * Eigen::Map<const Eigen::VectorXd>(wt.data(), 513).asDiagonal() * wk.values().transpose();
    for (std::size_t j : {0u, 128u, 256u, 400u}) {
        for (std::size_t k : {0u, 256u, 512u}) {
            const double direct = spin_wave_covariance(m, kSqueezed, wk.z_grid()[j], wk.z_grid()[k]);
            CHECK(direct == doctest::Approx(cov(j, k)).epsilon(1e-10));
            CHECK(direct == doctest::Approx(spin_wave_covariance(m, kSqueezed, wk.z_grid()[k], wk.z_grid()[j])).epsilon(1e-14));
        }
    }
    // Spatial Fourier transform over the k-grain gives the normally ordered spectrum.
    const auto spin = spin_wave_spectrum(m, kSqueezed, {{0, 1, 3, 7}, SourceMode::white_noise});
    for (const auto& p : spin.points) {
        std::vector<std::complex<double>> phase(513);
        for (std::size_t j = 0; j < 513; ++j) phase[j] = wz[j] * std::exp(std::complex<double>(0.0, -p.argument * wk.z_grid()[j]));
        std::complex<double> sum = 0.0;
        for (std::size_t j = 0; j < 513; ++j)
            for (std::size_t k = 0; k < 513; ++k) sum += phase[j] * std::conj(phase[k]) * cov(j, k);
        const double transform = sum.real() / 10.0;
        CHECK(std::fabs(transform - (p.value - 1.0) / 4.0) <= 0.01 * std::fabs((p.value - 1.0) / 4.0));
    }
}

TEST_CASE("exact source converges to the white-noise limit") {
    const auto& m = matched();
    const LaserSource src{-1.0, 200.0 / 5.5, 0.0};
    const double white = spin_wave_covariance(m, src, 5.0, 5.0, SourceMode::white_noise);
    const double exact = spin_wave_covariance(m, src, 5.0, 5.0, SourceMode::exact);
    CHECK(std::fabs(exact - white) <= 0.02 * std::fabs(white));

    const CurveOptions white_opts{{0, 2}, SourceMode::white_noise};
    const CurveOptions exact_opts{{0, 2}, SourceMode::exact};
    const auto sw = simultaneous_readout_spectrum(m, src, white_opts);
    const auto se = simultaneous_readout_spectrum(m, src, exact_opts);
    const auto spw = spin_wave_spectrum(m, src, white_opts);
    const auto spe = spin_wave_spectrum(m, src, exact_opts);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::fabs(se.points[i].value - sw.points[i].value) <= 0.02 * (1.0 - sw.points[i].value));
        CHECK(std::fabs(spe.points[i].value - spw.points[i].value) <= 0.02 * (1.0 - spw.points[i].value));
    }
    const auto ue = successive_readout_spectrum(m, src, exact_opts);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(ue.points[i].value - 0.5 * (1.0 + se.points[i].value)) <= 1e-12);
}

TEST_CASE("two-pulse conversion") {
    const auto& m = matched();
    const TwoPulseResult both = two_pulse_conversion(m, kSqueezed, kSqueezed, 0.0);
    CHECK(both.duan < 1.0);
    CHECK(both.entangled());
    CHECK(both.note == "derived, not from paper");
    const TwoPulseResult one = two_pulse_conversion(m, kSqueezed, kPoisson, 0.0);
    CHECK(one.minus_y_spectrum == 1.0);
    CHECK(one.duan == doctest::Approx(0.5 * (one.plus_x_spectrum + 1.0)).epsilon(1e-15));
    CHECK(one.duan < 1.0);
    // A single-channel write carries twice the normally ordered part of the split write.
    const double split = spin_wave_spectrum(m, kSqueezed, {{0}, SourceMode::white_noise}).at(0);
    CHECK(one.plus_x_spectrum - 1.0 == doctest::Approx(2.0 * (split - 1.0)).epsilon(1e-12));
}

TEST_CASE("moment tables reproduce the protocol values") {
    const auto& m = matched();
    const long half = 4;
    const auto spin = spin_wave_moments(m, kSqueezed, half);
    CHECK_FALSE(spin.y_defined);
    const auto suc = successive_readout_moments(m, kSqueezed, half);
    const auto sim = simultaneous_readout_moments(m, kSqueezed, half);
    const double kq = numerics::grain(10.0), wq = numerics::grain(5.5);
    for (long n = -half; n <= half; ++n) {
        CHECK(std::fabs(entanglement::duan_opposite_frequency(spin.table, n * kq) - spin_wave_duan(m, kSqueezed, n * kq)) <= 1e-12);
        CHECK(std::fabs(entanglement::duan_opposite_frequency(suc.table, n * wq) -
                        successive_readout_duan(m, kSqueezed, n * wq).duan) <= 1e-12);
        CHECK(std::fabs(entanglement::duan_single_beam(sim.table, n * wq) -
                        simultaneous_readout_spectrum(m, kSqueezed, {{n}, SourceMode::white_noise}).at(n)) <= 1e-12);
    }
    CHECK(std::fabs(entanglement::duan_same_frequency(suc.table, 0.0) - successive_readout_duan(m, kSqueezed, 0.0).duan) <= 1e-12);

    const LaserSource partial{-0.5, 100.0, 0.0};
    const auto defined = spin_wave_moments(m, partial, 2);
    CHECK(defined.y_defined);
    CHECK(defined.table.variance(Beam::first, entanglement::Quadrature::y, 0) > 0.25);
}

TEST_CASE("protocol runner") {
    const auto& m = matched();
    for (const std::string name : {"write", "read-simultaneous", "read-successive", "two-pulse"}) {
        const Protocol p = parse_protocol(name);
        CHECK(protocol_name(p) == name);
        RunOptions opts;
        opts.second_source = kSqueezed;
        const ProtocolResult r = run_protocol(p, m, kSqueezed, opts);
        REQUIRE_FALSE(r.curves.empty());
        double zero = 0.0;
        for (const auto& [key, value] : r.headline) {
            if (key == "zero_argument_value") zero = value;
        }
        CHECK(zero == doctest::Approx(r.curves.front().at(0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(parse_protocol("read"), DomainError);
}
