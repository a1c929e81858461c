#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qmem/entanglement.hpp"
#include "qmem/source_model.hpp"

using namespace qmem;
using namespace qmem::entanglement;

namespace {

constexpr double kGrain = 2.0 * 3.14159265358979323846 / 5.5;

SpectralOperator x(Beam b, long n) { return {b, Quadrature::x, n}; }
SpectralOperator y(Beam b, long n) { return {b, Quadrature::y, n}; }

struct AllDuan {
    double same, same_reduced, opposite, opposite_reduced, single, single_reduced;
};

AllDuan all_duan(const QuadratureSecondMoments& m, double w) {
    return {duan_same_frequency(m, w),     duan_same_frequency_reduced(m, w),
            duan_opposite_frequency(m, w), duan_opposite_frequency_reduced(m, w),
            duan_single_beam(m, w),        duan_single_beam_reduced(m, w)};
}

// A random table with Hermitian-consistent entries over indices -3..3.
QuadratureSecondMoments random_table(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    QuadratureSecondMoments m(kGrain, 3);
    for (Beam b : {Beam::first, Beam::second}) {
        for (Quadrature q : {Quadrature::x, Quadrature::y}) {
            for (long n = 0; n <= 3; ++n) m.set_variance(b, q, n, 0.25 + 0.2 * std::fabs(u(rng)));
        }
    }
    for (Quadrature q : {Quadrature::x, Quadrature::y}) {
        for (long n = -3; n <= 3; ++n) {
            for (long k = -3; k <= 3; ++k) {
                m.set_moment({Beam::first, q, n}, {Beam::second, q, k}, {u(rng), u(rng)});
                if (n != -k && n < k) m.set_moment({Beam::first, q, n}, {Beam::first, q, k}, {u(rng), u(rng)});
            }
        }
    }
    return m;
}

}  // namespace

TEST_CASE("vacuum gives one everywhere") {
    const QuadratureSecondMoments vacuum(kGrain, 8);
    for (long n = -8; n <= 8; ++n) {
        const double w = n * kGrain;
        const AllDuan d = all_duan(vacuum, w);
        CHECK(d.same == 1.0);
        CHECK(d.same_reduced == 1.0);
        CHECK(d.opposite == 1.0);
        CHECK(d.opposite_reduced == 1.0);
        CHECK(d.single == 1.0);
        CHECK(d.single_reduced == 1.0);
        const auto c = canonical_from_quadratures(vacuum, Beam::second, w);
        CHECK(c.q_variance == 0.25);
        CHECK(c.p_variance == 0.25);
    }
}

TEST_CASE("idealized EPR pair") {
    QuadratureSecondMoments m(kGrain, 4);
    const double v = 0.25, u = 0.25;
    for (long n = -4; n <= 4; ++n) {
        m.set_moment(x(Beam::first, n), x(Beam::second, n), -v);
        m.set_moment(y(Beam::first, n), y(Beam::second, n), u);
    }
    for (long n = -4; n <= 4; ++n) {
        CHECK(std::fabs(duan_same_frequency(m, n * kGrain)) <= 1e-15);
        CHECK(std::fabs(duan_same_frequency_reduced(m, n * kGrain)) <= 1e-15);
    }
}

TEST_CASE("multimode squeezed single beam") {
    QuadratureSecondMoments m(kGrain, 5);
    for (long n = 0; n <= 5; ++n) {
        m.set_variance(Beam::first, Quadrature::x, n, 0.05 + 0.01 * n);
        m.set_variance(Beam::first, Quadrature::y, n, 1.0 / (16.0 * (0.05 + 0.01 * n)));
    }
    for (long n = -5; n <= 5; ++n) {
        const double expected = 4.0 * (0.05 + 0.01 * std::labs(n));
        CHECK(duan_single_beam(m, n * kGrain) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(duan_single_beam_reduced(m, n * kGrain) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(duan_single_beam(m, n * kGrain) < 1.0);
    }
    // At zero frequency Q is X alone and P is Y alone; elsewhere each mixes both halves.
    const auto c0 = canonical_from_quadratures(m, Beam::first, 0.0);
    CHECK(c0.q_variance == doctest::Approx(0.05));
    CHECK(c0.p_variance == doctest::Approx(1.0 / 0.8));
    const auto c2 = canonical_from_quadratures(m, Beam::first, 2 * kGrain);
    const double vx = 0.07, vy = 1.0 / (16.0 * 0.07);
    CHECK(c2.q_variance == doctest::Approx(0.5 * (vx + vy)));
    CHECK(c2.p_variance == doctest::Approx(0.5 * (vx + vy)));
}

TEST_CASE("squeezed input laser in the single-beam criterion") {
    const source::LaserSource src{-1.0, 100.0, 0.1};
    QuadratureSecondMoments m(kGrain, 0);
    m.set_variance(Beam::first, Quadrature::x, 0, source::input_spectrum(src, 0.0) / 4.0);
    CHECK(duan_single_beam(m, 0.0) == doctest::Approx(0.00277).epsilon(1e-3));
    CHECK(duan_single_beam(m, 0.0) < 1.0);
}

TEST_CASE("identical spin waves: opposite-frequency criterion is linear in the correlation") {
    auto table = [](double a) {
        QuadratureSecondMoments m(kGrain, 2);
        for (long n = 0; n <= 2; ++n) {
            for (Beam b : {Beam::first, Beam::second}) m.set_variance(b, Quadrature::x, n, 0.25 + a);
            m.set_moment(x(Beam::first, n), x(Beam::second, -n), a);
            if (n) m.set_moment(x(Beam::first, -n), x(Beam::second, n), a);
        }
        return m;
    };
    const double a = -0.1;
    CHECK(duan_opposite_frequency(table(a), kGrain) == doctest::Approx(1.0 + 4.0 * a));
    CHECK(duan_opposite_frequency_reduced(table(a), kGrain) == doctest::Approx(1.0 + 4.0 * a));
    CHECK(duan_opposite_frequency(table(a / 2), kGrain) - 1.0 ==
          doctest::Approx(0.5 * (duan_opposite_frequency(table(a), kGrain) - 1.0)));
    // 4 <|dX_k|^2> of either wave.
    CHECK(duan_opposite_frequency(table(a), 0.0) == doctest::Approx(4.0 * table(a).variance(Beam::first, Quadrature::x, 0)));
}

TEST_CASE("canonical and reduced routes agree on general tables") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_table(rng);
        for (long n = -3; n <= 3; ++n) {
            const AllDuan d = all_duan(m, n * kGrain);
            CHECK(d.same == doctest::Approx(d.same_reduced).epsilon(1e-12));
            CHECK(d.opposite == doctest::Approx(d.opposite_reduced).epsilon(1e-12));
            CHECK(d.single == doctest::Approx(d.single_reduced).epsilon(1e-12));
        }
    }
}

TEST_CASE("sign flip of both beams leaves every criterion unchanged") {
    std::mt19937_64 rng(11);
    const auto m = random_table(rng);
    QuadratureSecondMoments flipped(kGrain, 3);
    for (const auto& [key, value] : m.entries()) {
        // Each operator changes sign, so every second moment keeps its sign.
        flipped.set_moment(key.first, key.second, (-1.0) * (-1.0) * value);
    }
    for (long n = -3; n <= 3; ++n) {
        const AllDuan a = all_duan(m, n * kGrain);
        const AllDuan b = all_duan(flipped, n * kGrain);
        CHECK(a.same == b.same);
        CHECK(a.opposite == b.opposite);
        CHECK(a.single == b.single);
    }
    // Negating a linear form leaves its mean square unchanged.
    const LinearForm q = canonical_q(Beam::first, 2) + canonical_q(Beam::second, -2);
    LinearForm neg;
    for (const auto& t : q.terms) neg.add(-t.coefficient, t.op);
    CHECK(mean_square(m, q) == doctest::Approx(mean_square(m, neg)).epsilon(1e-15));
}

TEST_CASE("table contract") {
    QuadratureSecondMoments m(kGrain, 2);
    CHECK_THROWS_AS(m.set_moment(x(Beam::first, 1), y(Beam::second, 1), 0.1), DomainError);
    CHECK_THROWS_AS(m.set_variance(Beam::first, Quadrature::x, 1, -0.1), DomainError);
    CHECK_THROWS_AS(m.moment(x(Beam::first, 3), x(Beam::first, -3)), DomainError);
    CHECK_THROWS_AS(duan_same_frequency(m, 0.5 * kGrain), DomainError);
    CHECK_THROWS_AS(duan_same_frequency(m, 3 * kGrain), DomainError);
    CHECK_THROWS_AS(QuadratureSecondMoments(0.0, 2), DomainError);
    CHECK(m.moment(x(Beam::first, 1), y(Beam::first, -1)) == 0.0);
    m.set_moment(x(Beam::first, 1), x(Beam::second, 2), {0.1, 0.2});
    CHECK(m.moment(x(Beam::first, -1), x(Beam::second, -2)) == std::complex<double>(0.1, -0.2));
    CHECK(m.moment(x(Beam::second, 2), x(Beam::first, 1)) == std::complex<double>(0.1, 0.2));
    std::mt19937_64 rng(3);
    const auto r = random_table(rng);
    for (long n = -3; n <= 3; ++n) CHECK(omitted_cross_term(r, n * kGrain) == 0.0);
}
