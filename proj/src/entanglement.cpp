#include "qmem/entanglement.hpp"

#include <cmath>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/numerics.hpp"

namespace qmem::entanglement {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

SpectralOperator op(Beam b, Quadrature q, long n) { return {b, q, n}; }

SpectralOperator dagger(SpectralOperator o) {
    o.index = -o.index;
    return o;
}

double cross_moment(const QuadratureSecondMoments& m, const LinearForm& a, const LinearForm& b) {
    cd sum = 0.0;
    for (const auto& s : a.terms) {
        for (const auto& t : b.terms) {
            sum += s.coefficient * std::conj(t.coefficient) * m.moment(s.op, dagger(t.op));
        }
    }
    return (-kI * sum).real() * 2.0;
}

LinearForm single(cd c, SpectralOperator o) {
    LinearForm f;
    f.add(c, o);
    return f;
}

LinearForm scaled(const LinearForm& f, cd c) {
    LinearForm out = f;
    for (auto& t : out.terms) t.coefficient *= c;
    return out;
}

}  // namespace

QuadratureSecondMoments::QuadratureSecondMoments(double grain, long max_index)
    : grain_(grain), max_index_(max_index) {
    if (!(grain > 0.0) || max_index < 0) throw DomainError("QuadratureSecondMoments: bad frequency scale");
}

void QuadratureSecondMoments::check(const SpectralOperator& o) const {
    if (o.index < -max_index_ || o.index > max_index_) {
        throw DomainError("QuadratureSecondMoments: index " + std::to_string(o.index) + " not in the table");
    }
}

std::pair<SpectralOperator, SpectralOperator> QuadratureSecondMoments::key(SpectralOperator a,
                                                                          SpectralOperator b) {
    return a <= b ? std::pair{a, b} : std::pair{b, a};
}

void QuadratureSecondMoments::set_moment(SpectralOperator a, SpectralOperator b, cd value) {
    check(a);
    check(b);
    if (a.quadrature != b.quadrature) {
        throw DomainError("QuadratureSecondMoments: X and Y are independent, no cross moment allowed");
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw DomainError("QuadratureSecondMoments: non-finite moment");
    }
    entries_[key(a, b)] = value;
    entries_[key(dagger(a), dagger(b))] = std::conj(value);
}

void QuadratureSecondMoments::set_variance(Beam beam, Quadrature q, long n, double value) {
    if (!(value >= 0.0)) throw DomainError("QuadratureSecondMoments: variance must be non-negative");
    set_moment(op(beam, q, n), op(beam, q, -n), value);
}

cd QuadratureSecondMoments::moment(SpectralOperator a, SpectralOperator b) const {
    check(a);
    check(b);
    if (a.quadrature != b.quadrature) return 0.0;
    const auto it = entries_.find(key(a, b));
    if (it != entries_.end()) return it->second;
    if (a.beam == b.beam && a.index == -b.index) return kVacuumVariance;
    return 0.0;
}

double QuadratureSecondMoments::variance(Beam beam, Quadrature q, long n) const {
    return moment(op(beam, q, n), op(beam, q, -n)).real();
}

LinearForm LinearForm::operator+(const LinearForm& other) const {
    LinearForm out = *this;
    out.terms.insert(out.terms.end(), other.terms.begin(), other.terms.end());
    return out;
}

LinearForm LinearForm::operator-(const LinearForm& other) const { return *this + scaled(other, -1.0); }

double mean_square(const QuadratureSecondMoments& m, const LinearForm& a) {
    cd sum = 0.0;
    for (const auto& s : a.terms) {
        for (const auto& t : a.terms) {
            sum += s.coefficient * std::conj(t.coefficient) * m.moment(s.op, dagger(t.op));
        }
    }
    return sum.real();
}

LinearForm canonical_q(Beam beam, long n) {
    LinearForm f;
    f.add(0.5, op(beam, Quadrature::x, n))
        .add(0.5, op(beam, Quadrature::x, -n))
        .add(0.5 * kI, op(beam, Quadrature::y, n))
        .add(-0.5 * kI, op(beam, Quadrature::y, -n));
    return f;
}

LinearForm canonical_p(Beam beam, long n) {
    LinearForm f;
    f.add(-0.5 * kI, op(beam, Quadrature::x, n))
        .add(0.5 * kI, op(beam, Quadrature::x, -n))
        .add(0.5, op(beam, Quadrature::y, n))
        .add(0.5, op(beam, Quadrature::y, -n));
    return f;
}

CanonicalMoments canonical_from_quadratures(const QuadratureSecondMoments& m, Beam beam, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    return {mean_square(m, canonical_q(beam, n)), mean_square(m, canonical_p(beam, n))};
}

double duan_same_frequency(const QuadratureSecondMoments& m, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    return mean_square(m, canonical_q(Beam::first, n) + canonical_q(Beam::second, n)) +
           mean_square(m, canonical_p(Beam::first, n) - canonical_p(Beam::second, n));
}

double duan_opposite_frequency(const QuadratureSecondMoments& m, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    return mean_square(m, canonical_q(Beam::first, n) + canonical_q(Beam::second, -n)) +
           mean_square(m, canonical_p(Beam::first, n) - canonical_p(Beam::second, -n));
}

double duan_single_beam(const QuadratureSecondMoments& m, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    return mean_square(m, canonical_q(Beam::first, n) + canonical_q(Beam::first, -n)) +
           mean_square(m, canonical_p(Beam::first, n) - canonical_p(Beam::first, -n));
}

double duan_same_frequency_reduced(const QuadratureSecondMoments& m, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    const LinearForm x = single(1.0, op(Beam::first, Quadrature::x, n)) +
                         single(1.0, op(Beam::second, Quadrature::x, -n));
    const LinearForm y = single(1.0, op(Beam::first, Quadrature::y, n)) -
                         single(1.0, op(Beam::second, Quadrature::y, -n));
    return mean_square(m, x) + mean_square(m, y);
}

double duan_opposite_frequency_reduced(const QuadratureSecondMoments& m, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    const LinearForm x = single(1.0, op(Beam::first, Quadrature::x, n)) +
                         single(1.0, op(Beam::second, Quadrature::x, n));
    const LinearForm y = single(1.0, op(Beam::first, Quadrature::y, n)) -
                         single(1.0, op(Beam::second, Quadrature::y, n));
    return mean_square(m, x) + mean_square(m, y);
}

double duan_single_beam_reduced(const QuadratureSecondMoments& m, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    return 4.0 * m.variance(Beam::first, Quadrature::x, n);
}

double omitted_cross_term(const QuadratureSecondMoments& m, double omega) {
    const long n = numerics::grain_index(omega, m.grain());
    const LinearForm x = single(1.0, op(Beam::first, Quadrature::x, n)) +
                         single(1.0, op(Beam::second, Quadrature::x, -n));
    const LinearForm y = single(1.0, op(Beam::first, Quadrature::y, n)) -
                         single(1.0, op(Beam::second, Quadrature::y, -n));
    return cross_moment(m, x, y);
}

}  // namespace qmem::entanglement
