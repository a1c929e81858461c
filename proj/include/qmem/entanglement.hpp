#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <tuple>
#include <vector>

/**
 * Gaussian second-moment tables of two beams (or two spin waves) on a
 * discrete frequency scale, the canonical variables built from them and the
 * Duan separability parameters.
 *
 * Spectral operators O_{beam,quad,n} are Fourier components at n * grain of
 * the real quadratures X and Y, so O_{n}^dagger = O_{-n}. The table stores
 * symmetrized moments <O_a O_b>; vacuum contributes 1/4 to <O_n O_{-n}> and
 * nothing else. X and Y are statistically independent: no X-Y slot exists.
 */
namespace qmem::entanglement {

enum class Beam { first = 1, second = 2 };
enum class Quadrature { x, y };

struct SpectralOperator {
    Beam beam;
    Quadrature quadrature;
    long index;  ///< signed grain index

    auto operator<=>(const SpectralOperator&) const = default;
};

inline constexpr double kVacuumVariance = 0.25;

class QuadratureSecondMoments {
public:
    /// Indices -max_index .. max_index on the scale n * grain.
    QuadratureSecondMoments(double grain, long max_index);

    double grain() const { return grain_; }
    long max_index() const { return max_index_; }

    /// <|dO_n|^2> for n and -n together (the table is even in n).
    void set_variance(Beam beam, Quadrature q, long n, double value);

    /// General moment <O_a O_b>. The Hermitian partner <O_a(-n) O_b(-m)> is
    /// set to the complex conjugate. Pairs mixing X and Y are rejected.
    void set_moment(SpectralOperator a, SpectralOperator b, std::complex<double> value);

    /// Stored or vacuum value; indices outside the table raise DomainError.
    std::complex<double> moment(SpectralOperator a, SpectralOperator b) const;

    double variance(Beam beam, Quadrature q, long n) const;

    /// Every stored moment, in a fixed order.
    const std::map<std::pair<SpectralOperator, SpectralOperator>, std::complex<double>>& entries() const {
        return entries_;
    }

private:
    void check(const SpectralOperator& o) const;
    static std::pair<SpectralOperator, SpectralOperator> key(SpectralOperator a, SpectralOperator b);

    double grain_;
    long max_index_;
    std::map<std::pair<SpectralOperator, SpectralOperator>, std::complex<double>> entries_;
};

/// Linear combination sum_k c_k O_k.
struct LinearForm {
    struct Term {
        std::complex<double> coefficient;
        SpectralOperator op;
    };
    std::vector<Term> terms;

    LinearForm& add(std::complex<double> c, SpectralOperator op) {
        terms.push_back({c, op});
        return *this;
    }
    LinearForm operator+(const LinearForm& other) const;
    LinearForm operator-(const LinearForm& other) const;
};

/// <A A^dagger> for A = sum c_k O_k (real part; equals <A^2> for Hermitian A).
double mean_square(const QuadratureSecondMoments& m, const LinearForm& a);

/// Q = (X_w + X_-w)/2 - (Y_w - Y_-w)/(2i),  P = (X_w - X_-w)/(2i) + (Y_w + Y_-w)/2.
LinearForm canonical_q(Beam beam, long n);
LinearForm canonical_p(Beam beam, long n);

struct CanonicalMoments {
    double q_variance;
    double p_variance;
};

CanonicalMoments canonical_from_quadratures(const QuadratureSecondMoments& m, Beam beam, double omega);

/// <(dQ_1w + dQ_2w)^2> + <(dP_1w - dP_2w)^2>.
double duan_same_frequency(const QuadratureSecondMoments& m, double omega);
/// <(dQ_1w + dQ_2,-w)^2> + <(dP_1w - dP_2,-w)^2>.
double duan_opposite_frequency(const QuadratureSecondMoments& m, double omega);
/// Oscillators at +w and -w of beam 1: <(dQ_w + dQ_-w)^2> + <(dP_w - dP_-w)^2>.
double duan_single_beam(const QuadratureSecondMoments& m, double omega);

/// The same parameters written directly in quadratures:
///   same:     <|dX_1w + dX_2,-w|^2> + <|dY_1w - dY_2,-w|^2>
///   opposite: <|dX_1w + dX_2w|^2>   + <|dY_1w - dY_2w|^2>
///   single:   4 <|dX_w|^2>
double duan_same_frequency_reduced(const QuadratureSecondMoments& m, double omega);
double duan_opposite_frequency_reduced(const QuadratureSecondMoments& m, double omega);
double duan_single_beam_reduced(const QuadratureSecondMoments& m, double omega);

/// The X-Y blocks dropped when the Duan sums are expanded,
/// -i <(dX_1 + dX_2)(dY_1 - dY_2)> + c.c.; zero because the table has no
/// X-Y slot. Returned so callers can report it.
double omitted_cross_term(const QuadratureSecondMoments& m, double omega);

}  // namespace qmem::entanglement
