#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qmem/entanglement.hpp"
#include "qmem/kernels.hpp"
#include "qmem/schmidt.hpp"
#include "qmem/source_model.hpp"

/**
 * End-to-end quadrature statistics: spin waves after writing, retrieved light
 * for simultaneous and successive read-out, and the two-pulse conversion.
 *
 * Every normally ordered term is a quadratic form of the source correlation
 * (source::CorrelationForm), so white-noise and exact-source evaluations share
 * one code path apart from the Schmidt sums used by the white read-out.
 */
namespace qmem::protocols {

using kernels::MemoryConfig;
using source::LaserSource;
using source::SourceMode;

/// Write kernel, cycle kernel and Schmidt modes of one configuration,
/// computed once at construction.
class MemoryModel {
public:
    explicit MemoryModel(const MemoryConfig& cfg, std::size_t n_modes = schmidt::kDefaultModes,
                         kernels::GridPolicy policy = kernels::GridPolicy::production);

    const MemoryConfig& config() const { return cfg_; }
    const kernels::WriteKernel& write_kernel() const { return write_; }
    const kernels::CycleKernel& cycle_kernel() const { return cycle_; }
    const schmidt::SchmidtDecomposition& schmidt() const { return schmidt_; }

private:
    MemoryConfig cfg_;
    kernels::WriteKernel write_;
    kernels::CycleKernel cycle_;
    schmidt::SchmidtDecomposition schmidt_;
};

enum class Axis { wavenumber, frequency };

struct CurvePoint {
    long index;       ///< signed grain index
    double argument;  ///< index * grain
    double value;
};

struct SpectralCurve {
    std::string name;
    Axis axis = Axis::frequency;
    double grain = 0.0;
    std::vector<CurvePoint> points;

    /// Value at the given grain index; DomainError if absent.
    double at(long index) const;
};

/// Signed grain indices -half .. half; the default gives 33 points.
std::vector<long> centered_indices(long half = 16);

struct CurveOptions {
    std::vector<long> indices = centered_indices();
    SourceMode mode = SourceMode::white_noise;
};

/// 4 <|dX_{j,k}|^2> of either spin wave b_1, b_2.
SpectralCurve spin_wave_spectrum(const MemoryModel& model, const LaserSource& src,
                                 const CurveOptions& options = {});

/// D_{k,-k} of the pair b_1, b_2; equal to the spectrum at k.
double spin_wave_duan(const MemoryModel& model, const LaserSource& src, double k,
                      SourceMode mode = SourceMode::white_noise);

/// Normally ordered <: dX(z) dX(z') :> of one spin wave. The white-noise
/// value is the half-domain delta term (n/32) int G(z,t) G(z',t) dt plus its
/// {z <-> z'} mirror; the exact value integrates the exponential correlator.
double spin_wave_covariance(const MemoryModel& model, const LaserSource& src, double z, double z_prime,
                            SourceMode mode = SourceMode::white_noise);

/// 4 <|dX_out,w|^2> when both spin waves are read at once. White-noise
/// mode evaluates 1 + n sum_i lambda_i |phi_{i,w}|^2 over the kept modes.
SpectralCurve simultaneous_readout_spectrum(const MemoryModel& model, const LaserSource& src,
                                            const CurveOptions& options = {});

/// 4 <|dX^(1)_out,w|^2> = 4 <|dX^(2)_out,w|^2> for one of the two read pulses.
SpectralCurve successive_readout_spectrum(const MemoryModel& model, const LaserSource& src,
                                          const CurveOptions& options = {});

struct DuanValue {
    double normally_ordered;  ///< below zero signals entanglement
    double duan;              ///< 1 + normally_ordered
    bool entangled() const { return duan < 1.0; }
};

/// D_{w,-w} between the two successively retrieved pulses.
DuanValue successive_readout_duan(const MemoryModel& model, const LaserSource& src, double omega,
                                  SourceMode mode = SourceMode::white_noise);

struct TwoPulseResult {
    double duan;
    double plus_x_spectrum;   ///< X spectrum of b+ written by pulse 1
    double minus_y_spectrum;  ///< Y spectrum of b- written by pulse 2
    bool entangled() const { return duan < 1.0; }
    std::string note = "derived, not from paper";
};

/// Pulse 1 (equal control fields) squeezes X of b+, pulse 2 (opposite
/// control fields) squeezes Y of b-. Each pulse lands in a single spin wave,
/// so its normally ordered part is twice that of the split write.
TwoPulseResult two_pulse_conversion(const MemoryModel& model, const LaserSource& first,
                                    const LaserSource& second, double k,
                                    SourceMode mode = SourceMode::white_noise);

// ---------------------------------------------------------------------------
// Moment tables for the entanglement module

struct MomentTableInfo {
    entanglement::QuadratureSecondMoments table;
    bool y_defined = true;  ///< false when the Y default had no finite value
};

/// b_1 and b_2 as beams 1 and 2 over k-indices -half .. half. The Y
/// quadrature uses the conjugate noise coefficient of the source.
MomentTableInfo spin_wave_moments(const MemoryModel& model, const LaserSource& src, long half,
                                  SourceMode mode = SourceMode::white_noise);

/// The two successively read pulses as beams 1 and 2.
MomentTableInfo successive_readout_moments(const MemoryModel& model, const LaserSource& src, long half,
                                           SourceMode mode = SourceMode::white_noise);

/// The simultaneously read beam as beam 1 (beam 2 stays vacuum).
MomentTableInfo simultaneous_readout_moments(const MemoryModel& model, const LaserSource& src, long half,
                                             SourceMode mode = SourceMode::white_noise);

// ---------------------------------------------------------------------------
// Result assembly

struct ProtocolResult {
    std::string protocol;
    MemoryConfig config;
    std::vector<std::pair<std::string, LaserSource>> sources;
    std::vector<SpectralCurve> curves;
    std::vector<std::pair<std::string, double>> headline;
    std::vector<std::pair<std::string, bool>> flags;
    std::vector<std::string> notes;
};

enum class Protocol { write, read_simultaneous, read_successive, two_pulse };

Protocol parse_protocol(const std::string& name);
std::string protocol_name(Protocol p);

struct RunOptions {
    CurveOptions curve;
    LaserSource second_source{};  ///< pulse 2 of the two-pulse scenario
};

ProtocolResult run_protocol(Protocol protocol, const MemoryModel& model, const LaserSource& src,
                            const RunOptions& options = {});

}  // namespace qmem::protocols
