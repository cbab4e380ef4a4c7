#pragma once

// Synthetic fault-current plant for a two-source 230 kV line with a series
// capacitor at its midpoint.
//
// This is NOT an electromagnetic-transient simulation. Steady-state fault
// currents come from a symmetrical-component short-circuit calculation
// (shunt capacitance ignored); the transient content a relay sees on a
// series-compensated line is then added parametrically:
//   - decaying DC offset sized so the current is continuous at inception,
//   - a decaying ~25 Hz sub-synchronous term when the capacitor is inside
//     the fault loop,
//   - 3rd and 5th harmonics on faulted phases (MOV conduction),
//   - a damped high-frequency term (line-capacitance resonance),
//   - white Gaussian noise at a requested SNR.
// TCSC firing, the MOV V-I curve, travelling waves and CT saturation are not
// modelled.

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "lsfault/fault_type.hpp"

namespace lsfault {

using Complex = std::complex<double>;
using PhaseTriple = std::array<Complex, 3>;  // R, Y, B

struct SequenceImpedance {
    double r_per_km = 0.0;   // ohm/km
    double l_per_km = 0.0;   // H/km
    double c_per_km = 0.0;   // F/km, documentation only (not used in phasor math)
};

struct SourceImpedance {
    Complex positive{1.0, 10.0};  // also used for negative sequence
    Complex zero{2.0, 15.0};
};

struct LineParameters {
    double system_voltage = 230e3;  // line-to-line RMS, V
    double frequency = 50.0;
    double length_km = 250.0;
    SequenceImpedance positive{0.0368, 0.55e-3, 0.028e-6};
    SequenceImpedance zero{0.0328, 1.722e-3, 0.024e-6};
    double source1_angle = 0.0;   // degrees
    double source2_angle = 20.0;  // degrees
    double compensation_pct = 70.0;
    SourceImpedance source1;
    SourceImpedance source2;
    double ct_ratio = 2000.0;
    double sample_rate = 1000.0;

    void validate() const;
    double omega() const;
    double phase_voltage() const;
    /// Positive-sequence reactance of the whole line, ohm.
    double line_reactance() const;
    int samples_per_cycle() const;
};

struct FaultScenario {
    FaultType fault_type = FaultType::RG;
    double location_pct = 25.0;    // from bus A; 50 is the capacitor node
    double fault_resistance = 0.0; // ohm
    double inception_angle = 0.0;  // degrees, point on wave of phase R voltage
    double load_angle = 20.0;      // degrees, source 1 leads source 2
    double compensation_pct = 70.0;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    void validate() const;
    /// +1 when the fault is between bus A and the capacitor, -1 beyond it.
    int section() const { return location_pct < 50.0 ? +1 : -1; }
    /// Whether the series capacitor lies inside the fault loop.
    bool capacitor_in_loop() const { return location_pct > 50.0 && compensation_pct > 0.0; }
};

/// Thevenin equivalent at the fault point seen from bus A.
struct SequenceNetwork {
    Complex z1, z2, z0;
    Complex e;  // phase-R source voltage at inception (RMS phasor)
};

SequenceNetwork sequence_network(const LineParameters& line, const FaultScenario& scenario);

/// Steady-state phasors at bus A (primary amperes, RMS).
struct FaultPhasors {
    PhaseTriple post;      // total post-fault current (load + fault contribution)
    PhaseTriple pre;       // pre-fault load current
    PhaseTriple fault;     // fault contribution only
    Complex loop_impedance; // E / I1, sets the DC time constant
};

FaultPhasors fault_current_phasors(const LineParameters& line, const FaultScenario& scenario);

/// Amplitudes of the injected transient content, relative to the
/// fundamental of the phase they are added to.
struct TransientConfig {
    double dc_scale = 1.0;             // 1 = full continuity-preserving offset
    double subsync_ratio = 1.0;        // of the phase's fault-contribution peak
    double subsync_frequency = 25.0;   // Hz
    double subsync_tau = 0.02;         // s
    double subsync_phase_offset = 1.5707963267948966;  // rad, leads the fault current
    double subsync_phase_jitter = 0.25;                // rad, half-width of the seeded draw
    double harmonic3 = 0.05;
    double harmonic5 = 0.02;
    double hf_ratio = 0.02;
    double hf_frequency = 600.0;       // Hz
    double hf_tau = 0.01;              // s

    /// Everything off: post-fault samples are the bare fundamental.
    static TransientConfig none();
};

struct FaultLabel;

struct ThreePhaseRecord {
    std::array<std::vector<double>, 3> samples;  // secondary amperes
    double sample_rate = 1000.0;
    std::size_t fault_index = 0;
    FaultScenario scenario;

    std::size_t length() const { return samples[0].size(); }
};

/// Samples `pre_cycles` of load current followed by `post_cycles` of fault
/// current. Noise and random transient phases come from scenario.seed.
ThreePhaseRecord synthesize_waveform(const FaultPhasors& phasors, const FaultScenario& scenario,
                                     const LineParameters& line, int post_cycles,
                                     const TransientConfig& transients = {},
                                     int pre_cycles = 2);

/// Cartesian product of scenario axes. Fault type varies slowest and load
/// angle fastest. When `limit` is non-zero and smaller than the product, the
/// product is thinned to exactly `limit` records at evenly spaced indices.
struct ScenarioGrid {
    std::vector<FaultType> fault_types;
    std::vector<double> locations;
    std::vector<double> resistances;
    std::vector<double> inception_angles;
    std::vector<double> compensations;
    std::vector<double> load_angles{20.0};
    double snr_db = std::numeric_limits<double>::infinity();
    int post_cycles = 3;
    int pre_cycles = 2;
    std::size_t limit = 0;

    void validate() const;
    std::size_t product_size() const;
    std::size_t size() const;
    /// Scenario at output position `index` (seed left at 0).
    FaultScenario scenario_at(std::size_t index) const;

    /// 208-record training grid.
    static ScenarioGrid default_train();
    /// 916-record test grid.
    static ScenarioGrid default_test();
};

/// One record per grid point; record i is seeded with `seed ^ i`.
std::vector<ThreePhaseRecord> generate_dataset(const LineParameters& line, const ScenarioGrid& grid,
                                               std::uint64_t seed,
                                               const TransientConfig& transients = {});

/// Convenience: phasors + waveform for a single scenario.
ThreePhaseRecord simulate(const LineParameters& line, const FaultScenario& scenario,
                          int post_cycles = 3, const TransientConfig& transients = {});

}  // namespace lsfault
