#include "lsfault/fault_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lsfault/errors.hpp"

namespace lsfault {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kA = std::polar(1.0, 2.0 * kPi / 3.0);  // 120 degree operator
const Complex kA2 = kA * kA;

double deg2rad(double deg) { return deg * kPi / 180.0; }

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

// Sequence currents in the frame of `ref` (0=R, 1=Y, 2=B) mapped back to R, Y, B.
PhaseTriple to_phases(int ref, Complex i0, Complex i1, Complex i2) {
    PhaseTriple rotated{i0 + i1 + i2, i0 + kA2 * i1 + kA * i2, i0 + kA * i1 + kA2 * i2};
    PhaseTriple out;
    for (int k = 0; k < 3; ++k) out[static_cast<std::size_t>((ref + k) % 3)] = rotated[static_cast<std::size_t>(k)];
    return out;
}

// Phase voltage of phase `ref` given phase R's.
Complex phase_voltage(Complex e_r, int ref) {
    static const Complex shift[3] = {Complex(1.0, 0.0), kA2, kA};
    return e_r * shift[ref];
}

struct SequenceSolution {
    PhaseTriple currents{};
    Complex i1{};
};

// Textbook sequence-network connections. For single-phase-to-ground the
// reference phase is the faulted one; for phase-to-phase and
// double-phase-to-ground it is the healthy one.
SequenceSolution solve_fault(FaultType type, const SequenceNetwork& net, double rf) {
    const Complex zf(rf, 0.0);
    const auto& [z1, z2, z0, e] = net;
    auto single_to_ground = [&](int ref) {
        const Complex i = phase_voltage(e, ref) / (z1 + z2 + z0 + 3.0 * zf);
        return SequenceSolution{to_phases(ref, i, i, i), i};
    };
    auto phase_to_phase = [&](int ref) {
        const Complex i1 = phase_voltage(e, ref) / (z1 + z2 + zf);
        return SequenceSolution{to_phases(ref, 0.0, i1, -i1), i1};
    };
    // Fault resistance in each faulted phase, solid ground behind them.
    auto double_to_ground = [&](int ref) {
        const Complex zn = z2 + zf;
        const Complex zz = z0 + zf;
        const Complex i1 = phase_voltage(e, ref) / (z1 + zf + zn * zz / (zn + zz));
        const Complex i2 = -i1 * zz / (zn + zz);
        const Complex i0 = -i1 * zn / (zn + zz);
        return SequenceSolution{to_phases(ref, i0, i1, i2), i1};
    };

    switch (type) {
        case FaultType::None: return {};
        case FaultType::RG: return single_to_ground(0);
        case FaultType::YG: return single_to_ground(1);
        case FaultType::BG: return single_to_ground(2);
        case FaultType::RY: return phase_to_phase(2);
        case FaultType::RB: return phase_to_phase(1);
        case FaultType::YB: return phase_to_phase(0);
        case FaultType::RYG: return double_to_ground(2);
        case FaultType::RBG: return double_to_ground(1);
        case FaultType::YBG: return double_to_ground(0);
        case FaultType::RYB:
        case FaultType::RYBG: {
            // Balanced: a ground connection carries no current.
            const Complex i1 = e / (z1 + zf);
            return {to_phases(0, 0.0, i1, 0.0), i1};
        }
    }
    return {};
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, two uniform draws per sample.
double standard_normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - unit_uniform(rng);
    const double u2 = unit_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double peak_sine(Complex phasor, double omega_t) {
    return std::sqrt(2.0) * std::abs(phasor) * std::sin(omega_t + std::arg(phasor));
}

}  // namespace

// ---------------------------------------------------------------- parameters

void LineParameters::validate() const {
    if (!(system_voltage > 0.0) || !(frequency > 0.0) || !(length_km > 0.0))
        throw InvalidInput("line voltage, frequency and length must be > 0");
    if (!(positive.r_per_km > 0.0) || !(positive.l_per_km > 0.0) || !(zero.r_per_km > 0.0) ||
        !(zero.l_per_km > 0.0))
        throw InvalidInput("line resistances and inductances must be > 0");
    if (!(compensation_pct >= 0.0 && compensation_pct <= 100.0))
        throw InvalidInput("compensation must lie in [0, 100] percent");
    if (!(ct_ratio > 0.0)) throw InvalidInput("CT ratio must be > 0");
    if (!(sample_rate > 0.0)) throw InvalidInput("sample rate must be > 0");
    const double spc = sample_rate / frequency;
    if (std::abs(spc - std::round(spc)) > 1e-9)
        throw InvalidInput("sample rate must be an integer multiple of the frequency");
}

double LineParameters::omega() const { return 2.0 * kPi * frequency; }

double LineParameters::phase_voltage() const { return system_voltage / std::sqrt(3.0); }

double LineParameters::line_reactance() const { return omega() * positive.l_per_km * length_km; }

int LineParameters::samples_per_cycle() const {
    return static_cast<int>(std::lround(sample_rate / frequency));
}

void FaultScenario::validate() const {
    if (!(location_pct > 0.0 && location_pct < 100.0))
        throw InvalidInput("fault location must lie strictly between 0 and 100 percent");
    if (location_pct == 50.0)
        throw InvalidInput("fault location 50% is the capacitor node and is excluded");
    if (!finite_nonneg(fault_resistance)) throw InvalidInput("fault resistance must be >= 0");
    if (!std::isfinite(inception_angle) || !std::isfinite(load_angle))
        throw InvalidInput("inception and load angles must be finite");
    if (!(compensation_pct >= 0.0 && compensation_pct <= 100.0))
        throw InvalidInput("compensation must lie in [0, 100] percent");
    if (std::isnan(snr_db)) throw InvalidInput("snr must be a number or +inf");
}

TransientConfig TransientConfig::none() {
    TransientConfig t;
    t.dc_scale = 0.0;
    t.subsync_ratio = 0.0;
    t.harmonic3 = 0.0;
    t.harmonic5 = 0.0;
    t.hf_ratio = 0.0;
    return t;
}

// ------------------------------------------------------------------- phasors

SequenceNetwork sequence_network(const LineParameters& line, const FaultScenario& scenario) {
    line.validate();
    scenario.validate();
    const double w = line.omega();
    const double km = scenario.location_pct / 100.0 * line.length_km;
    const Complex line1(line.positive.r_per_km * km, w * line.positive.l_per_km * km);
    const Complex line0(line.zero.r_per_km * km, w * line.zero.l_per_km * km);

    // The capacitor sits in every phase, so it shifts all three sequence networks.
    Complex cap(0.0, 0.0);
    if (scenario.location_pct > 50.0)
        cap = Complex(0.0, -scenario.compensation_pct / 100.0 * line.line_reactance());

    SequenceNetwork net;
    net.z1 = line.source1.positive + line1 + cap;
    net.z2 = net.z1;
    net.z0 = line.source1.zero + line0 + cap;
    net.e = std::polar(line.phase_voltage(), deg2rad(scenario.inception_angle + line.source1_angle));
    return net;
}

FaultPhasors fault_current_phasors(const LineParameters& line, const FaultScenario& scenario) {
    const SequenceNetwork net = sequence_network(line, scenario);

    // Pre-fault load flow between the two sources through the whole line.
    const double w = line.omega();
    const Complex line_total(line.positive.r_per_km * line.length_km,
                             w * line.positive.l_per_km * line.length_km);
    const Complex cap(0.0, -scenario.compensation_pct / 100.0 * line.line_reactance());
    const Complex z_total = line.source1.positive + line_total + cap + line.source2.positive;
    const Complex e2 = net.e * std::polar(1.0, -deg2rad(scenario.load_angle));
    const Complex load_r = (net.e - e2) / z_total;

    FaultPhasors out;
    out.pre = {load_r, load_r * kA2, load_r * kA};
    const SequenceSolution sol = solve_fault(scenario.fault_type, net, scenario.fault_resistance);
    out.fault = sol.currents;
    for (std::size_t p = 0; p < 3; ++p) out.post[p] = out.pre[p] + out.fault[p];
    out.loop_impedance = sol.i1 == Complex(0.0, 0.0) ? Complex(0.0, 0.0) : net.e / sol.i1;
    return out;
}

// ----------------------------------------------------------------- waveforms

ThreePhaseRecord synthesize_waveform(const FaultPhasors& phasors, const FaultScenario& scenario,
                                     const LineParameters& line, int post_cycles,
                                     const TransientConfig& tr, int pre_cycles) {
    line.validate();
    scenario.validate();
    if (post_cycles < 2) throw InvalidInput("need at least 2 post-fault cycles");
    if (pre_cycles < 1) throw InvalidInput("need at least 1 pre-fault cycle");

    const int spc = line.samples_per_cycle();
    const std::size_t k = static_cast<std::size_t>(pre_cycles * spc);
    const std::size_t total = k + static_cast<std::size_t>(post_cycles * spc);
    const double w = line.omega();
    const double dt = 1.0 / line.sample_rate;

    const Involvement inv = involvement(scenario.fault_type);
    const std::array<bool, 3> faulted{inv.r, inv.y, inv.b};

    double tau_dc = 0.0;
    {
        const Complex z = phasors.loop_impedance;
        if (z.real() > 0.0) tau_dc = std::max(z.imag(), 0.0) / (w * z.real());
        tau_dc = std::clamp(tau_dc, 1e-4, 1.0);
    }
    const bool subsync = scenario.capacitor_in_loop() && tr.subsync_ratio != 0.0;
    const double w_sub = 2.0 * kPi * tr.subsync_frequency;
    const double w_hf = 2.0 * kPi * tr.hf_frequency;

    std::mt19937_64 rng(scenario.seed);
    std::array<double, 3> sub_phase{}, hf_phase{};
    // The sub-synchronous term is phase-referenced to each phase's fault
    // contribution, with a seeded jitter.
    for (std::size_t p = 0; p < 3; ++p)
        sub_phase[p] = std::arg(phasors.fault[p]) + tr.subsync_phase_offset +
                       tr.subsync_phase_jitter * (2.0 * unit_uniform(rng) - 1.0);
    for (auto& p : hf_phase) p = 2.0 * kPi * unit_uniform(rng);

    ThreePhaseRecord rec;
    rec.sample_rate = line.sample_rate;
    rec.fault_index = k;
    rec.scenario = scenario;

    for (std::size_t p = 0; p < 3; ++p) {
        const Complex post = phasors.post[p];
        const double peak = std::sqrt(2.0) * std::abs(post);
        const double sub_amp =
            subsync && faulted[p] ? tr.subsync_ratio * std::sqrt(2.0) * std::abs(phasors.fault[p]) : 0.0;
        const double h3 = faulted[p] ? tr.harmonic3 * peak : 0.0;
        const double h5 = faulted[p] ? tr.harmonic5 * peak : 0.0;
        const double hf = faulted[p] ? tr.hf_ratio * peak : 0.0;

        auto steady_and_transient = [&](double t) {
            const double wt = w * t;
            return peak_sine(post, wt) +
                   sub_amp * std::exp(-t / tr.subsync_tau) * std::sin(w_sub * t + sub_phase[p]) +
                   h3 * std::sin(3.0 * (wt + std::arg(post))) +
                   h5 * std::sin(5.0 * (wt + std::arg(post))) +
                   hf * std::exp(-t / tr.hf_tau) * std::sin(w_hf * t + hf_phase[p]);
        };
        // Offset that makes the current continuous through inception.
        const double dc_amp = tr.dc_scale * (peak_sine(phasors.pre[p], 0.0) - steady_and_transient(0.0));

        auto& out = rec.samples[p];
        out.resize(total);
        for (std::size_t n = 0; n < total; ++n) {
            const double t = (static_cast<double>(n) - static_cast<double>(k)) * dt;
            if (n < k)
                out[n] = peak_sine(phasors.pre[p], w * t);
            else
                out[n] = steady_and_transient(t) + dc_amp * std::exp(-t / tau_dc);
        }
    }

    // Drawn even for an infinite SNR, with zero gain.
    const double snr_gain = std::isinf(scenario.snr_db) && scenario.snr_db > 0.0
                                ? 0.0
                                : std::pow(10.0, -scenario.snr_db / 20.0);
    for (auto& phase : rec.samples) {
        double power = 0.0;
        for (double v : phase) power += v * v;
        const double sigma = snr_gain * std::sqrt(power / static_cast<double>(phase.size()));
        for (double& v : phase) v += sigma * standard_normal(rng);
    }

    for (auto& phase : rec.samples)
        for (double& v : phase) v /= line.ct_ratio;
    return rec;
}

ThreePhaseRecord simulate(const LineParameters& line, const FaultScenario& scenario, int post_cycles,
                          const TransientConfig& transients) {
    return synthesize_waveform(fault_current_phasors(line, scenario), scenario, line, post_cycles,
                               transients);
}

// ------------------------------------------------------------------ datasets

void ScenarioGrid::validate() const {
    if (fault_types.empty() || locations.empty() || resistances.empty() ||
        inception_angles.empty() || compensations.empty() || load_angles.empty())
        throw InvalidInput("scenario grid has an empty axis");
    for (double loc : locations) {
        if (!(loc > 0.0 && loc < 100.0) || loc == 50.0)
            throw InvalidInput("grid location " + std::to_string(loc) +
                               " outside (0,100) or on the capacitor node");
    }
    for (double r : resistances)
        if (!finite_nonneg(r)) throw InvalidInput("grid fault resistance must be >= 0");
    for (double c : compensations)
        if (!(c >= 0.0 && c <= 100.0)) throw InvalidInput("grid compensation must lie in [0,100]");
    if (post_cycles < 2 || pre_cycles < 1) throw InvalidInput("grid record length too short");
    if (std::isnan(snr_db)) throw InvalidInput("grid snr must be a number or +inf");
}

std::size_t ScenarioGrid::product_size() const {
    return fault_types.size() * locations.size() * resistances.size() * inception_angles.size() *
           compensations.size() * load_angles.size();
}

std::size_t ScenarioGrid::size() const {
    const std::size_t p = product_size();
    return limit != 0 && limit < p ? limit : p;
}

FaultScenario ScenarioGrid::scenario_at(std::size_t index) const {
    const std::size_t p = product_size();
    std::size_t flat = index;
    if (limit != 0 && limit < p) flat = index * p / limit;

    FaultScenario s;
    auto take = [&flat](const auto& axis) {
        const auto& v = axis[flat % axis.size()];
        flat /= axis.size();
        return v;
    };
    s.load_angle = take(load_angles);
    s.compensation_pct = take(compensations);
    s.inception_angle = take(inception_angles);
    s.fault_resistance = take(resistances);
    s.location_pct = take(locations);
    s.fault_type = take(fault_types);
    s.snr_db = snr_db;
    return s;
}

std::vector<ThreePhaseRecord> generate_dataset(const LineParameters& line, const ScenarioGrid& grid,
                                               std::uint64_t seed,
                                               const TransientConfig& transients) {
    line.validate();
    grid.validate();
    const std::size_t n = grid.size();
    std::vector<ThreePhaseRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        FaultScenario s = grid.scenario_at(i);
        s.seed = seed ^ static_cast<std::uint64_t>(i);
        records.push_back(synthesize_waveform(fault_current_phasors(line, s), s, line,
                                              grid.post_cycles, transients, grid.pre_cycles));
    }
    return records;
}

ScenarioGrid ScenarioGrid::default_train() {
    ScenarioGrid g;
    g.fault_types.assign(kFaultClasses.begin(), kFaultClasses.end());
    g.locations = {10, 30, 45, 55, 70, 90};
    g.resistances = {60, 80, 100};
    g.inception_angles = {95, 105, 115, 125, 135, 145, 155, 165, 175};
    g.compensations = {50, 70};
    g.limit = 208;
    return g;
}

ScenarioGrid ScenarioGrid::default_test() {
    ScenarioGrid g;
    g.fault_types.assign(kFaultClasses.begin(), kFaultClasses.end());
    g.locations = {15, 25, 35, 40, 60, 65, 75, 85};
    g.resistances = {60, 70, 80, 90, 100};
    g.inception_angles = {95, 100, 110, 120, 125, 135, 150, 160, 175};
    g.compensations = {50, 60, 70};
    g.limit = 916;
    return g;
}

}  // namespace lsfault
