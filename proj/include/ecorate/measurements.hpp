#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ecorate/diagnostics.hpp"
#include "ecorate/errors.hpp"

namespace ecorate {

enum class Device { cpu, gpu, ram };

inline std::string_view to_string(Device d) {
    switch (d) {
        case Device::cpu: return "cpu";
        case Device::gpu: return "gpu";
        case Device::ram: return "ram";
    }
    return "?";
}

inline Device device_from_string(std::string_view s) {
    if (s == "cpu") return Device::cpu;
    if (s == "gpu") return Device::gpu;
    if (s == "ram") return Device::ram;
    throw input_error("unknown device '" + std::string(s) + "' (expected cpu, gpu or ram)");
}

/// One timestamped power reading from a device.
struct PowerSample {
    Device device = Device::cpu;
    double watts = 0.0;
    std::int64_t tick = 0; // sample ordinal
};

/// An offline power trace for one (model, benchmark) run.
struct EnergyLog {
    std::string model_id;
    std::string benchmark_id;
    std::vector<PowerSample> samples;
    double dt = 1.0; // sampling interval in seconds
};

/// Raw per-model result on one benchmark. Accuracy is oriented
/// higher-is-better; callers must negate lower-is-better metrics.
struct Measurement {
    std::string model_id;
    std::string benchmark_id;
    double accuracy_raw = 0.0;
    double energy_joules = 0.0;
};

/// All measurements for one benchmark, one row per model.
struct Dataset {
    std::string benchmark_id;
    std::vector<Measurement> measurements;
};

/// A model placed in the unit square: x = energy efficiency, y = accuracy.
struct NormalizedPoint {
    std::string model_id;
    double eff = 0.0;
    double acc = 0.0;
};

/// Total energy of a power trace: sum of watts * dt over all samples.
/// Empty traces integrate to zero.
inline double aggregate_energy(const EnergyLog& log) {
    if (!(log.dt > 0.0))
        throw input_error("energy log '" + log.model_id + "': dt must be positive");
    double joules = 0.0;
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        const PowerSample& s = log.samples[i];
        if (s.watts < 0.0)
            throw input_error("energy log '" + log.model_id + "': negative watts at sample " +
                              std::to_string(i));
        joules += s.watts * log.dt;
    }
    return joules;
}

/// Min-max scaling to [0,1]. A degenerate spread (max == min) maps every
/// value to the neutral 0.5 and emits a diagnostic instead of failing.
inline std::vector<double> minmax_normalize(std::span<const double> values,
                                            Diagnostics* diagnostics = nullptr) {
    if (values.size() < 2)
        throw input_error("minmax_normalize: need at least 2 values, got " +
                          std::to_string(values.size()));
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
        emit(diagnostics, diag::degenerate_spread,
             "all " + std::to_string(values.size()) + " values equal " + std::to_string(lo) +
                 "; normalized to 0.5");
        return std::vector<double>(values.size(), 0.5);
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back((v - lo) / (hi - lo));
    return out;
}

inline void validate(const Dataset& ds) {
    if (ds.measurements.size() < 2)
        throw input_error("dataset '" + ds.benchmark_id + "': need at least 2 models, got " +
                          std::to_string(ds.measurements.size()));
    std::unordered_set<std::string> ids;
    for (const Measurement& m : ds.measurements) {
        if (m.benchmark_id != ds.benchmark_id)
            throw input_error("dataset '" + ds.benchmark_id + "': row for '" + m.model_id +
                              "' carries benchmark '" + m.benchmark_id + "'");
        if (!ids.insert(m.model_id).second)
            throw input_error("dataset '" + ds.benchmark_id + "': duplicate model_id '" +
                              m.model_id + "'");
        if (m.energy_joules < 0.0)
            throw input_error("dataset '" + ds.benchmark_id + "': negative energy for '" +
                              m.model_id + "'");
    }
}

/// Normalize a dataset into unit-square points: acc = minmax(accuracy),
/// eff = 1 - minmax(energy). The cheapest model gets eff = 1.
inline std::vector<NormalizedPoint> to_points(const Dataset& ds,
                                              Diagnostics* diagnostics = nullptr) {
    validate(ds);
    std::vector<double> acc, energy;
    acc.reserve(ds.measurements.size());
    energy.reserve(ds.measurements.size());
    for (const Measurement& m : ds.measurements) {
        acc.push_back(m.accuracy_raw);
        energy.push_back(m.energy_joules);
    }
    const std::vector<double> acc_norm = minmax_normalize(acc, diagnostics);
    const std::vector<double> energy_norm = minmax_normalize(energy, diagnostics);
    std::vector<NormalizedPoint> points;
    points.reserve(ds.measurements.size());
    for (std::size_t i = 0; i < ds.measurements.size(); ++i) {
        points.push_back(NormalizedPoint{ds.measurements[i].model_id,
                                         1.0 - energy_norm[i], acc_norm[i]});
    }
    return points;
}

} // namespace ecorate
