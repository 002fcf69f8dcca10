#pragma once

#include <cstddef>
#include <string_view>

#include "json.hpp"

#include "owagen/error.hpp"
#include "owagen/generate.hpp"

namespace owagen {

inline std::string_view to_string(GenerationPath path) noexcept {
    switch (path) {
    case GenerationPath::calibrated:
        return "calibrated";
    case GenerationPath::dirac:
        return "dirac";
    case GenerationPath::dirac_fallback:
        return "dirac_fallback";
    case GenerationPath::single:
        return "single";
    }
    return "?";
}

/// {"weights":[...],"alpha":..,"delta":..,"n":..,"orness":..,"dispersion":..,"tradeoff":..,"feasible":true,...}
///
/// Doubles are written with round-trip precision, so recomputing the metrics
/// from the parsed weights reproduces the reported values exactly. Metrics
/// are null for the single-criterion case.
inline nlohmann::json to_json(const GenerationOutcome& out) {
    auto optional_number = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    nlohmann::json j;
    j["weights"] = out.weights.to_vector();
    j["alpha"] = out.requested.alpha;
    j["delta"] = out.requested.delta;
    j["n"] = out.weights.size();
    j["orness"] = optional_number(out.achieved_orness);
    j["dispersion"] = optional_number(out.achieved_dispersion);
    j["tradeoff"] = optional_number(out.achieved_tradeoff);
    j["feasible"] = true;
    j["path"] = to_string(out.path);
    if (out.calibration) {
        j["distance"] = out.calibration->distance;
        j["mu"] = out.calibration->spec.mu;
        j["sigma"] = out.calibration->spec.sigma;
    }
    return j;
}

/// {"code":"infeasible","message":..,"delta_max":..,"alpha":..,"delta":..,"n":..,"distance":..,"feasible":false}
inline nlohmann::json to_json(const InfeasibleError& e, std::size_t n) {
    return {{"code", "infeasible"}, {"message", e.what()}, {"delta_max", e.delta_max()},
            {"alpha", e.alpha()},   {"delta", e.delta()},  {"n", n},
            {"distance", e.distance()}, {"feasible", false}};
}

}  // namespace owagen
