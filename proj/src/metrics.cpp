#include "wcpmem/metrics.hpp"

#include <cmath>
#include <string>

#include "wcpmem/errors.hpp"

namespace wcpmem {

double cooperativity(const PhysicalParams& params) {
    params.validate();
    return params.g * params.g / (params.kappa_tot() * params.gamma);
}

double max_single_photon_efficiency(const PhysicalParams& params) {
    const double C = cooperativity(params);
    return params.kappa / params.kappa_tot() * C / (1.0 + C);
}

double fidelity_from_efficiency(double eta, double norm) {
    if (!(norm > 0.0)) throw InvalidParameter("fidelity_from_efficiency: photon-number norm must be positive");
    return eta / norm;
}

EfficiencyPair series_eta(double n, double eta1, double eta2) {
    if (!(n >= 0.0)) throw InvalidParameter("series_eta: n must be non-negative");
    const double slope = 0.5 * eta2 - eta1;
    return {n * eta1 + n * n * slope, eta1 + n * slope};
}

double mixed_state_efficiency(std::span<const double> weights, std::span<const double> etas) {
    if (weights.size() != etas.size())
        throw DimensionMismatch("mixed_state_efficiency: weights and efficiencies differ in length");
    if (weights.empty()) throw InvalidParameter("mixed_state_efficiency: empty mixture");
    double total = 0.0;
    double eta = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw InvalidParameter("mixed_state_efficiency: negative weight");
        total += weights[i];
        eta += weights[i] * etas[i];
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw InvalidParameter("mixed_state_efficiency: weights sum to " + std::to_string(total) + ", not 1");
    return eta;
}

Adiabaticity adiabaticity(const PhysicalParams& params, double Tc) {
    if (!(Tc > 0.0)) throw InvalidParameter("adiabaticity: Tc must be positive");
    const double value = params.gamma * Tc * cooperativity(params);
    return {value, value > kAdiabaticThreshold};
}

PhysicalParams ensemble_params(const PhysicalParams& params, int atoms) {
    if (atoms < 1) throw InvalidParameter("ensemble_params: atom count must be at least 1");
    PhysicalParams out = params;
    out.g = params.g * std::sqrt(static_cast<double>(atoms));
    return out;
}

FigureOfMerit figure_of_merit(const PhysicalParams& params, double Tc) {
    return {cooperativity(params), max_single_photon_efficiency(params), adiabaticity(params, Tc).value};
}

}  // namespace wcpmem
