#pragma once

#include <span>

#include "wcpmem/params.hpp"

namespace wcpmem {

/// C = g^2 / (kappa_tot gamma)
double cooperativity(const PhysicalParams& params);

/// Upper bound on adiabatic single-photon storage, (kappa/kappa_tot) C/(1+C).
double max_single_photon_efficiency(const PhysicalParams& params);

/// nu = eta / norm, where norm is the impinging photon number on the window.
double fidelity_from_efficiency(double eta, double norm);

struct EfficiencyPair {
    double eta;
    double nu;
};

/// Second-order weak-pulse expansion in terms of the one- and two-photon
/// storage efficiencies:
///   eta = n eta1 + n^2 (eta2/2 - eta1),  nu = eta1 + n (eta2/2 - eta1).
EfficiencyPair series_eta(double n, double eta1, double eta2);

/// eta = sum_a p_a eta_a for a statistical mixture of input pulses. Weights
/// must be non-negative and sum to one within 1e-10.
double mixed_state_efficiency(std::span<const double> weights, std::span<const double> etas);

struct Adiabaticity {
    double value;  ///< gamma Tc C
    bool adiabatic;
};

/// Above this gamma*Tc*C the adiabatic control is treated as effective.
inline constexpr double kAdiabaticThreshold = 10.0;

Adiabaticity adiabaticity(const PhysicalParams& params, double Tc);

/// M identical atoms coupled collectively: g -> g sqrt(M). Valid for a
/// single-photon input only; everything else is passed through unchanged.
PhysicalParams ensemble_params(const PhysicalParams& params, int atoms);

struct FigureOfMerit {
    double C;
    double eta_max_sp;
    double adiabaticity;
};

FigureOfMerit figure_of_merit(const PhysicalParams& params, double Tc);

}  // namespace wcpmem
