#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the parameter and field types.

#include <Eigen/Dense>

#include "wcpmem/fields.hpp"
#include "wcpmem/params.hpp"

namespace oracle {

using wcpmem::cplx;
using Dense = Eigen::MatrixXcd;

/// Atom (g, e, r, xi) x Fock(0..m) operators assembled from Kronecker products.
struct DenseModel {
    int m;
    Dense a, ad, Pe, Pr, Seg, Ser, Sxe;  // Sij = |i><j|

    explicit DenseModel(int m_max);
    int dim() const { return static_cast<int>(a.rows()); }
    Dense hamiltonian(const wcpmem::PhysicalParams& p, cplx drive, cplx control) const;
    /// Full Lindblad right-hand side.
    Dense lindblad(const wcpmem::PhysicalParams& p, const Dense& H, const Dense& rho) const;
    /// Same generator with the recycling terms of the gamma and kappa_loss
    /// channels removed: what remains is the evolution conditioned on neither
    /// of those jumps (radiative emission into the line is kept).
    Dense no_loss_jump(const wcpmem::PhysicalParams& p, const Dense& H, const Dense& rho) const;
    double stored(const Dense& rho) const;
};

enum class Generator { full, no_loss_jump };

/// Fixed-step classical RK4 from |g,0><g,0| at t1. Returns
/// sum_m <r,m|rho(t2)|r,m> (unnormalized for the conditioned generator).
double rk4_efficiency(Generator which, const wcpmem::PhysicalParams& p, const wcpmem::PulseEnvelope& env,
                      const wcpmem::ControlField& ctrl, double t1, double t2, int m_max, int steps);

/// Cubic y(n) = c1 n + c2 n^2 + c3 n^3 interpolating three
/// points; returns (c1, c2, c3).
Eigen::Vector3d cubic_through_origin(const double n[3], const double y[3]);

}  // namespace oracle
