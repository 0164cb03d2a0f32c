#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "wcpmem/fields.hpp"
#include "wcpmem/params.hpp"

namespace wcpmem {

using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Atomic levels of the Lambda system plus the terminal level that |e>
/// decays into.
enum class AtomLevel : int { g = 0, e = 1, r = 2, xi = 3 };

inline constexpr int kAtomLevels = 4;

/// Atom (4 levels) times cavity Fock space truncated at m_max photons.
/// Flat index = atom * (m_max + 1) + fock.
class HilbertSpace {
public:
    explicit HilbertSpace(int m_max);

    int m_max() const { return m_max_; }
    int fock_levels() const { return m_max_ + 1; }
    int dim() const { return kAtomLevels * (m_max_ + 1); }

    int index(AtomLevel atom, int fock) const { return static_cast<int>(atom) * (m_max_ + 1) + fock; }
    AtomLevel atom_of(int index) const { return static_cast<AtomLevel>(index / (m_max_ + 1)); }
    int fock_of(int index) const { return index % (m_max_ + 1); }

private:
    int m_max_;
};

/// Displaced-frame Hamiltonian with the instantaneous drive amplitude and
/// control value:
///   delta|r><r| - Delta|e><e| + (g|e><g|a + Omega|e><r| + h.c.)
///   + sqrt(2 kappa) (E a^dag + E^* a).
SparseMatrix build_hamiltonian(const PhysicalParams& params, const HilbertSpace& space, cplx drive, cplx control);

SparseMatrix build_hamiltonian(const PhysicalParams& params, const HilbertSpace& space, const PulseEnvelope& env,
                               const ControlField& ctrl, double t);

/// -i[H, rho] + L_gamma rho + L_kappa_tot rho, written into `out`.
void lindblad_rhs(const PhysicalParams& params, const HilbertSpace& space, const SparseMatrix& H,
                  const Eigen::Ref<const Matrix>& rho, Eigen::Ref<Matrix> out);

Matrix lindblad_rhs(const PhysicalParams& params, const HilbertSpace& space, const SparseMatrix& H,
                    const Matrix& rho);

/// Largest |rho_ij - conj(rho_ji)|.
double hermiticity_defect(const Eigen::Ref<const Matrix>& rho);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const Eigen::Ref<const Matrix>& rho);

// ----------------------------------------------------------------------------
// Joint atom x cavity x line-mode space for the effective Hamiltonian. Meant
// for validation on small mode grids: the dimension grows as N^2.

/// A basis vector |atom, cavity photons, line-mode occupation>. The line
/// holds at most two photons: `modes` lists occupied mode indices in
/// ascending order, with a repeated index for a doubly occupied mode.
struct JointState {
    AtomLevel atom;
    int cavity;
    std::vector<int> modes;
};

class JointSpace {
public:
    /// All states with atom in {g, e, r} and at most `max_photons` (<= 2)
    /// photons shared between cavity and line.
    JointSpace(int mode_count, int max_photons = 2, std::size_t max_dim = 200'000);

    int mode_count() const { return mode_count_; }
    int max_photons() const { return max_photons_; }
    int dim() const { return static_cast<int>(states_.size()); }
    const JointState& state(int index) const { return states_[static_cast<std::size_t>(index)]; }

    /// Index of a basis state, or -1 when it lies outside the truncated space.
    int index_of(AtomLevel atom, int cavity, std::vector<int> modes) const;

    /// Total excitations: line photons + cavity photons + [atom in e or r].
    int excitations(int index) const;

private:
    long long key(AtomLevel atom, int cavity, int m1, int m2) const;

    int mode_count_;
    int max_photons_;
    std::vector<JointState> states_;
    std::vector<std::pair<long long, int>> lookup_;  // sorted by key
};

/// H_tot(t) - i gamma|e><e| - i kappa_loss a^dag a, with the line modes and
/// their uniform coupling taken from `modes`. No input drive term: the pulse
/// lives in the initial state of the line.
SparseMatrix build_effective_hamiltonian(const PhysicalParams& params, const JointSpace& space,
                                         const ControlField& ctrl, const ModeGrid& modes, double t);

/// Diagonal operator sum_k b_k^dag b_k + a^dag a + |e><e| + |r><r|.
SparseMatrix excitation_number_operator(const JointSpace& space);

}  // namespace wcpmem
