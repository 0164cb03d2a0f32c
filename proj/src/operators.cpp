#include "wcpmem/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "wcpmem/errors.hpp"

namespace wcpmem {

HilbertSpace::HilbertSpace(int m_max) : m_max_(m_max) {
    if (m_max < 1) throw InvalidParameter("HilbertSpace: m_max must be at least 1");
}

SparseMatrix build_hamiltonian(const PhysicalParams& params, const HilbertSpace& space, cplx drive, cplx control) {
    using T = Eigen::Triplet<cplx>;
    const int fock = space.fock_levels();
    std::vector<T> entries;
    entries.reserve(static_cast<std::size_t>(12 * fock));

    auto add_pair = [&](int row, int col, cplx value) {
        if (value == cplx{}) return;
        entries.emplace_back(row, col, value);
        entries.emplace_back(col, row, std::conj(value));
    };

    const double drive_scale = std::sqrt(2.0 * params.kappa);
    for (int m = 0; m < fock; ++m) {
        const int e_m = space.index(AtomLevel::e, m);
        const int r_m = space.index(AtomLevel::r, m);
        if (params.delta != 0.0) entries.emplace_back(r_m, r_m, params.delta);
        if (params.Delta != 0.0) entries.emplace_back(e_m, e_m, -params.Delta);
        add_pair(e_m, r_m, control);
        if (m + 1 < fock) {
            const double root = std::sqrt(static_cast<double>(m + 1));
            add_pair(e_m, space.index(AtomLevel::g, m + 1), params.g * root);
            // Cavity drive acts on every atomic level, the terminal one included.
            for (int a = 0; a < kAtomLevels; ++a) {
                const auto level = static_cast<AtomLevel>(a);
                add_pair(space.index(level, m + 1), space.index(level, m), drive_scale * drive * root);
            }
        }
    }

    SparseMatrix H(space.dim(), space.dim());
    H.setFromTriplets(entries.begin(), entries.end());
    return H;
}

SparseMatrix build_hamiltonian(const PhysicalParams& params, const HilbertSpace& space, const PulseEnvelope& env,
                               const ControlField& ctrl, double t) {
    return build_hamiltonian(params, space, env(t), ctrl(t));
}

void lindblad_rhs(const PhysicalParams& params, const HilbertSpace& space, const SparseMatrix& H,
                  const Eigen::Ref<const Matrix>& rho, Eigen::Ref<Matrix> out) {
    const int dim = space.dim();
    if (H.rows() != dim || H.cols() != dim || rho.rows() != dim || rho.cols() != dim || out.rows() != dim ||
        out.cols() != dim)
        throw DimensionMismatch("lindblad_rhs: operator dimensions do not match the Hilbert space");

    const cplx minus_i{0.0, -1.0};
    out.noalias() = minus_i * (H * rho);
    out.noalias() -= minus_i * (rho * H);

    const int fock = space.fock_levels();
    const int e0 = space.index(AtomLevel::e, 0);
    const int xi0 = space.index(AtomLevel::xi, 0);
    const double gamma = params.gamma;
    const double kappa = params.kappa_tot();

    // gamma (2 |xi><e| rho |e><xi| - {|e><e|, rho})
    if (gamma != 0.0) {
        out.block(xi0, xi0, fock, fock) += 2.0 * gamma * rho.block(e0, e0, fock, fock);
        out.middleRows(e0, fock) -= gamma * rho.middleRows(e0, fock);
        out.middleCols(e0, fock) -= gamma * rho.middleCols(e0, fock);
    }

    // kappa_tot (2 a rho a^dag - {a^dag a, rho}); a acts on the Fock index
    // within each atomic block.
    if (kappa != 0.0) {
        for (int col = 0; col < dim; ++col) {
            const int mc = space.fock_of(col);
            for (int row = 0; row < dim; ++row) {
                const int mr = space.fock_of(row);
                cplx v = -kappa * static_cast<double>(mr + mc) * rho(row, col);
                if (mr + 1 < fock && mc + 1 < fock) {
                    v += 2.0 * kappa * std::sqrt(static_cast<double>((mr + 1) * (mc + 1))) * rho(row + 1, col + 1);
                }
                out(row, col) += v;
            }
        }
    }
}

Matrix lindblad_rhs(const PhysicalParams& params, const HilbertSpace& space, const SparseMatrix& H,
                    const Matrix& rho) {
    Matrix out(rho.rows(), rho.cols());
    lindblad_rhs(params, space, H, rho, out);
    return out;
}

double hermiticity_defect(const Eigen::Ref<const Matrix>& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::Ref<const Matrix>& rho) {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// ----------------------------------------------------------------------------

JointSpace::JointSpace(int mode_count, int max_photons, std::size_t max_dim)
    : mode_count_(mode_count), max_photons_(max_photons) {
    if (mode_count < 1) throw InvalidParameter("JointSpace: need at least one line mode");
    if (max_photons < 0 || max_photons > 2) throw InvalidParameter("JointSpace: max_photons must be 0, 1 or 2");

    const auto n = static_cast<std::size_t>(mode_count);
    std::size_t line_configs = 1;
    if (max_photons >= 1) line_configs += n;
    if (max_photons >= 2) line_configs += n * (n + 1) / 2;
    const std::size_t estimate = 3 * line_configs * static_cast<std::size_t>(max_photons + 1);
    if (estimate > max_dim)
        throw CapacityError("JointSpace: about " + std::to_string(estimate) + " states exceed the limit of " +
                            std::to_string(max_dim) + "; reduce the mode count");

    for (int a = 0; a < 3; ++a) {
        const auto atom = static_cast<AtomLevel>(a);
        for (int c = 0; c <= max_photons; ++c) {
            const int line_budget = max_photons - c;
            states_.push_back({atom, c, {}});
            if (line_budget >= 1)
                for (int k = 0; k < mode_count; ++k) states_.push_back({atom, c, {k}});
            if (line_budget >= 2)
                for (int k = 0; k < mode_count; ++k)
                    for (int q = k; q < mode_count; ++q) states_.push_back({atom, c, {k, q}});
        }
    }
    lookup_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const auto& s = states_[i];
        const int m1 = s.modes.size() > 0 ? s.modes[0] : -1;
        const int m2 = s.modes.size() > 1 ? s.modes[1] : -1;
        lookup_.emplace_back(key(s.atom, s.cavity, m1, m2), static_cast<int>(i));
    }
    std::sort(lookup_.begin(), lookup_.end());
}

long long JointSpace::key(AtomLevel atom, int cavity, int m1, int m2) const {
    const long long base = mode_count_ + 1;
    return (((static_cast<long long>(atom) * 8 + cavity) * base + (m1 + 1)) * base) + (m2 + 1);
}

int JointSpace::index_of(AtomLevel atom, int cavity, std::vector<int> modes) const {
    if (atom == AtomLevel::xi || cavity < 0) return -1;
    std::sort(modes.begin(), modes.end());
    if (cavity + static_cast<int>(modes.size()) > max_photons_ || modes.size() > 2) return -1;
    const int m1 = modes.size() > 0 ? modes[0] : -1;
    const int m2 = modes.size() > 1 ? modes[1] : -1;
    const long long k = key(atom, cavity, m1, m2);
    auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(k, -1));
    if (it == lookup_.end() || it->first != k) return -1;
    return it->second;
}

int JointSpace::excitations(int index) const {
    const auto& s = state(index);
    const int atomic = (s.atom == AtomLevel::e || s.atom == AtomLevel::r) ? 1 : 0;
    return s.cavity + static_cast<int>(s.modes.size()) + atomic;
}

SparseMatrix build_effective_hamiltonian(const PhysicalParams& params, const JointSpace& space,
                                         const ControlField& ctrl, const ModeGrid& modes, double t) {
    if (modes.size() != space.mode_count())
        throw DimensionMismatch("build_effective_hamiltonian: mode grid and joint space disagree on N");

    using T = Eigen::Triplet<cplx>;
    std::vector<T> entries;
    const double lambda = modes.coupling();
    const cplx omega = ctrl(t);
    const cplx minus_i{0.0, -1.0};

    // Column `col` holds H|col>; components leaving the truncated space are dropped.
    auto emit = [&](AtomLevel atom, int cavity, const std::vector<int>& line, int col, cplx amp) {
        if (amp == cplx{}) return;
        const int row = space.index_of(atom, cavity, line);
        if (row >= 0) entries.emplace_back(row, col, amp);
    };

    for (int col = 0; col < space.dim(); ++col) {
        const JointState& s = space.state(col);
        const double c = s.cavity;

        // Diagonal: line-mode energies, atomic detunings, non-Hermitian losses.
        cplx diag{0.0, 0.0};
        for (int k : s.modes) diag += modes.detuning(k);
        if (s.atom == AtomLevel::r) diag += params.delta;
        if (s.atom == AtomLevel::e) diag += -params.Delta + minus_i * params.gamma;
        diag += minus_i * params.kappa_loss * c;
        emit(s.atom, s.cavity, s.modes, col, diag);

        // lambda a^dag b_k: each occupied mode k (occupation n_k) hands a photon to the cavity.
        for (std::size_t i = 0; i < s.modes.size(); ++i) {
            if (i > 0 && s.modes[i] == s.modes[i - 1]) continue;
            const int k = s.modes[i];
            const auto occupation = static_cast<double>(std::count(s.modes.begin(), s.modes.end(), k));
            std::vector<int> rest = s.modes;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            emit(s.atom, s.cavity + 1, rest, col, lambda * std::sqrt(occupation) * std::sqrt(c + 1.0));
        }
        // lambda b_k^dag a
        if (s.cavity > 0) {
            for (int k = 0; k < space.mode_count(); ++k) {
                const auto occupation = static_cast<double>(std::count(s.modes.begin(), s.modes.end(), k));
                std::vector<int> more = s.modes;
                more.push_back(k);
                emit(s.atom, s.cavity - 1, more, col, lambda * std::sqrt(c) * std::sqrt(occupation + 1.0));
            }
        }
        // g (|e><g| a + |g><e| a^dag)
        if (s.atom == AtomLevel::g && s.cavity > 0) emit(AtomLevel::e, s.cavity - 1, s.modes, col, params.g * std::sqrt(c));
        if (s.atom == AtomLevel::e) emit(AtomLevel::g, s.cavity + 1, s.modes, col, params.g * std::sqrt(c + 1.0));
        // Omega |e><r| + Omega^* |r><e|
        if (s.atom == AtomLevel::r) emit(AtomLevel::e, s.cavity, s.modes, col, omega);
        if (s.atom == AtomLevel::e) emit(AtomLevel::r, s.cavity, s.modes, col, std::conj(omega));
    }

    SparseMatrix H(space.dim(), space.dim());
    H.setFromTriplets(entries.begin(), entries.end());
    return H;
}

SparseMatrix excitation_number_operator(const JointSpace& space) {
    SparseMatrix N(space.dim(), space.dim());
    std::vector<Eigen::Triplet<cplx>> entries;
    for (int i = 0; i < space.dim(); ++i) entries.emplace_back(i, i, static_cast<double>(space.excitations(i)));
    N.setFromTriplets(entries.begin(), entries.end());
    return N;
}

}  // namespace wcpmem
