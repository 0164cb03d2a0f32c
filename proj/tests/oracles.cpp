#include "oracles.hpp"

#include <cmath>

namespace oracle {

namespace {

Dense kron(const Dense& A, const Dense& B) {
    Dense out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Dense ket_bra(int levels, int i, int j) {
    Dense m = Dense::Zero(levels, levels);
    m(i, j) = 1.0;
    return m;
}

}  // namespace

DenseModel::DenseModel(int m_max) : m(m_max) {
    const int f = m_max + 1;
    Dense af = Dense::Zero(f, f);
    for (int k = 1; k < f; ++k) af(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Dense I4 = Dense::Identity(4, 4);
    const Dense If = Dense::Identity(f, f);
    // Level order g, e, r, xi.
    a = kron(I4, af);
    ad = a.adjoint();
    Pe = kron(ket_bra(4, 1, 1), If);
    Pr = kron(ket_bra(4, 2, 2), If);
    Seg = kron(ket_bra(4, 1, 0), If);
    Ser = kron(ket_bra(4, 1, 2), If);
    Sxe = kron(ket_bra(4, 3, 1), If);
}

Dense DenseModel::hamiltonian(const wcpmem::PhysicalParams& p, cplx drive, cplx control) const {
    Dense H = p.delta * Pr - p.Delta * Pe;
    const Dense coupling = p.g * Seg * a + control * Ser;
    H += coupling + coupling.adjoint();
    H += std::sqrt(2.0 * p.kappa) * (drive * ad + std::conj(drive) * a);
    return H;
}

Dense DenseModel::lindblad(const wcpmem::PhysicalParams& p, const Dense& H, const Dense& rho) const {
    const cplx I{0.0, 1.0};
    const Dense n = ad * a;
    Dense out = -I * (H * rho - rho * H);
    out += p.gamma * (2.0 * Sxe * rho * Sxe.adjoint() - Pe * rho - rho * Pe);
    out += p.kappa_tot() * (2.0 * a * rho * ad - n * rho - rho * n);
    return out;
}

Dense DenseModel::no_loss_jump(const wcpmem::PhysicalParams& p, const Dense& H, const Dense& rho) const {
    const cplx I{0.0, 1.0};
    const Dense n = ad * a;
    const Dense Heff = H - I * p.gamma * Pe - I * p.kappa_tot() * n;
    return -I * (Heff * rho - rho * Heff.adjoint()) + 2.0 * p.kappa * a * rho * ad;
}

double DenseModel::stored(const Dense& rho) const { return (Pr * rho).trace().real(); }

double rk4_efficiency(Generator which, const wcpmem::PhysicalParams& p, const wcpmem::PulseEnvelope& env,
                      const wcpmem::ControlField& ctrl, double t1, double t2, int m_max, int steps) {
    const DenseModel model(m_max);
    Dense rho = Dense::Zero(model.dim(), model.dim());
    rho(0, 0) = 1.0;
    const double h = (t2 - t1) / steps;
    auto f = [&](double t, const Dense& r) {
        const Dense H = model.hamiltonian(p, env(t), ctrl(t));
        return which == Generator::full ? model.lindblad(p, H, r) : model.no_loss_jump(p, H, r);
    };
    for (int s = 0; s < steps; ++s) {
        const double t = t1 + h * s;
        const Dense k1 = f(t, rho);
        const Dense k2 = f(t + 0.5 * h, rho + 0.5 * h * k1);
        const Dense k3 = f(t + 0.5 * h, rho + 0.5 * h * k2);
        const Dense k4 = f(t + h, rho + h * k3);
        rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return model.stored(rho);
}

Eigen::Vector3d cubic_through_origin(const double n[3], const double y[3]) {
    Eigen::Matrix3d A;
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) {
        A(i, 0) = n[i];
        A(i, 1) = n[i] * n[i];
        A(i, 2) = n[i] * n[i] * n[i];
        b(i) = y[i];
    }
    return A.fullPivLu().solve(b);
}

}  // namespace oracle
