#include "rabiheat/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rabiheat
{

namespace
{

constexpr double degeneracy_gap = 1e-10;

// Rotates the columns [begin, end) of vecs so that op is diagonal on them,
// recursing into clusters that op leaves degenerate.
void fix_cluster_basis(Eigen::MatrixXd& vecs, Eigen::Index begin, Eigen::Index end, const Eigen::MatrixXd& op,
                       const Eigen::MatrixXd* next_op)
{
    const Eigen::Index size = end - begin;
    if (size < 2) return;
    const Eigen::MatrixXd block = vecs.middleCols(begin, size);
    const Eigen::MatrixXd sub = block.transpose() * op * block;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sub + sub.transpose()));
    vecs.middleCols(begin, size) = block * es.eigenvectors();
    if (next_op == nullptr) return;

    const Eigen::VectorXd& vals = es.eigenvalues();
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= size; ++i) {
        if (i == size || vals(i) - vals(i - 1) >= degeneracy_gap) {
            fix_cluster_basis(vecs, begin + start, begin + i, *next_op, nullptr);
            start = i;
        }
    }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v)
{
    const double biggest = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= biggest * (1.0 - 1e-9)) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

} // namespace

void JunctionParams::validate() const
{
    if (!(delta >= 0.0)) throw std::invalid_argument("junction.delta must be >= 0");
    if (!std::isfinite(epsilon)) throw std::invalid_argument("junction.epsilon must be finite");
    if (!(omega_r > 0.0)) throw std::invalid_argument("junction.omega_r must be > 0");
    if (!(g >= 0.0)) throw std::invalid_argument("junction.g must be >= 0");
}

void TruncationConfig::validate() const
{
    if (n_levels < 2) throw std::invalid_argument("truncation.n_levels must be >= 2");
    if (n_fock < n_levels) throw std::invalid_argument("truncation.n_fock must be >= truncation.n_levels");
}

Eigen::MatrixXd build_rabi_hamiltonian(const JunctionParams& params, std::size_t n_fock)
{
    if (n_fock < 2) throw std::invalid_argument("n_fock must be >= 2");
    const auto n = static_cast<Eigen::Index>(2 * n_fock);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t s = 0; s < 2; ++s) {
        const double sz = s == 0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n_fock; ++j) {
            const auto i = static_cast<Eigen::Index>(product_index(s, j, n_fock));
            h(i, i) = -0.5 * params.epsilon * sz + params.omega_r * static_cast<double>(j);
            if (j + 1 < n_fock) {
                const auto k = static_cast<Eigen::Index>(product_index(s, j + 1, n_fock));
                h(i, k) = h(k, i) = params.g * sz * std::sqrt(static_cast<double>(j + 1));
            }
        }
    }
    for (std::size_t j = 0; j < n_fock; ++j) {
        const auto up = static_cast<Eigen::Index>(product_index(0, j, n_fock));
        const auto down = static_cast<Eigen::Index>(product_index(1, j, n_fock));
        h(up, down) = h(down, up) = -0.5 * params.delta;
    }
    return h;
}

CouplingOperators build_coupling_operators(std::size_t n_fock)
{
    if (n_fock < 2) throw std::invalid_argument("n_fock must be >= 2");
    const auto n = static_cast<Eigen::Index>(2 * n_fock);
    CouplingOperators ops;
    ops.q_left = Eigen::MatrixXd::Zero(n, n);
    ops.q_left_sq = Eigen::MatrixXd::Zero(n, n);
    ops.q_right = Eigen::MatrixXd::Zero(n, n);
    ops.q_right_sq = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t j = 0; j < n_fock; ++j) {
            const auto i = static_cast<Eigen::Index>(product_index(s, j, n_fock));
            const double jd = static_cast<double>(j);
            ops.q_right(i, i) = s == 0 ? 1.0 : -1.0;
            ops.q_left_sq(i, i) = 2.0 * jd + 1.0;
            if (j + 1 < n_fock) {
                const auto k = static_cast<Eigen::Index>(product_index(s, j + 1, n_fock));
                ops.q_left(i, k) = ops.q_left(k, i) = std::sqrt(jd + 1.0);
            }
            if (j + 2 < n_fock) {
                const auto k = static_cast<Eigen::Index>(product_index(s, j + 2, n_fock));
                ops.q_left_sq(i, k) = ops.q_left_sq(k, i) = std::sqrt((jd + 1.0) * (jd + 2.0));
            }
        }
    }
    return ops;
}

double renormalization_strength(const BathSpec& bath)
{
    return 0.5 * std::numbers::pi * bath.alpha * bath.omega_c;
}

Eigen::MatrixXd apply_bath_renormalization(const Eigen::MatrixXd& h, const CouplingOperators& ops,
                                           const BathPair& baths)
{
    return h + renormalization_strength(baths.left) * ops.q_left_sq
           + renormalization_strength(baths.right) * ops.q_right_sq;
}

EigenSystem diagonalize(const Eigen::MatrixXd& h, const CouplingOperators& ops, const TruncationConfig& trunc)
{
    if (h.rows() != h.cols() || h.rows() != ops.q_left.rows() || h.rows() != ops.q_right.rows())
        throw std::invalid_argument("diagonalize: Hamiltonian and coupling operators differ in dimension");
    const auto keep = static_cast<Eigen::Index>(trunc.n_levels);
    if (keep < 1 || keep > h.rows()) throw std::invalid_argument("diagonalize: n_levels exceeds the Hilbert space");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed to converge");

    const Eigen::VectorXd& vals = es.eigenvalues();
    Eigen::MatrixXd vecs = es.eigenvectors();

    // clusters only need fixing up to the truncation edge
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= vals.size() && start < keep; ++i) {
        if (i == vals.size() || vals(i) - vals(i - 1) >= degeneracy_gap) {
            fix_cluster_basis(vecs, start, i, ops.q_right, &ops.q_left);
            start = i;
        }
    }
    for (Eigen::Index c = 0; c < keep; ++c) fix_sign(vecs.col(c));

    const Eigen::MatrixXd basis = vecs.leftCols(keep);
    EigenSystem sys;
    sys.omega = vals.head(keep);
    const Eigen::MatrixXd ql = basis.transpose() * ops.q_left * basis;
    const Eigen::MatrixXd qr = basis.transpose() * ops.q_right * basis;
    sys.q_left = 0.5 * (ql + ql.transpose());
    sys.q_right = 0.5 * (qr + qr.transpose());
    return sys;
}

EigenSystem solve_junction(const JunctionParams& params, const TruncationConfig& trunc,
                           const BathPair* renormalize_with)
{
    params.validate();
    trunc.validate();
    const auto ops = build_coupling_operators(trunc.n_fock);
    Eigen::MatrixXd h = build_rabi_hamiltonian(params, trunc.n_fock);
    if (renormalize_with != nullptr) h = apply_bath_renormalization(h, ops, *renormalize_with);
    return diagonalize(h, ops, trunc);
}

bool check_truncation_convergence(const TruncationConfig& trunc,
                                  const std::function<double(const TruncationConfig&)>& observable,
                                  double rel_tol)
{
    const double base = observable(trunc);
    const TruncationConfig bigger{trunc.n_fock + 5, trunc.n_levels + 2};
    const double enlarged = observable(bigger);
    const double scale = std::max(std::abs(base), std::abs(enlarged));
    if (scale == 0.0) return true;
    return std::abs(enlarged - base) < rel_tol * scale;
}

} // namespace rabiheat
