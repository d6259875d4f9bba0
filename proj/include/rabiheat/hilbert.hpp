#ifndef RABIHEAT_HILBERT_HPP
#define RABIHEAT_HILBERT_HPP

#include "rabiheat/baths.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>

namespace rabiheat
{

/// Qubit-resonator parameters, angular frequencies in units of omega_r.
struct JunctionParams
{
    double delta = 1.0;
    double epsilon = 0.0;
    double omega_r = 1.0;
    double g = 0.01;

    double omega_q() const { return std::hypot(delta, epsilon); }
    void validate() const;

    friend bool operator==(const JunctionParams&, const JunctionParams&) = default;
};

struct TruncationConfig
{
    std::size_t n_fock = 20;
    std::size_t n_levels = 5;

    void validate() const;

    friend bool operator==(const TruncationConfig&, const TruncationConfig&) = default;
};

/// Junction eigenfrequencies (ascending) and the bath coupling operators in
/// the energy eigenbasis, truncated to the retained levels.
struct EigenSystem
{
    Eigen::VectorXd omega;
    Eigen::MatrixXd q_left;
    Eigen::MatrixXd q_right;

    std::size_t size() const { return static_cast<std::size_t>(omega.size()); }
    double bohr(std::size_t n, std::size_t m) const { return omega(n) - omega(m); }
    const Eigen::MatrixXd& q(BathSide side) const { return side == BathSide::left ? q_left : q_right; }
};

/// Coupling operators in the persistent-current x Fock product basis. The
/// squares are the projected operators P Q^2 P, not (P Q P)^2.
struct CouplingOperators
{
    Eigen::MatrixXd q_left;
    Eigen::MatrixXd q_right;
    Eigen::MatrixXd q_left_sq;
    Eigen::MatrixXd q_right_sq;
};

// Product-basis index of |qubit state s, Fock state j>; s = 0 is sigma_z = +1.
inline std::size_t product_index(std::size_t s, std::size_t j, std::size_t n_fock) { return s * n_fock + j; }

/// -(epsilon sigma_z + delta sigma_x)/2 + omega_r a^dagger a + g sigma_z (a^dagger + a).
Eigen::MatrixXd build_rabi_hamiltonian(const JunctionParams& params, std::size_t n_fock);

/// Q_L = a + a^dagger, Q_R = sigma_z.
CouplingOperators build_coupling_operators(std::size_t n_fock);

/// mu_l = (pi/2) alpha_l omega_c,l for the ohmic-Drude bath.
double renormalization_strength(const BathSpec& bath);

/// H + sum_l mu_l Q_l^2.
Eigen::MatrixXd apply_bath_renormalization(const Eigen::MatrixXd& h, const CouplingOperators& ops,
                                           const BathPair& baths);

/// Diagonalizes a real symmetric Hamiltonian and rotates the coupling
/// operators into its eigenbasis, keeping the lowest trunc.n_levels states.
///
/// Eigenvectors inside a degenerate cluster (gap < 1e-10) are fixed by
/// diagonalizing Q_R (then Q_L) on the cluster. Each eigenvector is signed so
/// that its first component of largest magnitude is positive.
EigenSystem diagonalize(const Eigen::MatrixXd& h, const CouplingOperators& ops, const TruncationConfig& trunc);

/// Builds H (optionally renormalized by the baths), diagonalizes, truncates.
EigenSystem solve_junction(const JunctionParams& params, const TruncationConfig& trunc,
                           const BathPair* renormalize_with = nullptr);

/// True iff the observable changes by less than 1e-6 (relative) when
/// n_fock -> n_fock + 5 and n_levels -> n_levels + 2.
bool check_truncation_convergence(const TruncationConfig& trunc,
                                  const std::function<double(const TruncationConfig&)>& observable,
                                  double rel_tol = 1e-6);

} // namespace rabiheat

#endif
