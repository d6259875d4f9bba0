#ifndef RABIHEAT_MASTER_EQUATION_HPP
#define RABIHEAT_MASTER_EQUATION_HPP

#include "rabiheat/baths.hpp"
#include "rabiheat/hilbert.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rabiheat
{

// Solvers work in extended precision: a current is often a small difference
// of large bath flows, and double-rounded populations would swamp it.
using ext_real = long double;
using ExtVector = Eigen::Matrix<ext_real, Eigen::Dynamic, 1>;
using ExtMatrix = Eigen::Matrix<ext_real, Eigen::Dynamic, Eigen::Dynamic>;

/// gamma(n, m) is the rate for the transition m -> n; columns sum to zero.
struct RateMatrix
{
    Eigen::MatrixXd gamma;

    std::size_t size() const { return static_cast<std::size_t>(gamma.rows()); }
};

struct BathRates
{
    RateMatrix left;
    RateMatrix right;
    RateMatrix total;

    const RateMatrix& operator[](BathSide side) const { return side == BathSide::left ? left : right; }
};

struct CoherentPair
{
    std::size_t n = 0;
    std::size_t m = 0;

    friend bool operator==(const CoherentPair&, const CoherentPair&) = default;
};

using CoherentPairSet = std::vector<CoherentPair>;

/// Steady-state reduced density matrix in the energy eigenbasis: populations
/// plus the retained coherences rho_nm (n < m); rho_mn is the conjugate.
struct SteadyState
{
    Eigen::VectorXd populations;
    CoherentPairSet pairs;
    std::vector<std::complex<double>> coherences;
    // the same solution before rounding to double; empty for hand-built states
    ExtVector populations_ext;
    std::vector<std::complex<ext_real>> coherences_ext;

    // residual of the solved linear system (max abs)
    double residual = 0.0;
    bool least_squares = false;
    double condition_number = 1.0;

    double min_population() const { return populations.minCoeff(); }
    /// False when some population is below -tol (weak-coupling breakdown).
    bool positive(double tol = 1e-6) const { return min_population() >= -tol; }
    Eigen::MatrixXcd density_matrix() const;
};

class SingularSystemError : public std::runtime_error
{
public:
    SingularSystemError(const std::string& what, std::vector<std::size_t> disconnected = {})
        : std::runtime_error(what), m_disconnected(std::move(disconnected))
    {
    }

    const std::vector<std::size_t>& disconnected_levels() const { return m_disconnected; }

private:
    std::vector<std::size_t> m_disconnected;
};

/// Second-order Redfield tensor of one junction in contact with two baths.
/// W_l(omega_nm) is tabulated once for every level pair.
class RedfieldTensor
{
public:
    RedfieldTensor(const EigenSystem& eigsys, const BathPair& baths, const MatsubaraPolicy& policy = {});

    /// K_{n m n' m'} summed over both baths.
    std::complex<double> operator()(std::size_t n, std::size_t m, std::size_t np, std::size_t mp) const;
    std::complex<double> element(BathSide side, std::size_t n, std::size_t m, std::size_t np, std::size_t mp) const;
    /// Both baths, accumulated in extended precision.
    std::complex<ext_real> element_ext(std::size_t n, std::size_t m, std::size_t np, std::size_t mp) const;

    const Eigen::MatrixXcd& w_table(BathSide side) const { return side == BathSide::left ? m_w_left : m_w_right; }
    const EigenSystem& eigensystem() const { return m_sys; }
    std::size_t size() const { return m_sys.size(); }

private:
    EigenSystem m_sys;
    Eigen::MatrixXcd m_w_left;
    Eigen::MatrixXcd m_w_right;
};

std::complex<double> redfield_element(std::size_t n, std::size_t m, std::size_t np, std::size_t mp,
                                      const EigenSystem& eigsys, const BathPair& baths,
                                      const MatsubaraPolicy& policy = {});

/// Gamma^l_{nm} = |Q_{l,nm}|^2 S_l(omega_mn) for n != m.
BathRates golden_rule_rates(const EigenSystem& eigsys, const BathPair& baths);

/// Full-secular steady state: sum_m Gamma_nm rho_mm = 0, trace one.
SteadyState fsme_steady_state(const RateMatrix& rates);
/// The same for left + right rates, summed without rounding.
SteadyState fsme_steady_state(const BathRates& rates);

/// Every pair (n, m), n < m, with 0 < |omega_nm| < threshold.
CoherentPairSet select_coherent_pairs(const EigenSystem& eigsys, double threshold);

/// Partial-secular steady state. Populations and the listed coherences obey
/// 0 = -i omega_nm rho_nm + sum K_{nmn'm'} rho_{n'm'} restricted to the
/// retained index set; all other coherences are zero.
SteadyState psme_steady_state(const RedfieldTensor& tensor, const CoherentPairSet& pairs);
SteadyState psme_steady_state(const EigenSystem& eigsys, const BathPair& baths, const CoherentPairSet& pairs,
                              const MatsubaraPolicy& policy = {});

/// Max abs residual of the restricted Redfield equations at the given state.
double redfield_residual(const RedfieldTensor& tensor, const SteadyState& state);

} // namespace rabiheat

#endif
