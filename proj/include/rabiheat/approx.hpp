#ifndef RABIHEAT_APPROX_HPP
#define RABIHEAT_APPROX_HPP

#include "rabiheat/baths.hpp"
#include "rabiheat/hilbert.hpp"
#include "rabiheat/master_equation.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace rabiheat
{

/// Generalized Laguerre polynomial L_n^k(x) by the three-term recurrence.
double laguerre_generalized(std::size_t n, double k, double x);

/// Polaron-dressed qubit gap Delta e^{-a/2} a^{(i-j)/2} sqrt(j!/i!) L_j^{i-j}(a),
/// a = (2g/omega_r)^2, for i >= j.
double dressed_gap(std::size_t i, std::size_t j, const JunctionParams& params);

/// Generalized rotating-wave spectrum. Index n - 1 of each vector holds the
/// doublet n = 1..n_max.
struct GrwaSpectrum
{
    double omega0 = 0.0;
    std::vector<double> omega_minus, omega_plus;
    std::vector<double> u_minus, u_plus, v_minus, v_plus;

    /// omega0 followed by every doublet level, ascending.
    std::vector<double> sorted_levels() const;
};

GrwaSpectrum grwa_spectrum(const JunctionParams& params, std::size_t n_max);

struct TlsElements
{
    double q_left_01 = 0.0;
    double q_right_01 = 0.0;
};

/// Ground to first-excited coupling elements in the GRWA. Zero bias only.
TlsElements grwa_tls_elements(const JunctionParams& params);

/// Jaynes-Cummings (RWA) spectrum, mixing amplitudes and the coupling matrix
/// elements among levels {0, 1, 2}.
struct JcSpectrum
{
    double omega_q = 0.0;
    double detuning = 0.0;
    double g_x = 0.0;
    double g_z = 0.0;
    double omega0 = 0.0;
    // omega_{2n-1} and omega_{2n}; index n - 1
    std::vector<double> omega_minus, omega_plus;
    std::vector<double> u_minus, u_plus, v_minus, v_plus;
    Eigen::Matrix3d q_left = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d q_right = Eigen::Matrix3d::Zero();

    /// omega0, omega_1, omega_2, ... in level order (not re-sorted).
    std::vector<double> levels() const;
    /// Levels {0, 1, 2} with their RWA coupling elements.
    EigenSystem three_level_system() const;
};

JcSpectrum jc_spectrum_and_elements(const JunctionParams& params, std::size_t n_max);

struct TlsCurrent
{
    double value = 0.0;
    // both rates vanish; value is 0 by convention
    bool uncoupled = false;
};

/// omega10 gR gL (nL - nR) / (gR (1 + 2 nR) + gL (1 + 2 nL)), into the right bath.
TlsCurrent tls_current(double omega10, double gamma_left, double gamma_right, double t_left, double t_right);

double tls_chi(double q_left_01, double q_right_01);

/// chi (nL - nR) / (1 + nR + nL).
double tls_rectification(double chi, double omega10, double t_left, double t_right);

/// Coupling at which the two-level rectification changes sign, valid for
/// 0 < delta < omega_r. Throws std::domain_error where the radicand is negative.
double gstar_estimate(double delta, double omega_r = 1.0);

struct ThreeLevelResult
{
    SteadyState state;
    double current = 0.0;
    std::vector<std::string> warnings;
};

/// Closed-form partial-secular solution for three levels with only rho_12
/// retained. Level energies and real coupling elements come from `system`;
/// use_high_t_w swaps Im W for its high-temperature approximation.
ThreeLevelResult three_level_from_system(const EigenSystem& system, const BathPair& baths, bool use_high_t_w,
                                         BathSide current_into = BathSide::right,
                                         const MatsubaraPolicy& policy = {});

/// The same, on the RWA three-level truncation at zero bias (no bath
/// renormalization of the spectrum).
ThreeLevelResult three_level_analytic(const JunctionParams& params, const BathPair& baths, bool use_high_t_w,
                                      BathSide current_into = BathSide::right, const MatsubaraPolicy& policy = {});

} // namespace rabiheat

#endif
