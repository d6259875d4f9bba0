#ifndef RABIHEAT_BATHS_HPP
#define RABIHEAT_BATHS_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rabiheat
{

/// Which subsystem a heat bath attaches to. The left bath couples to the
/// oscillator through a + a^dagger, the right bath to the qubit through sigma_z.
enum class BathSide
{
    left,
    right
};

std::string to_string(BathSide side);

/// Ohmic-Drude bosonic bath. Frequencies in units of omega_r, temperature in
/// hbar omega_r / k_B (hbar = k_B = 1).
struct BathSpec
{
    BathSide side = BathSide::left;
    double alpha = 0.0;
    double temperature = 0.25;
    double omega_c = 5.0;

    double beta() const { return 1.0 / temperature; }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const BathSpec&, const BathSpec&) = default;
};

struct BathPair
{
    BathSpec left{BathSide::left};
    BathSpec right{BathSide::right};

    const BathSpec& operator[](BathSide side) const { return side == BathSide::left ? left : right; }
    void validate() const;

    friend bool operator==(const BathPair&, const BathPair&) = default;
};

/// Truncation rules for the Matsubara series in the imaginary part of W.
struct MatsubaraPolicy
{
    double rel_tol = 1e-12;
    std::size_t k_max = 1'000'000;
    // smallest tolerated |omega_c - nu_k| (units of omega_r)
    double pole_guard = 1e-7;

    void validate() const;

    friend bool operator==(const MatsubaraPolicy&, const MatsubaraPolicy&) = default;
};

/// Raised when omega_c sits on a Matsubara frequency (beta omega_c = 2 pi k).
/// The cot divergence and the k-th series term cancel analytically but not
/// numerically, so the point is rejected instead of regularized.
class DegenerateCutoffError : public std::domain_error
{
public:
    DegenerateCutoffError(std::size_t k, double distance);

    std::size_t matsubara_index() const { return m_k; }
    double distance() const { return m_distance; }

private:
    std::size_t m_k;
    double m_distance;
};

/// G(omega) = alpha omega / (1 + (omega/omega_c)^2), odd in omega.
double spectral_density(double omega, const BathSpec& bath);

/// n(omega) = 1/(exp(omega/T) - 1). omega == 0 is a domain error.
double bose_occupation(double omega, double temperature);

struct MatsubaraSum
{
    double value = 0.0;
    std::size_t terms = 0;
    // |first omitted term| / |partial sum| when the stopping rule fired
    double tail_estimate = 0.0;
    bool hit_k_max = false;
};

/// sum_k nu_k omega / ((omega_c^2 - nu_k^2)(omega^2 + nu_k^2)), nu_k = 2 pi k T.
/// Summation stops once three consecutive terms are each below
/// rel_tol * |partial sum|, or at k_max.
MatsubaraSum matsubara_sum(double omega, const BathSpec& bath, const MatsubaraPolicy& policy);

/// One-sided transform W(omega) = int_0^inf dt <B(t)B(0)> e^{-i omega t}
/// of the ohmic-Drude correlation function (hbar = 1).
///
/// Re W = pi G(omega) n(omega), valid for both signs of omega.
/// Im W = -(pi/2) G(omega) [cot(beta omega_c / 2) + omega_c/omega]
///        + (2 pi alpha omega_c^2 / beta) * matsubara_sum(omega).
/// At omega = 0 the limit pi alpha T - i pi alpha omega_c / 2 is returned.
///
/// Throws DegenerateCutoffError when omega_c lies within policy.pole_guard of
/// a Matsubara frequency.
std::complex<double> w_function(double omega, const BathSpec& bath, const MatsubaraPolicy& policy = {});

/// S(omega) = 2 Re W(-omega) = 2 pi G(omega) [n(omega) + 1]; S(0) = 2 pi alpha T.
double power_spectrum(double omega, const BathSpec& bath);

/// omega W(omega). The zero-time correlator term i <B B> is omitted: it drops
/// out of the current whenever the density matrix is Hermitian. A nonzero
/// zero_time_surrogate adds i * zero_time_surrogate back so the cancellation
/// can be checked numerically.
std::complex<double> w_bar(double omega, const BathSpec& bath, const MatsubaraPolicy& policy = {},
                           double zero_time_surrogate = 0.0);

struct HighTemperatureImag
{
    double value = 0.0;
    // false outside nu_1 > |omega|
    bool in_domain = true;
};

/// High-temperature approximation of Im W:
/// alpha omega - pi alpha omega T / omega_c - pi alpha omega_c / 2.
HighTemperatureImag w_imag_high_t(double omega, const BathSpec& bath);

} // namespace rabiheat

#endif
