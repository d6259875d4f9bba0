#include "rabiheat/baths.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rabiheat
{

namespace
{

constexpr double pi = std::numbers::pi;

// Drude factor G(omega)/omega
double drude(double omega, double omega_c)
{
    const double r = omega / omega_c;
    return 1.0 / (1.0 + r * r);
}

// x / (e^x - 1) with the x -> 0 limit
double x_over_expm1(double x)
{
    if (x == 0.0) return 1.0;
    if (x > 700.0) return x * std::exp(-x);
    return x / std::expm1(x);
}

} // namespace

std::string to_string(BathSide side)
{
    return side == BathSide::left ? "left" : "right";
}

void BathSpec::validate() const
{
    const std::string tag = "baths." + to_string(side);
    if (!(alpha >= 0.0)) throw std::invalid_argument(tag + ".alpha must be >= 0");
    if (!(temperature > 0.0)) throw std::invalid_argument(tag + ".temperature must be > 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument(tag + ".omega_c must be > 0");
}

void BathPair::validate() const
{
    if (left.side != BathSide::left || right.side != BathSide::right)
        throw std::invalid_argument("bath pair sides are swapped");
    left.validate();
    right.validate();
}

void MatsubaraPolicy::validate() const
{
    if (!(rel_tol > 0.0 && rel_tol < 1e-6)) throw std::invalid_argument("solver.matsubara.rel_tol must lie in (0, 1e-6)");
    if (k_max < 10'000) throw std::invalid_argument("solver.matsubara.k_max must be >= 10000");
    if (!(pole_guard > 0.0)) throw std::invalid_argument("solver.matsubara.pole_guard must be > 0");
}

DegenerateCutoffError::DegenerateCutoffError(std::size_t k, double distance)
    : std::domain_error([&] {
          std::ostringstream os;
          os << "omega_c coincides with Matsubara frequency nu_" << k << " (|omega_c - nu_k| = " << distance
             << "); perturb omega_c by ~1e-6 omega_r";
          return os.str();
      }()),
      m_k(k), m_distance(distance)
{
}

double spectral_density(double omega, const BathSpec& bath)
{
    return bath.alpha * omega * drude(omega, bath.omega_c);
}

double bose_occupation(double omega, double temperature)
{
    if (omega == 0.0) throw std::domain_error("bose_occupation is singular at omega = 0");
    if (!(temperature > 0.0)) throw std::domain_error("bose_occupation needs temperature > 0");
    const double x = omega / temperature;
    if (x > 700.0) return std::exp(-x);
    return 1.0 / std::expm1(x);
}

MatsubaraSum matsubara_sum(double omega, const BathSpec& bath, const MatsubaraPolicy& policy)
{
    MatsubaraSum out;
    if (omega == 0.0) return out;

    const double two_pi_t = 2.0 * pi * bath.temperature;
    const double wc2 = bath.omega_c * bath.omega_c;
    const double w2 = omega * omega;
    auto term = [&](std::size_t k) {
        const double nu = two_pi_t * static_cast<double>(k);
        return nu * omega / ((wc2 - nu * nu) * (w2 + nu * nu));
    };

    int quiet = 0;
    std::size_t k = 1;
    for (; k <= policy.k_max; ++k) {
        const double t = term(k);
        out.value += t;
        if (std::abs(t) < policy.rel_tol * std::abs(out.value)) {
            if (++quiet == 3) break;
        } else {
            quiet = 0;
        }
    }
    out.hit_k_max = k > policy.k_max;
    out.terms = out.hit_k_max ? policy.k_max : k;
    out.tail_estimate = std::abs(term(out.terms + 1)) / std::abs(out.value);
    return out;
}

std::complex<double> w_function(double omega, const BathSpec& bath, const MatsubaraPolicy& policy)
{
    const double t = bath.temperature;
    const double wc = bath.omega_c;
    const double alpha = bath.alpha;

    const double two_pi_t = 2.0 * pi * t;
    const double k_near = std::round(wc / two_pi_t);
    if (k_near >= 1.0) {
        const double dist = std::abs(wc - two_pi_t * k_near);
        if (dist < policy.pole_guard) throw DegenerateCutoffError(static_cast<std::size_t>(k_near), dist);
    }

    if (omega == 0.0) return {pi * alpha * t, -0.5 * pi * alpha * wc};

    const double d = drude(omega, wc);
    const double re = pi * alpha * d * t * x_over_expm1(omega / t);
    const double g = alpha * omega * d;
    const double cot = 1.0 / std::tan(wc / (2.0 * t));
    const double im = -0.5 * pi * g * cot - 0.5 * pi * alpha * wc * d
                      + 2.0 * pi * alpha * wc * wc * t * matsubara_sum(omega, bath, policy).value;
    return {re, im};
}

double power_spectrum(double omega, const BathSpec& bath)
{
    const double t = bath.temperature;
    return 2.0 * pi * bath.alpha * drude(omega, bath.omega_c) * t * x_over_expm1(-omega / t);
}

std::complex<double> w_bar(double omega, const BathSpec& bath, const MatsubaraPolicy& policy,
                           double zero_time_surrogate)
{
    std::complex<double> out{0.0, 0.0};
    if (omega != 0.0) out = omega * w_function(omega, bath, policy);
    return out + std::complex<double>{0.0, zero_time_surrogate};
}

HighTemperatureImag w_imag_high_t(double omega, const BathSpec& bath)
{
    const double a = bath.alpha;
    HighTemperatureImag out;
    // the cot(beta omega_c / 2) ~ 2 / (beta omega_c) term carries 1/omega_c
    out.value = a * omega - pi * a * omega * bath.temperature / bath.omega_c - 0.5 * pi * a * bath.omega_c;
    out.in_domain = 2.0 * pi * bath.temperature > std::abs(omega);
    return out;
}

} // namespace rabiheat
