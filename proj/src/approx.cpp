#include "rabiheat/approx.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace rabiheat
{

namespace
{

using cplx = std::complex<double>;

struct Mixing
{
    double x_minus, x_plus, u_minus, u_plus, v_minus, v_plus;
};

// X^{-/+} = d -/+ sqrt(d^2 + o^2), evaluated without cancellation, and the
// normalized amplitudes u = X/h, v = -o/h with h = sqrt(X^2 + o^2).
Mixing two_level_mixing(double d, double o)
{
    const double root = std::hypot(d, o);
    Mixing m{};
    if (d > 0.0) {
        m.x_plus = d + root;
        m.x_minus = -o * o / m.x_plus;
    } else {
        m.x_minus = d - root;
        m.x_plus = root > 0.0 ? o * o / (root - d) : 0.0;
    }
    auto amplitudes = [o](double x, double& u, double& v, bool lower) {
        const double h = std::hypot(x, o);
        if (h == 0.0) {
            u = lower ? 0.0 : 1.0;
            v = lower ? -1.0 : 0.0;
            return;
        }
        u = x / h;
        v = -o / h;
    };
    amplitudes(m.x_minus, m.u_minus, m.v_minus, true);
    amplitudes(m.x_plus, m.u_plus, m.v_plus, false);
    return m;
}

double bose(double omega, double temperature)
{
    return 1.0 / std::expm1(omega / temperature);
}

} // namespace

double laguerre_generalized(std::size_t n, double k, double x)
{
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + k - x;
    for (std::size_t m = 1; m < n; ++m) {
        const auto md = static_cast<double>(m);
        const double next = ((2.0 * md + 1.0 + k - x) * cur - (md + k) * prev) / (md + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double dressed_gap(std::size_t i, std::size_t j, const JunctionParams& params)
{
    if (i < j) throw std::invalid_argument("dressed_gap requires i >= j");
    const double a = std::pow(2.0 * params.g / params.omega_r, 2);
    const auto di = static_cast<double>(i);
    const auto dj = static_cast<double>(j);
    const double lag = laguerre_generalized(j, di - dj, a);
    if (a == 0.0) return i == j ? params.delta * lag : 0.0;
    const double log_mag = -0.5 * a + 0.5 * (di - dj) * std::log(a) + 0.5 * (std::lgamma(dj + 1.0) - std::lgamma(di + 1.0));
    return params.delta * std::exp(log_mag) * lag;
}

std::vector<double> GrwaSpectrum::sorted_levels() const
{
    std::vector<double> out{omega0};
    out.insert(out.end(), omega_minus.begin(), omega_minus.end());
    out.insert(out.end(), omega_plus.begin(), omega_plus.end());
    std::sort(out.begin(), out.end());
    return out;
}

GrwaSpectrum grwa_spectrum(const JunctionParams& params, std::size_t n_max)
{
    params.validate();
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const double eps = params.epsilon;
    const double shift = params.g * params.g / params.omega_r;

    std::vector<double> wq(n_max + 1), cp(n_max + 1), cm(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        wq[n] = std::hypot(dressed_gap(n, n, params), eps);
        if (wq[n] > 0.0) {
            cp[n] = std::sqrt((wq[n] + eps) / (2.0 * wq[n]));
            cm[n] = std::sqrt((wq[n] - eps) / (2.0 * wq[n]));
        } else {
            cp[n] = cm[n] = std::sqrt(0.5);
        }
    }

    GrwaSpectrum s;
    s.omega0 = -0.5 * wq[0] - shift;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double d = 0.5 * (wq[n] + wq[n - 1]) - params.omega_r;
        const double o = dressed_gap(n, n - 1, params) * (cp[n] * cp[n - 1] + cm[n] * cm[n - 1]);
        const Mixing m = two_level_mixing(d, o);
        const double base = static_cast<double>(n) * params.omega_r - 0.5 * wq[n] - shift;
        s.omega_minus.push_back(base + 0.5 * m.x_minus);
        s.omega_plus.push_back(base + 0.5 * m.x_plus);
        s.u_minus.push_back(m.u_minus);
        s.u_plus.push_back(m.u_plus);
        s.v_minus.push_back(m.v_minus);
        s.v_plus.push_back(m.v_plus);
    }
    return s;
}

TlsElements grwa_tls_elements(const JunctionParams& params)
{
    if (params.epsilon != 0.0) throw std::invalid_argument("GRWA coupling elements are only available at epsilon = 0");
    const GrwaSpectrum s = grwa_spectrum(params, 1);
    return {2.0 * params.g * s.u_minus[0] / params.omega_r + s.v_minus[0], -s.u_minus[0]};
}

std::vector<double> JcSpectrum::levels() const
{
    std::vector<double> out{omega0};
    for (std::size_t n = 0; n < omega_minus.size(); ++n) {
        out.push_back(omega_minus[n]);
        out.push_back(omega_plus[n]);
    }
    return out;
}

EigenSystem JcSpectrum::three_level_system() const
{
    EigenSystem sys;
    sys.omega = Eigen::Vector3d(omega0, omega_minus.at(0), omega_plus.at(0));
    sys.q_left = q_left;
    sys.q_right = q_right;
    return sys;
}

JcSpectrum jc_spectrum_and_elements(const JunctionParams& params, std::size_t n_max)
{
    params.validate();
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    JcSpectrum s;
    s.omega_q = params.omega_q();
    if (!(s.omega_q > 0.0)) throw std::invalid_argument("RWA spectrum requires omega_q > 0");
    s.detuning = s.omega_q - params.omega_r;
    s.g_x = params.g * params.delta / s.omega_q;
    s.g_z = params.g * params.epsilon / s.omega_q;
    s.omega0 = -0.5 * s.omega_q;

    for (std::size_t n = 1; n <= n_max; ++n) {
        const double coupling = 2.0 * std::sqrt(static_cast<double>(n)) * s.g_x;
        const double root = std::hypot(s.detuning, coupling);
        const double centre = (static_cast<double>(n) - 0.5) * params.omega_r;
        s.omega_minus.push_back(centre - 0.5 * root);
        s.omega_plus.push_back(centre + 0.5 * root);
        const Mixing m = two_level_mixing(s.detuning, coupling);
        s.u_minus.push_back(m.u_minus);
        s.u_plus.push_back(m.u_plus);
        s.v_minus.push_back(m.v_minus);
        s.v_plus.push_back(m.v_plus);
    }

    const double um = s.u_minus[0], up = s.u_plus[0], vm = s.v_minus[0], vp = s.v_plus[0];
    const double sx = params.delta / s.omega_q;
    const double sz = params.epsilon / s.omega_q;
    s.q_left(0, 1) = s.q_left(1, 0) = vm;
    s.q_left(0, 2) = s.q_left(2, 0) = vp;
    s.q_right(0, 1) = s.q_right(1, 0) = um * sx;
    s.q_right(0, 2) = s.q_right(2, 0) = up * sx;
    s.q_right(1, 2) = s.q_right(2, 1) = (vm * vp - um * up) * sz;
    s.q_right(0, 0) = -sz;
    s.q_right(1, 1) = (vm * vm - um * um) * sz;
    s.q_right(2, 2) = (vp * vp - up * up) * sz;
    return s;
}

TlsCurrent tls_current(double omega10, double gamma_left, double gamma_right, double t_left, double t_right)
{
    if (gamma_left < 0.0 || gamma_right < 0.0) throw std::invalid_argument("rates must be >= 0");
    if (!(t_left > 0.0 && t_right > 0.0)) throw std::invalid_argument("temperatures must be > 0");
    if (gamma_left == 0.0 && gamma_right == 0.0) return {0.0, true};
    const double nl = bose(omega10, t_left);
    const double nr = bose(omega10, t_right);
    const double den = gamma_right * (1.0 + 2.0 * nr) + gamma_left * (1.0 + 2.0 * nl);
    return {omega10 * gamma_right * gamma_left * (nl - nr) / den, false};
}

double tls_chi(double q_left_01, double q_right_01)
{
    const double l2 = q_left_01 * q_left_01;
    const double r2 = q_right_01 * q_right_01;
    if (l2 + r2 == 0.0) throw std::domain_error("chi undefined: both coupling elements vanish");
    return (r2 - l2) / (r2 + l2);
}

double tls_rectification(double chi, double omega10, double t_left, double t_right)
{
    if (!(t_left > 0.0 && t_right > 0.0)) throw std::invalid_argument("temperatures must be > 0");
    const double nl = bose(omega10, t_left);
    const double nr = bose(omega10, t_right);
    return chi * (nl - nr) / (1.0 + nr + nl);
}

double gstar_estimate(double delta, double omega_r)
{
    if (!(delta > 0.0) || !(omega_r > 0.0)) throw std::invalid_argument("g* estimate requires delta > 0, omega_r > 0");
    const double r = omega_r / delta;
    const double radicand = 9.0 * r * r - 5.0 * r - 3.75;
    if (radicand < 0.0) throw std::domain_error("g* estimate outside its validity range (negative radicand)");
    return omega_r / (8.0 * r + 4.0) * (r + 1.5 + std::sqrt(radicand));
}

ThreeLevelResult three_level_from_system(const EigenSystem& system, const BathPair& baths, bool use_high_t_w,
                                         BathSide current_into, const MatsubaraPolicy& policy)
{
    baths.validate();
    if (system.size() != 3) throw std::invalid_argument("three-level solution needs exactly three levels");
    for (const Eigen::MatrixXd* q : {&system.q_left, &system.q_right}) {
        if (std::abs((*q)(1, 2)) > 1e-12 || q->diagonal().cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("three-level solution assumes vanishing Q_12 and diagonal elements");
    }

    ThreeLevelResult res;
    const Eigen::VectorXd& w = system.omega;
    const double w10 = w(1) - w(0);
    const double w20 = w(2) - w(0);
    const double w12 = w(1) - w(2);

    auto big_w = [&](double omega, const BathSpec& bath) {
        cplx val = w_function(omega, bath, policy);
        if (use_high_t_w) {
            const HighTemperatureImag hi = w_imag_high_t(omega, bath);
            if (!hi.in_domain && bath.alpha > 0.0)
                res.warnings.push_back("high-temperature Im W used outside 2 pi T > |omega| on the " +
                                       to_string(bath.side) + " bath");
            val = {val.real(), hi.value};
        }
        return val;
    };

    // bath-resolved pieces of the non-vanishing tensor elements
    cplx k1212{}, k1200{}, k1211{}, k1222{}, k1112{}, k2212{};
    double g10 = 0.0, g01 = 0.0, g20 = 0.0, g02 = 0.0;
    for (BathSide side : {BathSide::left, BathSide::right}) {
        const BathSpec& b = baths[side];
        const Eigen::MatrixXd& q = system.q(side);
        const double q01 = q(0, 1), q02 = q(0, 2);
        const cplx w01 = big_w(-w10, b), w10c = big_w(w10, b);
        const cplx w02 = big_w(-w20, b), w20c = big_w(w20, b);

        k1212 -= q01 * q01 * w02 + q02 * q02 * std::conj(w01);
        k1200 += q02 * q01 * (w10c + std::conj(w20c));
        k1211 -= q02 * q01 * std::conj(w01);
        k1112 -= q01 * q02 * std::conj(w01);
        k1222 -= q01 * q02 * w02;
        k2212 -= q02 * q01 * w02;

        g10 += 2.0 * q01 * q01 * w10c.real();
        g01 += 2.0 * q01 * q01 * w01.real();
        g20 += 2.0 * q02 * q02 * w20c.real();
        g02 += 2.0 * q02 * q02 * w02.real();
    }

    const double omega = w12 - k1212.imag();
    const double big_omega = k1212.real();
    const double den = omega * omega + big_omega * big_omega;
    const cplx k12ii[3] = {k1200, k1211, k1222};
    double a[3], b[3];
    for (int i = 0; i < 3; ++i) {
        b[i] = (omega * k12ii[i].real() + big_omega * k12ii[i].imag()) / den;
        a[i] = (k12ii[i].imag() - big_omega * b[i]) / omega;
    }

    // Gamma_{ni} for n, i in {0, 1, 2}; Gamma_12 = Gamma_21 = 0
    const double gamma[3][3] = {{-(g10 + g20), g01, g02}, {g10, -g01, 0.0}, {g20, 0.0, -g02}};
    auto tilde = [&](int n, int i) {
        const cplx& knn12 = n == 1 ? k1112 : k2212;
        return gamma[n][i] + 2.0 * (knn12.real() * a[i] + knn12.imag() * b[i]);
    };

    const double a1 = tilde(1, 0) / (tilde(1, 0) - tilde(1, 1));
    const double b1 = (tilde(1, 2) - tilde(1, 0)) / (tilde(1, 0) - tilde(1, 1));
    const double a2 = tilde(2, 0) / (tilde(2, 0) - tilde(2, 2));
    const double b2 = (tilde(2, 1) - tilde(2, 0)) / (tilde(2, 0) - tilde(2, 2));
    const double rho22 = (a2 + b2 * a1) / (1.0 - b2 * b1);
    const double rho11 = a1 + b1 * rho22;
    const double rho00 = 1.0 - rho11 - rho22;
    const double re12 = a[0] * rho00 + a[1] * rho11 + a[2] * rho22;
    const double im12 = -(b[0] * rho00 + b[1] * rho11 + b[2] * rho22);

    res.state.populations = Eigen::Vector3d(rho00, rho11, rho22);
    res.state.pairs = {CoherentPair{1, 2}};
    res.state.coherences = {cplx(re12, im12)};

    const BathSpec& r = baths[current_into];
    const Eigen::MatrixXd& q = system.q(current_into);
    const double q01 = q(0, 1), q02 = q(0, 2);
    auto wbar = [&](double om) { return om * big_w(om, r); };
    const cplx wb10 = wbar(w10), wb20 = wbar(w20), wb01 = wbar(-w10), wb02 = wbar(-w20);
    res.current = -2.0 * ((q01 * q01 * wb10.real() + q02 * q02 * wb20.real()) * rho00 +
                          q01 * q01 * wb01.real() * rho11 + q02 * q02 * wb02.real() * rho22 +
                          q02 * q01 * ((wb02.real() + wb01.real()) * re12 - (wb02.imag() - wb01.imag()) * im12));

    std::sort(res.warnings.begin(), res.warnings.end());
    res.warnings.erase(std::unique(res.warnings.begin(), res.warnings.end()), res.warnings.end());
    return res;
}

ThreeLevelResult three_level_analytic(const JunctionParams& params, const BathPair& baths, bool use_high_t_w,
                                      BathSide current_into, const MatsubaraPolicy& policy)
{
    if (params.epsilon != 0.0) throw std::invalid_argument("three-level analytic solution requires epsilon = 0");
    const JcSpectrum jc = jc_spectrum_and_elements(params, 1);
    ThreeLevelResult res = three_level_from_system(jc.three_level_system(), baths, use_high_t_w, current_into, policy);
    if (params.g > 0.1 * std::min(params.omega_r, params.delta))
        res.warnings.push_back("outside the validity domain g << omega_r, delta");
    return res;
}

} // namespace rabiheat
