#include "rabiheat/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace rabiheat
{

namespace
{

using cplx = std::complex<double>;

BathPair with_temperatures(BathPair baths, double t_left, double t_right)
{
    baths.left.temperature = t_left;
    baths.right.temperature = t_right;
    return baths;
}

bool uncoupled(const BathPair& baths)
{
    return baths.left.alpha == 0.0 && baths.right.alpha == 0.0;
}

} // namespace

std::string to_string(SolverMode mode)
{
    return mode == SolverMode::fsme ? "fsme" : "psme";
}

std::string to_string(Renormalization r)
{
    switch (r) {
    case Renormalization::on: return "on";
    case Renormalization::off: return "off";
    default: return "auto";
    }
}

bool ModelConfig::renormalized() const
{
    if (renormalization == Renormalization::automatic) return mode == SolverMode::psme;
    return renormalization == Renormalization::on;
}

void ModelConfig::validate() const
{
    junction.validate();
    baths.validate();
    truncation.validate();
    matsubara.validate();
    if (!(coherence_threshold > 0.0)) throw std::invalid_argument("solver.coherence_threshold must be > 0");
}

EigenSystem model_eigensystem(const ModelConfig& model)
{
    return solve_junction(model.junction, model.truncation, model.renormalized() ? &model.baths : nullptr);
}

double heat_current_redfield(const SteadyState& state, const EigenSystem& eigsys, const BathSpec& bath,
                             const MatsubaraPolicy& policy, double zero_time_surrogate)
{
    const Eigen::MatrixXd& q = eigsys.q(bath.side);
    const auto n = static_cast<Eigen::Index>(eigsys.size());
    if (state.populations.size() != n) throw std::invalid_argument("steady state and eigensystem differ in size");

    using xc = std::complex<ext_real>;
    const bool ext = state.populations_ext.size() == n && state.coherences_ext.size() == state.pairs.size();

    // W-bar(w) = w W(w); the product is formed in extended precision
    Eigen::Matrix<xc, Eigen::Dynamic, Eigen::Dynamic> wbar(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = eigsys.omega(i) - eigsys.omega(j);
            wbar(i, j) = xc(0.0L, zero_time_surrogate);
            if (w != 0.0) {
                const cplx v = w_function(w, bath, policy);
                wbar(i, j) += static_cast<ext_real>(w) * xc(v.real(), v.imag());
            }
        }
    }

    // only the retained entries of rho are nonzero
    auto contribution = [&](Eigen::Index np, Eigen::Index mp, xc rho) {
        xc acc{0.0L, 0.0L};
        for (Eigen::Index k = 0; k < n; ++k)
            acc += static_cast<ext_real>(q(mp, k)) * static_cast<ext_real>(q(k, np)) * wbar(k, mp);
        return acc * rho;
    };
    auto coherence = [&](std::size_t p) {
        if (ext) return state.coherences_ext[p];
        return xc(state.coherences[p].real(), state.coherences[p].imag());
    };

    xc total{0.0L, 0.0L};
    for (Eigen::Index j = 0; j < n; ++j)
        total += contribution(j, j, ext ? state.populations_ext(j) : static_cast<ext_real>(state.populations(j)));
    for (std::size_t p = 0; p < state.pairs.size(); ++p) {
        const auto a = static_cast<Eigen::Index>(state.pairs[p].n);
        const auto b = static_cast<Eigen::Index>(state.pairs[p].m);
        total += contribution(a, b, coherence(p));
        total += contribution(b, a, std::conj(coherence(p)));
    }
    return static_cast<double>(-2.0L * total.real());
}

namespace
{

template <typename Vec>
double secular_sum(const Vec& populations, const RateMatrix& rates, const EigenSystem& eigsys)
{
    const auto n = static_cast<Eigen::Index>(eigsys.size());
    ext_real current = 0.0L;
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == m) continue;
            current += static_cast<ext_real>(eigsys.omega(m) - eigsys.omega(k)) * rates.gamma(k, m)
                * static_cast<ext_real>(populations(m));
        }
    }
    return static_cast<double>(current);
}

} // namespace

double heat_current_secular(const Eigen::VectorXd& populations, const RateMatrix& rates, const EigenSystem& eigsys)
{
    return secular_sum(populations, rates, eigsys);
}

JunctionSolution solve_steady_state(const EigenSystem& eigsys, const BathPair& baths, SolverMode mode,
                                    double coherence_threshold, const MatsubaraPolicy& policy)
{
    JunctionSolution out;
    if (mode == SolverMode::fsme) {
        const BathRates rates = golden_rule_rates(eigsys, baths);
        out.state = fsme_steady_state(rates);
        out.current_left = secular_sum(out.state.populations_ext, rates.left, eigsys);
        out.current_right = secular_sum(out.state.populations_ext, rates.right, eigsys);
        return out;
    }
    const RedfieldTensor tensor(eigsys, baths, policy);
    out.state = psme_steady_state(tensor, select_coherent_pairs(eigsys, coherence_threshold));
    out.current_left = heat_current_redfield(out.state, eigsys, baths.left, policy);
    out.current_right = heat_current_redfield(out.state, eigsys, baths.right, policy);
    return out;
}

CurrentPair forward_backward(const EigenSystem& eigsys, const BathPair& baths, double temperature, double delta_t,
                             SolverMode mode, double coherence_threshold, const MatsubaraPolicy& policy)
{
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
    if (!(delta_t >= 0.0 && delta_t < 2.0 * temperature))
        throw std::invalid_argument("delta_T must satisfy 0 <= delta_T < 2 T");

    CurrentPair out;
    if (uncoupled(baths)) return out;
    const double hot = temperature + 0.5 * delta_t;
    const double cold = temperature - 0.5 * delta_t;
    const auto fwd = solve_steady_state(eigsys, with_temperatures(baths, hot, cold), mode, coherence_threshold, policy);
    const auto bwd = solve_steady_state(eigsys, with_temperatures(baths, cold, hot), mode, coherence_threshold, policy);
    out.forward = fwd.current_right;
    out.backward = bwd.current_right;
    out.min_population = std::min(fwd.state.min_population(), bwd.state.min_population());
    return out;
}

CurrentPair forward_backward(const ModelConfig& model, double temperature, double delta_t)
{
    model.validate();
    return forward_backward(model_eigensystem(model), model.baths, temperature, delta_t, model.mode,
                            model.coherence_threshold, model.matsubara);
}

double rectification(double i_forward, double i_backward, double eta)
{
    if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
    const double diff = i_forward - i_backward;
    if (diff == 0.0) {
        if (eta == 0.0) throw std::domain_error("rectification undefined: I+ - I- = 0 with eta = 0");
        return 0.0;
    }
    return (i_forward + i_backward) / (diff + eta / diff);
}

ConductanceResult conductance(const ModelConfig& model, double temperature)
{
    model.validate();
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
    ConductanceResult out;
    if (uncoupled(model.baths)) return out;

    const EigenSystem sys = model_eigensystem(model);
    auto slope = [&](double step) {
        const auto c = forward_backward(sys, model.baths, temperature, step, model.mode, model.coherence_threshold,
                                        model.matsubara);
        // I+(-step) is the backward current at +step
        return (c.forward - c.backward) / (2.0 * step);
    };
    const double step = 1e-4 * temperature;
    out.kappa = slope(step);
    out.kappa_half_step = slope(0.5 * step);
    const double scale = std::max(std::abs(out.kappa), std::abs(out.kappa_half_step));
    out.consistent = scale == 0.0 || std::abs(out.kappa - out.kappa_half_step) <= 1e-4 * scale;
    return out;
}

TransportResult evaluate_point(const ModelConfig& model, const PointSettings& settings)
{
    model.validate();
    TransportResult res;
    const double alpha = model.alpha_scale();
    auto scaled = [alpha](double raw) { return alpha > 0.0 ? raw / alpha : 0.0; };

    const CurrentPair c = forward_backward(model, settings.temperature, settings.delta_t);
    res.i_forward_raw = c.forward;
    res.i_backward_raw = c.backward;
    res.i_forward = scaled(c.forward);
    res.i_backward = scaled(c.backward);
    res.min_population = c.min_population;
    res.positivity_ok = uncoupled(model.baths) || c.min_population >= -1e-6;
    res.rectification = res.i_forward == res.i_backward ? 0.0
                                                          : rectification(res.i_forward, res.i_backward, settings.eta);

    if (settings.with_conductance) {
        const ConductanceResult k = conductance(model, settings.temperature);
        res.conductance_raw = k.kappa;
        res.conductance = scaled(k.kappa);
        res.conductance_consistent = k.consistent;
    }

    if (settings.check_truncation) {
        res.truncation_converged = check_truncation_convergence(model.truncation, [&](const TruncationConfig& t) {
            if (t.n_fock == model.truncation.n_fock && t.n_levels == model.truncation.n_levels) return c.forward;
            ModelConfig bigger = model;
            bigger.truncation = t;
            return forward_backward(bigger, settings.temperature, settings.delta_t).forward;
        }, settings.truncation_rel_tol);
    }
    return res;
}

std::string to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::delta: return "delta";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::g: return "g";
    case SweepAxis::delta_t: return "delta_T";
    case SweepAxis::alpha: return "alpha";
    }
    return "delta";
}

SweepAxis sweep_axis_from_string(const std::string& name)
{
    for (auto a : {SweepAxis::delta, SweepAxis::epsilon, SweepAxis::g, SweepAxis::delta_t, SweepAxis::alpha})
        if (to_string(a) == name) return a;
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected delta, epsilon, g, delta_T or alpha)");
}

void apply_axis(SweepAxis axis, double value, ModelConfig& model, PointSettings& settings)
{
    switch (axis) {
    case SweepAxis::delta: model.junction.delta = value; break;
    case SweepAxis::epsilon: model.junction.epsilon = value; break;
    case SweepAxis::g: model.junction.g = value; break;
    case SweepAxis::delta_t: settings.delta_t = value; break;
    case SweepAxis::alpha:
        model.baths.left.alpha = value;
        model.baths.right.alpha = value;
        break;
    }
}

void SweepSpec::validate() const
{
    if (grid.empty()) throw std::invalid_argument("sweep.grid must not be empty");
    const bool up = grid.size() < 2 || grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1]))
            throw std::invalid_argument("sweep.grid must be strictly monotone");
    }
}

std::vector<PointOutcome> evaluate_points(const std::vector<PointJob>& jobs, std::size_t threads)
{
    std::vector<PointOutcome> out(jobs.size());
    if (jobs.empty()) return out;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                out[i].result = evaluate_point(jobs[i].model, jobs[i].settings);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };

    threads = std::clamp<std::size_t>(threads, 1, jobs.size());
    if (threads == 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    return out;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, std::size_t threads)
{
    spec.validate();
    std::vector<PointJob> jobs;
    for (double v : spec.grid) {
        PointJob job{spec.fixed, spec.settings};
        apply_axis(spec.axis, v, job.model, job.settings);
        jobs.push_back(std::move(job));
    }
    auto outcomes = evaluate_points(jobs, threads);
    std::vector<SweepRow> rows(spec.grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        static_cast<PointOutcome&>(rows[i]) = std::move(outcomes[i]);
        rows[i].value = spec.grid[i];
    }
    return rows;
}

} // namespace rabiheat
