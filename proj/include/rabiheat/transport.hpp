#ifndef RABIHEAT_TRANSPORT_HPP
#define RABIHEAT_TRANSPORT_HPP

#include "rabiheat/baths.hpp"
#include "rabiheat/hilbert.hpp"
#include "rabiheat/master_equation.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rabiheat
{

enum class SolverMode
{
    fsme,
    psme
};

/// Whether the junction Hamiltonian carries the bath counterterm mu_l Q_l^2.
/// `automatic` applies it in PSME mode only: the full-secular treatment is the
/// alpha -> 0 limit, in which the counterterm vanishes.
enum class Renormalization
{
    automatic,
    on,
    off
};

std::string to_string(SolverMode mode);
std::string to_string(Renormalization r);

/// Everything needed to solve one junction except the bath temperatures.
struct ModelConfig
{
    JunctionParams junction;
    BathPair baths;
    TruncationConfig truncation;
    MatsubaraPolicy matsubara;
    SolverMode mode = SolverMode::fsme;
    double coherence_threshold = 0.1;
    Renormalization renormalization = Renormalization::automatic;

    bool renormalized() const;
    /// alpha used to scale currents: the mean of the two bath couplings.
    double alpha_scale() const { return 0.5 * (baths.left.alpha + baths.right.alpha); }
    void validate() const;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Eigensystem of the (possibly renormalized) junction for this model.
EigenSystem model_eigensystem(const ModelConfig& model);

/// Redfield heat current into `bath`:
/// I = -2 Re sum_{n n' m'} Q_{m'n} Q_{nn'} Wbar(omega_nm') rho_{n'm'}.
double heat_current_redfield(const SteadyState& state, const EigenSystem& eigsys, const BathSpec& bath,
                             const MatsubaraPolicy& policy = {}, double zero_time_surrogate = 0.0);

/// Secular heat current sum_{n,m} omega_mn Gamma_nm rho_mm for one bath's rates.
double heat_current_secular(const Eigen::VectorXd& populations, const RateMatrix& rates, const EigenSystem& eigsys);

struct JunctionSolution
{
    SteadyState state;
    double current_left = 0.0;
    double current_right = 0.0;
};

/// Steady state and both bath currents for fixed bath temperatures.
JunctionSolution solve_steady_state(const EigenSystem& eigsys, const BathPair& baths, SolverMode mode,
                                    double coherence_threshold = 0.1, const MatsubaraPolicy& policy = {});

struct CurrentPair
{
    double forward = 0.0;
    double backward = 0.0;
    double min_population = 0.0;
};

/// I_+ with (T_L, T_R) = (T + dT/2, T - dT/2) and I_- with the temperatures
/// swapped, both measured into the right bath. Raw units (hbar omega_r^2).
CurrentPair forward_backward(const EigenSystem& eigsys, const BathPair& baths, double temperature, double delta_t,
                             SolverMode mode, double coherence_threshold = 0.1, const MatsubaraPolicy& policy = {});
CurrentPair forward_backward(const ModelConfig& model, double temperature, double delta_t);

/// (I+ + I-) / (I+ - I- + eta / (I+ - I-)).
double rectification(double i_forward, double i_backward, double eta);

struct ConductanceResult
{
    double kappa = 0.0;
    double kappa_half_step = 0.0;
    bool consistent = true;
};

/// dI+/d(dT) at dT = 0 by central differences with step 1e-4 T, checked
/// against the half step to 1e-4 relative.
ConductanceResult conductance(const ModelConfig& model, double temperature);

struct PointSettings
{
    double temperature = 0.25;
    double delta_t = 0.1;
    // regularizer in units of (alpha hbar omega_r^2)^2
    double eta = 1e-5;
    bool with_conductance = false;
    bool check_truncation = true;
    // relative change of I+ tolerated when the truncation is enlarged
    double truncation_rel_tol = 1e-6;

    friend bool operator==(const PointSettings&, const PointSettings&) = default;
};

/// Currents are reported in units of alpha hbar omega_r^2 (alpha = alpha_scale),
/// raw values alongside.
struct TransportResult
{
    double i_forward = 0.0;
    double i_backward = 0.0;
    double i_forward_raw = 0.0;
    double i_backward_raw = 0.0;
    double rectification = 0.0;
    std::optional<double> conductance;
    std::optional<double> conductance_raw;
    bool conductance_consistent = true;
    double min_population = 1.0;
    bool positivity_ok = true;
    std::optional<bool> truncation_converged;
};

TransportResult evaluate_point(const ModelConfig& model, const PointSettings& settings);

enum class SweepAxis
{
    delta,
    epsilon,
    g,
    delta_t,
    alpha
};

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

/// Sets the quantity named by `axis` (alpha sets both baths).
void apply_axis(SweepAxis axis, double value, ModelConfig& model, PointSettings& settings);

struct SweepSpec
{
    SweepAxis axis = SweepAxis::delta;
    std::vector<double> grid;
    ModelConfig fixed;
    PointSettings settings;

    void validate() const;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct PointOutcome
{
    std::optional<TransportResult> result;
    std::string error;
};

struct PointJob
{
    ModelConfig model;
    PointSettings settings;
};

/// Evaluates every job on a pool of `threads` workers. Outcomes keep the
/// order of `jobs`; an exception thrown by one point is stored in its outcome.
std::vector<PointOutcome> evaluate_points(const std::vector<PointJob>& jobs, std::size_t threads = 1);

struct SweepRow : PointOutcome
{
    double value = 0.0;
};

/// One row per grid point, in grid order. Per-point failures are stored in
/// the row and do not stop the sweep.
std::vector<SweepRow> sweep(const SweepSpec& spec, std::size_t threads = 1);

} // namespace rabiheat

#endif
