#include "rabiheat/master_equation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rabiheat
{

namespace
{

using cplx = std::complex<double>;

constexpr double max_condition = 1e12;

Eigen::MatrixXcd tabulate_w(const EigenSystem& sys, const BathSpec& bath, const MatsubaraPolicy& policy)
{
    const auto n = static_cast<Eigen::Index>(sys.size());
    Eigen::MatrixXcd w(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = w_function(sys.omega(i) - sys.omega(j), bath, policy);
    return w;
}

// Levels not connected to level 0 through nonzero rates.
std::vector<std::size_t> disconnected_levels(const Eigen::MatrixXd& gamma)
{
    const auto n = gamma.rows();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (seen[static_cast<std::size_t>(j)] || j == i) continue;
            if (gamma(i, j) > 0.0 || gamma(j, i) > 0.0) {
                seen[static_cast<std::size_t>(j)] = true;
                stack.push_back(j);
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) out.push_back(i);
    return out;
}

struct LinearSolution
{
    ExtVector x;
    double residual = 0.0;
    double condition = 1.0;
    bool least_squares = false;
};

LinearSolution solve_dense(const ExtMatrix& a, const ExtVector& b)
{
    LinearSolution out;
    Eigen::JacobiSVD<ExtMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const ext_real smallest = sv(sv.size() - 1);
    if (!(smallest > 0.0L) || !std::isfinite(sv(0)))
        throw SingularSystemError("steady-state system is singular");
    out.condition = static_cast<double>(sv(0) / smallest);
    if (out.condition > max_condition) {
        out.least_squares = true;
        out.x = svd.solve(b);
    } else {
        out.x = a.partialPivLu().solve(b);
    }
    out.residual = static_cast<double>((a * out.x - b).cwiseAbs().maxCoeff());
    return out;
}

// Grassmann-Taksar-Heyman state reduction; p(i, j) is the rate i -> j (the
// diagonal is ignored). Subtraction free, so every population keeps full
// relative accuracy even when it is exponentially small.
ExtVector gth_populations(ExtMatrix p)
{
    const auto n = p.rows();
    for (Eigen::Index k = n - 1; k >= 1; --k) {
        ext_real out_rate = 0.0L;
        for (Eigen::Index j = 0; j < k; ++j) out_rate += p(k, j);
        if (!(out_rate > 0.0L)) {
            throw SingularSystemError("rate matrix is reducible; level " + std::to_string(k)
                                          + " has no path to the lower levels",
                                      {static_cast<std::size_t>(k)});
        }
        for (Eigen::Index i = 0; i < k; ++i) p(i, k) /= out_rate;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (p(i, k) == 0.0L) continue;
            for (Eigen::Index j = 0; j < k; ++j)
                if (j != i) p(i, j) += p(i, k) * p(k, j);
        }
    }
    ExtVector pi = ExtVector::Zero(n);
    pi(0) = 1.0L;
    for (Eigen::Index k = 1; k < n; ++k) {
        ext_real acc = 0.0L;
        for (Eigen::Index i = 0; i < k; ++i) acc += pi(i) * p(i, k);
        pi(k) = acc;
    }
    return pi / pi.sum();
}

SteadyState fsme_from_transposed(const ExtMatrix& transposed, const Eigen::MatrixXd& gamma)
{
    const auto n = gamma.rows();
    if (n < 1 || gamma.cols() != n) throw std::invalid_argument("fsme_steady_state: rate matrix must be square");
    if (auto lost = disconnected_levels(gamma); !lost.empty()) {
        std::ostringstream os;
        os << "rate matrix is reducible; levels disconnected from the ground manifold:";
        for (auto l : lost) os << ' ' << l;
        throw SingularSystemError(os.str(), std::move(lost));
    }
    SteadyState state;
    state.populations_ext = gth_populations(transposed);
    state.populations = state.populations_ext.cast<double>();
    state.residual = (gamma * state.populations).cwiseAbs().maxCoeff();
    return state;
}

} // namespace

Eigen::MatrixXcd SteadyState::density_matrix() const
{
    const auto n = populations.size();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) rho(i, i) = populations(i);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto a = static_cast<Eigen::Index>(pairs[p].n);
        const auto b = static_cast<Eigen::Index>(pairs[p].m);
        rho(a, b) = coherences[p];
        rho(b, a) = std::conj(coherences[p]);
    }
    return rho;
}

RedfieldTensor::RedfieldTensor(const EigenSystem& eigsys, const BathPair& baths, const MatsubaraPolicy& policy)
    : m_sys(eigsys), m_w_left(tabulate_w(eigsys, baths.left, policy)),
      m_w_right(tabulate_w(eigsys, baths.right, policy))
{
}

cplx RedfieldTensor::element(BathSide side, std::size_t n, std::size_t m, std::size_t np, std::size_t mp) const
{
    const Eigen::MatrixXd& q = m_sys.q(side);
    const Eigen::MatrixXcd& w = w_table(side);
    const auto N = static_cast<Eigen::Index>(size());
    const auto in = static_cast<Eigen::Index>(n), im = static_cast<Eigen::Index>(m);
    const auto inp = static_cast<Eigen::Index>(np), imp = static_cast<Eigen::Index>(mp);

    cplx value = q(imp, im) * q(in, inp) * (w(in, imp) + std::conj(w(im, inp)));
    if (mp == m) {
        for (Eigen::Index k = 0; k < N; ++k) value -= q(k, in) * q(k, inp) * w(k, imp);
    }
    if (np == n) {
        for (Eigen::Index k = 0; k < N; ++k) value -= q(k, imp) * q(k, im) * std::conj(w(k, inp));
    }
    return value;
}

cplx RedfieldTensor::operator()(std::size_t n, std::size_t m, std::size_t np, std::size_t mp) const
{
    return element(BathSide::left, n, m, np, mp) + element(BathSide::right, n, m, np, mp);
}

std::complex<ext_real> RedfieldTensor::element_ext(std::size_t n, std::size_t m, std::size_t np, std::size_t mp) const
{
    using xc = std::complex<ext_real>;
    const auto N = static_cast<Eigen::Index>(size());
    const auto in = static_cast<Eigen::Index>(n), im = static_cast<Eigen::Index>(m);
    const auto inp = static_cast<Eigen::Index>(np), imp = static_cast<Eigen::Index>(mp);
    auto x = [](cplx c) { return xc(c.real(), c.imag()); };

    xc value{0.0L, 0.0L};
    for (BathSide side : {BathSide::left, BathSide::right}) {
        const Eigen::MatrixXd& q = m_sys.q(side);
        const Eigen::MatrixXcd& w = w_table(side);
        auto qq = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) {
            return static_cast<ext_real>(q(a, b)) * static_cast<ext_real>(q(c, d));
        };
        value += qq(imp, im, in, inp) * (x(w(in, imp)) + std::conj(x(w(im, inp))));
        if (mp == m) {
            for (Eigen::Index k = 0; k < N; ++k) value -= qq(k, in, k, inp) * x(w(k, imp));
        }
        if (np == n) {
            for (Eigen::Index k = 0; k < N; ++k) value -= qq(k, imp, k, im) * std::conj(x(w(k, inp)));
        }
    }
    return value;
}

cplx redfield_element(std::size_t n, std::size_t m, std::size_t np, std::size_t mp, const EigenSystem& eigsys,
                      const BathPair& baths, const MatsubaraPolicy& policy)
{
    const std::size_t size = eigsys.size();
    if (n >= size || m >= size || np >= size || mp >= size)
        throw std::out_of_range("redfield_element: index exceeds the number of levels");
    return RedfieldTensor(eigsys, baths, policy)(n, m, np, mp);
}

BathRates golden_rule_rates(const EigenSystem& eigsys, const BathPair& baths)
{
    const auto n = static_cast<Eigen::Index>(eigsys.size());
    auto rates_for = [&](const BathSpec& bath) {
        const Eigen::MatrixXd& q = eigsys.q(bath.side);
        RateMatrix r{Eigen::MatrixXd::Zero(n, n)};
        for (Eigen::Index to = 0; to < n; ++to) {
            for (Eigen::Index from = 0; from < n; ++from) {
                if (to == from) continue;
                const double qq = q(to, from) * q(to, from);
                if (qq == 0.0) continue;
                r.gamma(to, from) = qq * power_spectrum(eigsys.omega(from) - eigsys.omega(to), bath);
            }
        }
        for (Eigen::Index c = 0; c < n; ++c) r.gamma(c, c) = -(r.gamma.col(c).sum() - r.gamma(c, c));
        return r;
    };
    BathRates out;
    out.left = rates_for(baths.left);
    out.right = rates_for(baths.right);
    out.total.gamma = out.left.gamma + out.right.gamma;
    return out;
}

SteadyState fsme_steady_state(const RateMatrix& rates)
{
    return fsme_from_transposed(rates.gamma.transpose().cast<ext_real>(), rates.gamma);
}

SteadyState fsme_steady_state(const BathRates& rates)
{
    const ExtMatrix sum = rates.left.gamma.cast<ext_real>() + rates.right.gamma.cast<ext_real>();
    return fsme_from_transposed(sum.transpose(), rates.total.gamma);
}

CoherentPairSet select_coherent_pairs(const EigenSystem& eigsys, double threshold)
{
    if (!(threshold >= 0.0)) throw std::invalid_argument("coherence threshold must be >= 0");
    CoherentPairSet pairs;
    for (std::size_t n = 0; n < eigsys.size(); ++n) {
        for (std::size_t m = n + 1; m < eigsys.size(); ++m) {
            const double gap = std::abs(eigsys.bohr(n, m));
            if (gap > 0.0 && gap < threshold) pairs.push_back({n, m});
        }
    }
    return pairs;
}

namespace
{

// Real linear system over {populations} U {Re rho_p, Im rho_p}; the first
// population row is the trace constraint when with_trace is set.
void assemble_psme(const RedfieldTensor& k, const CoherentPairSet& pairs, bool with_trace, ExtMatrix& a,
                   ExtVector& b)
{
    using xc = std::complex<ext_real>;
    const auto n = static_cast<Eigen::Index>(k.size());
    const auto np = static_cast<Eigen::Index>(pairs.size());
    const Eigen::Index dim = n + 2 * np;
    a = ExtMatrix::Zero(dim, dim);
    b = ExtVector::Zero(dim);
    const EigenSystem& sys = k.eigensystem();

    // row_re/row_im receive the real/imag parts of sum K_{r1 r2 n' m'} rho_{n'm'}
    auto fill = [&](std::size_t r1, std::size_t r2, Eigen::Index row_re, Eigen::Index row_im) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const xc c = k.element_ext(r1, r2, static_cast<std::size_t>(j), static_cast<std::size_t>(j));
            a(row_re, j) += c.real();
            if (row_im >= 0) a(row_im, j) += c.imag();
        }
        for (Eigen::Index q = 0; q < np; ++q) {
            const xc kab = k.element_ext(r1, r2, pairs[q].n, pairs[q].m);
            const xc kba = k.element_ext(r1, r2, pairs[q].m, pairs[q].n);
            const xc cx = kab + kba;
            const xc cy = xc{0.0L, 1.0L} * (kab - kba);
            a(row_re, n + 2 * q) += cx.real();
            a(row_re, n + 2 * q + 1) += cy.real();
            if (row_im >= 0) {
                a(row_im, n + 2 * q) += cx.imag();
                a(row_im, n + 2 * q + 1) += cy.imag();
            }
        }
    };

    for (Eigen::Index i = 0; i < n; ++i) fill(static_cast<std::size_t>(i), static_cast<std::size_t>(i), i, -1);
    for (Eigen::Index q = 0; q < np; ++q) {
        const Eigen::Index re = n + 2 * q, im = re + 1;
        const ext_real w = sys.bohr(pairs[q].n, pairs[q].m);
        // -i w (x + i y) = w y - i w x
        a(re, im) += w;
        a(im, re) -= w;
        fill(pairs[q].n, pairs[q].m, re, im);
    }
    if (with_trace) {
        a.row(0).setZero();
        a.row(0).head(n).setOnes();
        b(0) = 1.0L;
    }
}

void validate_pairs(const CoherentPairSet& pairs, std::size_t levels)
{
    for (const auto& p : pairs) {
        if (p.n >= p.m || p.m >= levels) throw std::invalid_argument("coherent pair must satisfy n < m < n_levels");
    }
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i + 1; j < pairs.size(); ++j)
            if (pairs[i] == pairs[j]) throw std::invalid_argument("coherent pair listed twice");
}

} // namespace

SteadyState psme_steady_state(const RedfieldTensor& tensor, const CoherentPairSet& pairs)
{
    validate_pairs(pairs, tensor.size());
    ExtMatrix a;
    ExtVector b;
    assemble_psme(tensor, pairs, true, a, b);
    const LinearSolution sol = solve_dense(a, b);

    const auto n = static_cast<Eigen::Index>(tensor.size());
    SteadyState state;
    state.populations_ext = sol.x.head(n);
    state.populations = state.populations_ext.cast<double>();
    state.pairs = pairs;
    for (std::size_t q = 0; q < pairs.size(); ++q) {
        const auto base = n + 2 * static_cast<Eigen::Index>(q);
        state.coherences_ext.emplace_back(sol.x(base), sol.x(base + 1));
        state.coherences.emplace_back(static_cast<double>(sol.x(base)), static_cast<double>(sol.x(base + 1)));
    }
    state.least_squares = sol.least_squares;
    state.condition_number = sol.condition;
    state.residual = sol.residual;
    return state;
}

SteadyState psme_steady_state(const EigenSystem& eigsys, const BathPair& baths, const CoherentPairSet& pairs,
                              const MatsubaraPolicy& policy)
{
    return psme_steady_state(RedfieldTensor(eigsys, baths, policy), pairs);
}

double redfield_residual(const RedfieldTensor& tensor, const SteadyState& state)
{
    const Eigen::MatrixXcd rho = state.density_matrix();
    const EigenSystem& sys = tensor.eigensystem();
    const std::size_t n = tensor.size();

    // retained index set: the diagonal plus the listed pairs in both orders
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    for (std::size_t i = 0; i < n; ++i) kept.emplace_back(i, i);
    for (const auto& p : state.pairs) {
        kept.emplace_back(p.n, p.m);
        kept.emplace_back(p.m, p.n);
    }

    double worst = std::abs(rho.trace() - 1.0);
    for (const auto& [r1, r2] : kept) {
        cplx lhs = cplx{0.0, -sys.bohr(r1, r2)} * rho(static_cast<Eigen::Index>(r1), static_cast<Eigen::Index>(r2));
        for (const auto& [c1, c2] : kept)
            lhs += tensor(r1, r2, c1, c2) * rho(static_cast<Eigen::Index>(c1), static_cast<Eigen::Index>(c2));
        worst = std::max(worst, std::abs(lhs));
    }
    return worst;
}

} // namespace rabiheat
