#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rabiheat/master_equation.hpp"
#include "support.hpp"

#include <cmath>

using namespace rabiheat;
using rabiheat::testing::make_baths;
using rabiheat::testing::rel_diff;

namespace
{

EigenSystem junction(double delta, double g, double epsilon = 0.0, std::size_t n_levels = 5)
{
    JunctionParams p;
    p.delta = delta;
    p.g = g;
    p.epsilon = epsilon;
    return solve_junction(p, {20, n_levels});
}

Eigen::VectorXd gibbs(const EigenSystem& es, double t)
{
    Eigen::VectorXd w(es.omega.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-(es.omega(i) - es.omega(0)) / t);
    return w / w.sum();
}

} // namespace

TEST_CASE("populations block of the tensor is the golden-rule rate")
{
    const auto es = junction(0.8, 0.2, 0.1);
    const auto baths = make_baths(1e-2, 0.4, 0.2);
    const RedfieldTensor k(es, baths);
    for (std::size_t n = 0; n < es.size(); ++n)
        for (std::size_t m = 0; m < es.size(); ++m) {
            if (n == m) continue;
            double ref = 0.0;
            for (BathSide side : {BathSide::left, BathSide::right})
                ref += es.q(side)(n, m) * es.q(side)(n, m) * power_spectrum(es.bohr(m, n), baths[side]);
            const auto val = k(n, n, m, m);
            CHECK(val.real() == doctest::Approx(ref).epsilon(1e-12).scale(1e-14));
            CHECK(std::abs(val.imag()) < 1e-14);
            CHECK(redfield_element(n, n, m, m, es, baths) == val);
        }
}

TEST_CASE("zero coupling operators give a zero tensor")
{
    EigenSystem es;
    es.omega = Eigen::Vector3d(0.0, 0.7, 1.3);
    es.q_left = Eigen::MatrixXd::Zero(3, 3);
    es.q_right = Eigen::MatrixXd::Zero(3, 3);
    const RedfieldTensor k(es, make_baths(1e-2, 0.3, 0.2));
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t d = 0; d < 3; ++d) CHECK(k(a, b, c, d) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("golden-rule rates: column sums and detailed balance")
{
    const auto es = junction(0.7, 0.3, 0.2);
    const auto baths = make_baths(1e-2, 0.5, 0.2);
    const auto r = golden_rule_rates(es, baths);
    for (const RateMatrix* m : {&r.left, &r.right, &r.total}) {
        CHECK(m->gamma.colwise().sum().cwiseAbs().maxCoeff() < 1e-15 * (1.0 + m->gamma.cwiseAbs().maxCoeff()) * 10);
        for (Eigen::Index i = 0; i < m->gamma.rows(); ++i)
            for (Eigen::Index j = 0; j < m->gamma.cols(); ++j)
                if (i != j) CHECK(m->gamma(i, j) >= 0.0);
    }
    for (BathSide side : {BathSide::left, BathSide::right}) {
        const auto& g = r[side].gamma;
        const double t = baths[side].temperature;
        for (std::size_t n = 0; n < es.size(); ++n)
            for (std::size_t m = n + 1; m < es.size(); ++m) {
                const auto a = static_cast<Eigen::Index>(n), b = static_cast<Eigen::Index>(m);
                if (g(a, b) == 0.0 || g(b, a) < 1e-300) continue;
                CHECK(g(a, b) / g(b, a) == doctest::Approx(std::exp(es.bohr(m, n) / t)).epsilon(1e-10));
            }
    }
}

TEST_CASE("vanishing coupling element gives a vanishing rate")
{
    // zero bias: parity forbids transitions inside a sector for Q_R as well
    EigenSystem es;
    es.omega = Eigen::Vector3d(0.0, 0.7, 1.3);
    es.q_left = Eigen::Matrix3d::Zero();
    es.q_right = Eigen::Matrix3d::Zero();
    es.q_left(0, 1) = es.q_left(1, 0) = 0.5;
    es.q_right(1, 2) = es.q_right(2, 1) = 0.8;
    es.q_right(0, 2) = es.q_right(2, 0) = 0.3;
    const auto r = golden_rule_rates(es, make_baths(1e-2, 0.3, 0.2));
    CHECK(r.left.gamma(0, 2) == 0.0);
    CHECK(r.left.gamma(2, 1) == 0.0);
    CHECK(r.right.gamma(1, 0) == 0.0);
}

TEST_CASE("FSME at equal temperatures is the Gibbs state")
{
    for (double t : {0.1, 0.25, 1.0})
        for (double eps : {0.0, 0.5}) {
            const auto es = junction(0.9, 0.25, eps);
            const auto state = fsme_steady_state(golden_rule_rates(es, make_baths(1e-3, t, t)).total);
            const auto ref = gibbs(es, t);
            for (Eigen::Index i = 0; i < ref.size(); ++i)
                CHECK(rel_diff(state.populations(i), ref(i)) < 1e-8);
            CHECK(state.coherences.empty());
        }
}

TEST_CASE("two-level balance")
{
    const auto es = junction(0.7, 0.1, 0.0, 2);
    const auto r = golden_rule_rates(es, make_baths(1e-2, 0.4, 0.1));
    const auto s = fsme_steady_state(r.total);
    CHECK(s.populations(1) / s.populations(0) == doctest::Approx(r.total.gamma(1, 0) / r.total.gamma(0, 1)).epsilon(1e-14));
}

TEST_CASE("biased resonant five-level steady state is strictly positive")
{
    const auto es = junction(1.0, 0.01);
    const auto s = fsme_steady_state(golden_rule_rates(es, make_baths(1e-3, 0.3, 0.2)).total);
    CHECK(s.populations.minCoeff() > 0.0);
    CHECK(s.populations.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.positive());
}

TEST_CASE("reducible rate matrix names the disconnected level")
{
    RateMatrix r;
    r.gamma = Eigen::Matrix3d::Zero();
    r.gamma(0, 1) = 1.0;
    r.gamma(1, 0) = 0.5;
    r.gamma(0, 0) = -0.5;
    r.gamma(1, 1) = -1.0;
    try {
        fsme_steady_state(r);
        FAIL("expected a singular system");
    } catch (const SingularSystemError& e) {
        REQUIRE(e.disconnected_levels().size() == 1);
        CHECK(e.disconnected_levels()[0] == 2);
    }
}

TEST_CASE("FSME populations do not depend on a uniform coupling scale")
{
    const auto es = junction(0.8, 0.3, 0.3);
    const auto ref = fsme_steady_state(golden_rule_rates(es, make_baths(1e-3, 0.35, 0.15)).total).populations;
    for (double c : {0.1, 1.0, 10.0}) {
        const auto p = fsme_steady_state(golden_rule_rates(es, make_baths(c * 1e-3, 0.35, 0.15)).total).populations;
        CHECK((p - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("coherent pair selection")
{
    const auto resonant = junction(1.0, 0.01);
    const auto pairs = select_coherent_pairs(resonant, 0.1);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == CoherentPair{1, 2});
    CHECK(pairs[1] == CoherentPair{3, 4});
    for (const auto& p : pairs) {
        CHECK(p.n < p.m);
        CHECK(std::abs(resonant.bohr(p.n, p.m)) < 0.1);
    }
    CHECK(select_coherent_pairs(junction(0.7, 0.3), 0.1).empty());
    CHECK(select_coherent_pairs(resonant, 0.0).empty());
    CHECK(select_coherent_pairs(resonant, 1e-9).empty());
}

TEST_CASE("PSME with no pairs is the FSME")
{
    const auto es = junction(0.8, 0.2, 0.3);
    const auto baths = make_baths(1e-3, 0.3, 0.2);
    const auto p = psme_steady_state(es, baths, {});
    const auto f = fsme_steady_state(golden_rule_rates(es, baths).total);
    CHECK((p.populations - f.populations).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(p.coherences.empty());
}

TEST_CASE("PSME approaches the FSME at vanishing coupling")
{
    const auto es = junction(1.0, 0.01);
    const auto baths = make_baths(1e-7, 0.3, 0.2);
    const auto pairs = select_coherent_pairs(es, 0.1);
    const auto p = psme_steady_state(es, baths, pairs);
    const auto f = fsme_steady_state(golden_rule_rates(es, baths).total);
    for (Eigen::Index i = 0; i < f.populations.size(); ++i)
        CHECK(rel_diff(p.populations(i), f.populations(i)) < 1e-3);
}

TEST_CASE("PSME solution: residual, trace and hermiticity")
{
    for (double alpha : {1e-4, 1e-2}) {
        const auto es = junction(1.0, 0.01);
        const RedfieldTensor k(es, make_baths(alpha, 0.3, 0.2));
        const auto s = psme_steady_state(k, select_coherent_pairs(es, 0.1));
        CHECK(redfield_residual(k, s) < 1e-10);
        CHECK(std::abs(s.populations.sum() - 1.0) < 1e-12);
        const auto rho = s.density_matrix();
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        CHECK(s.coherences.size() == 2);
    }
}

TEST_CASE("coherences fade as the doublet splitting grows")
{
    double prev = 1e300;
    for (double g : {0.01, 0.02, 0.04, 0.08}) {
        const auto es = junction(1.0, g);
        const auto s = psme_steady_state(es, make_baths(1e-3, 0.3, 0.2), {{1, 2}});
        const double mag = std::abs(s.coherences[0]);
        CHECK(mag < prev);
        prev = mag;
    }
}

TEST_CASE("pair list is validated")
{
    const auto es = junction(1.0, 0.01);
    const auto baths = make_baths(1e-3, 0.3, 0.2);
    CHECK_THROWS_AS(psme_steady_state(es, baths, {{2, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(psme_steady_state(es, baths, {{1, 7}}), std::invalid_argument);
    CHECK_THROWS_AS(psme_steady_state(es, baths, {{1, 2}, {1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(redfield_element(0, 0, 0, 9, es, baths), std::out_of_range);
}
