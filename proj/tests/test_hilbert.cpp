#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rabiheat/approx.hpp"
#include "rabiheat/hilbert.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace rabiheat;
using rabiheat::testing::make_baths;

namespace
{

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& h)
{
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

std::vector<double> uncoupled_levels(double omega_q, std::size_t n_fock)
{
    std::vector<double> out;
    for (std::size_t n = 0; n < n_fock; ++n) {
        out.push_back(-omega_q / 2 + n);
        out.push_back(omega_q / 2 + n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("decoupled junction with zero qubit energy")
{
    JunctionParams p;
    p.delta = 0.0;
    p.g = 0.0;
    const auto ev = eigenvalues(build_rabi_hamiltonian(p, 2));
    CHECK(ev(0) == doctest::Approx(0.0));
    CHECK(ev(1) == doctest::Approx(0.0));
    CHECK(ev(2) == doctest::Approx(1.0));
    CHECK(ev(3) == doctest::Approx(1.0));
}

TEST_CASE("g = 0 spectrum factorizes into qubit and oscillator ladders")
{
    for (double eps : {0.0, 0.4, -1.3}) {
        JunctionParams p;
        p.delta = 0.7;
        p.epsilon = eps;
        p.g = 0.0;
        const std::size_t n_fock = 12;
        const auto ev = eigenvalues(build_rabi_hamiltonian(p, n_fock));
        const auto ref = uncoupled_levels(p.omega_q(), n_fock);
        for (std::size_t i = 0; i < ref.size(); ++i)
            CHECK(std::abs(ev(static_cast<Eigen::Index>(i)) - ref[i]) < 1e-12 * std::max(1.0, std::abs(ref[i])));
        if (eps == 0.0) CHECK(ev(1) - ev(0) == doctest::Approx(0.7).epsilon(1e-12));
    }
}

TEST_CASE("Hamiltonian is real symmetric")
{
    JunctionParams p;
    p.delta = 0.8;
    p.epsilon = 0.3;
    p.g = 0.4;
    const auto h = build_rabi_hamiltonian(p, 15);
    CHECK((h - h.transpose()).norm() == 0.0);
}

TEST_CASE("vacuum Rabi splitting at resonance")
{
    JunctionParams p;
    p.delta = 1.0;
    p.g = 0.01;
    const auto es = solve_junction(p, {20, 5});
    const double lower = es.omega(1) - es.omega(0);
    const double upper = es.omega(2) - es.omega(0);
    CHECK(upper - lower == doctest::Approx(0.02).epsilon(1e-3));
    CHECK(0.5 * (upper + lower) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("coupling operators")
{
    for (std::size_t n_fock : {2u, 3u, 9u}) {
        const auto ops = build_coupling_operators(n_fock);
        const auto dim = static_cast<Eigen::Index>(2 * n_fock);
        CHECK((ops.q_right * ops.q_right - Eigen::MatrixXd::Identity(dim, dim)).norm() == 0.0);
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t j = 0; j + 1 < n_fock; ++j) {
                const auto a = static_cast<Eigen::Index>(product_index(s, j, n_fock));
                const auto b = static_cast<Eigen::Index>(product_index(s, j + 1, n_fock));
                CHECK(ops.q_left(a, b) == doctest::Approx(std::sqrt(j + 1.0)));
                CHECK(ops.q_left(b, a) == doctest::Approx(std::sqrt(j + 1.0)));
            }
        CHECK(ops.q_left.diagonal().norm() == 0.0);
    }
    const auto two = build_coupling_operators(2);
    CHECK(two.q_left(0, 1) == 1.0);
    CHECK(two.q_right(0, 0) == 1.0);
    CHECK(two.q_right(2, 2) == -1.0);
}

TEST_CASE("projected square of a + a^dagger keeps the top Fock state complete")
{
    const std::size_t n_fock = 6;
    const auto ops = build_coupling_operators(n_fock);
    // <n|(a + a^dagger)^2|n> = 2n + 1 in the full space
    for (std::size_t j = 0; j < n_fock; ++j) {
        const auto i = static_cast<Eigen::Index>(product_index(0, j, n_fock));
        CHECK(ops.q_left_sq(i, i) == doctest::Approx(2.0 * j + 1.0));
    }
    CHECK((ops.q_right_sq - Eigen::MatrixXd::Identity(12, 12)).norm() == 0.0);
}

TEST_CASE("bath renormalization")
{
    BathSpec b{BathSide::left, 1e-2, 0.25, 5.0};
    CHECK(renormalization_strength(b) == doctest::Approx(std::numbers::pi * 1e-2 * 5.0 / 2.0).epsilon(1e-15));
    CHECK(renormalization_strength(b) == doctest::Approx(0.0785).epsilon(1e-3));

    JunctionParams p;
    p.delta = 0.9;
    p.g = 0.2;
    const std::size_t n_fock = 12;
    const auto h = build_rabi_hamiltonian(p, n_fock);
    const auto ops = build_coupling_operators(n_fock);

    SUBCASE("zero coupling leaves H unchanged")
    {
        CHECK((apply_bath_renormalization(h, ops, make_baths(0.0, 0.3, 0.2)) - h).norm() == 0.0);
    }
    SUBCASE("right bath term is a uniform shift")
    {
        BathPair baths = make_baths(0.0, 0.3, 0.2);
        baths.right.alpha = 3e-2;
        const auto ev0 = eigenvalues(h);
        const auto ev1 = eigenvalues(apply_bath_renormalization(h, ops, baths));
        const double mu = renormalization_strength(baths.right);
        for (Eigen::Index i = 0; i < ev0.size(); ++i) CHECK(ev1(i) - ev0(i) == doctest::Approx(mu).epsilon(1e-10));
    }
    SUBCASE("left bath term shifts the oscillator")
    {
        const auto ev1 = eigenvalues(apply_bath_renormalization(h, ops, make_baths(1e-2, 0.3, 0.2)));
        CHECK(ev1(1) - ev1(0) != doctest::Approx(eigenvalues(h)(1) - eigenvalues(h)(0)));
    }
}

TEST_CASE("diagonalize: ordering, symmetry and phase convention")
{
    JunctionParams p;
    p.delta = 0.7;
    p.epsilon = 0.2;
    p.g = 0.3;
    const std::size_t n_fock = 20;
    const auto h = build_rabi_hamiltonian(p, n_fock);
    const auto es = diagonalize(h, build_coupling_operators(n_fock), {n_fock, 6});
    REQUIRE(es.size() == 6);
    for (std::size_t i = 1; i < es.size(); ++i) CHECK(es.omega(i) >= es.omega(i - 1));
    CHECK((es.q_left - es.q_left.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((es.q_right - es.q_right.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(es.bohr(3, 1) == doctest::Approx(es.omega(3) - es.omega(1)));

    // identical inputs give identical signs
    const auto again = diagonalize(h, build_coupling_operators(n_fock), {n_fock, 6});
    CHECK((es.q_left - again.q_left).norm() == 0.0);
}

TEST_CASE("degenerate cluster is resolved by sigma_z")
{
    // Delta = 0, g = 0: every oscillator level is doubly degenerate
    JunctionParams p;
    p.delta = 0.0;
    p.g = 0.0;
    const auto es = solve_junction(p, {6, 4});
    for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(es.q_right(n, n)) == doctest::Approx(1.0));
    CHECK(std::abs(es.q_right(0, 1)) < 1e-12);
}

TEST_CASE("parity: diagonal coupling elements vanish at zero bias")
{
    for (double g : {0.01, 0.2, 0.5}) {
        JunctionParams p;
        p.delta = 0.7;
        p.g = g;
        const auto es = solve_junction(p, {25, 6});
        CHECK(es.q_left.diagonal().cwiseAbs().maxCoeff() < 1e-10);
        CHECK(es.q_right.diagonal().cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("spectrum is even in the bias")
{
    for (double eps : {0.1, 0.6, 1.7}) {
        JunctionParams p;
        p.delta = 0.8;
        p.g = 0.3;
        p.epsilon = eps;
        const auto a = eigenvalues(build_rabi_hamiltonian(p, 20));
        p.epsilon = -eps;
        const auto b = eigenvalues(build_rabi_hamiltonian(p, 20));
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("ground energy decreases with the Fock cutoff")
{
    JunctionParams p;
    p.delta = 0.7;
    p.g = 0.5;
    double prev = eigenvalues(build_rabi_hamiltonian(p, 2))(0);
    for (std::size_t n = 3; n <= 30; ++n) {
        const double e0 = eigenvalues(build_rabi_hamiltonian(p, n))(0);
        CHECK(e0 <= prev + 1e-14);
        prev = e0;
    }
}

TEST_CASE("coupling elements approach the RWA values at resonance")
{
    // counter-rotating admixture of |e,1> into the ground state enters at first order in g
    for (double g : {0.005, 0.01, 0.02, 0.05}) {
        JunctionParams p;
        p.delta = 1.0;
        p.g = g;
        const auto es = solve_junction(p, {20, 5});
        CHECK(std::abs(std::abs(es.q_left(0, 1)) - 1.0 / std::sqrt(2.0)) < g);
        CHECK(std::abs(std::abs(es.q_right(0, 1)) - 1.0 / std::sqrt(2.0)) < g);
    }
}

TEST_CASE("truncation convergence check")
{
    auto ground_gap = [](JunctionParams p) {
        return [p](const TruncationConfig& t) {
            const auto es = solve_junction(p, t);
            return es.omega(1) - es.omega(0);
        };
    };
    JunctionParams free;
    free.delta = 0.7;
    free.g = 0.0;
    CHECK(check_truncation_convergence({4, 4}, ground_gap(free)));
    CHECK(check_truncation_convergence({3, 3}, ground_gap(free)));

    JunctionParams strong;
    strong.delta = 0.7;
    strong.g = 0.5;
    CHECK_FALSE(check_truncation_convergence({5, 5}, ground_gap(strong)));
    CHECK(check_truncation_convergence({20, 5}, ground_gap(strong)));

    JunctionParams weak;
    weak.delta = 0.7;
    weak.g = 0.01;
    CHECK(check_truncation_convergence({6, 5}, ground_gap(weak)));
}

TEST_CASE("invalid inputs are rejected")
{
    JunctionParams p;
    p.delta = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(TruncationConfig({3, 4}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(TruncationConfig({3, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(build_rabi_hamiltonian(JunctionParams{}, 1), std::invalid_argument);
}
