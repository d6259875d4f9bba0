#ifndef RABIHEAT_TESTS_SUPPORT_HPP
#define RABIHEAT_TESTS_SUPPORT_HPP

#include "rabiheat/transport.hpp"

#include <algorithm>
#include <cmath>

namespace rabiheat::testing
{

inline BathPair make_baths(double alpha, double t_left, double t_right, double omega_c = 5.0)
{
    BathPair b;
    b.left = {BathSide::left, alpha, t_left, omega_c};
    b.right = {BathSide::right, alpha, t_right, omega_c};
    return b;
}

inline ModelConfig make_model(double delta, double g, double alpha = 1e-3, double epsilon = 0.0)
{
    ModelConfig m;
    m.junction.delta = delta;
    m.junction.epsilon = epsilon;
    m.junction.g = g;
    m.baths = make_baths(alpha, 0.25, 0.25);
    return m;
}

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace rabiheat::testing

#endif
