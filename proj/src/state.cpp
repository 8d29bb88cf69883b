#include "timepar/state.hpp"

#include "timepar/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>

namespace timepar {

State make_state(std::vector<double> p, std::vector<double> q, double t) {
    if (p.size() != q.size())
        throw config_error("state requires p and q of equal dimension");
    if (p.empty())
        throw config_error("state requires at least one degree of freedom");
    State y;
    y.p = std::move(p);
    y.q = std::move(q);
    y.t = t;
    return y;
}

void PerturbationValue::assign_zero(std::size_t r) {
    force_p.assign(r, 0.0);
    drift_q.assign(r, 0.0);
}

bool all_finite(const State& y) {
    for (double v : y.p)
        if (!std::isfinite(v)) return false;
    for (double v : y.q)
        if (!std::isfinite(v)) return false;
    return true;
}

double state_distance(const State& a, const State& b) {
    if (a.dof() != b.dof())
        throw config_error("state distance requires equal dimensions");
    double acc = 0.0;
    for (std::size_t l = 0; l < a.p.size(); ++l) {
        const double dp = a.p[l] - b.p[l];
        acc += dp * dp;
    }
    for (std::size_t l = 0; l < a.q.size(); ++l) {
        const double dq = a.q[l] - b.q[l];
        acc += dq * dq;
    }
    return std::sqrt(acc);
}

namespace {
inline bool bits_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}
}  // namespace

bool same_bits(const State& a, const State& b) {
    if (a.dof() != b.dof()) return false;
    for (std::size_t l = 0; l < a.p.size(); ++l)
        if (!bits_equal(a.p[l], b.p[l])) return false;
    for (std::size_t l = 0; l < a.q.size(); ++l)
        if (!bits_equal(a.q[l], b.q[l])) return false;
    return true;
}

}  // namespace timepar
