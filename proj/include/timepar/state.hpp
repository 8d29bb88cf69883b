#pragma once

#include <cstddef>
#include <vector>

namespace timepar {

/**
 * Phase-space point of a separable Hamiltonian system: momenta p,
 * coordinates q (r degrees of freedom each) and the current time.
 */
struct State {
    std::vector<double> p;
    std::vector<double> q;
    double t = 0.0;

    std::size_t dof() const noexcept { return p.size(); }
};

State make_state(std::vector<double> p, std::vector<double> q, double t = 0.0);

/**
 * Value of the perturbing vector field at one phase-space point, with the
 * small parameter already folded in.  force_p feeds dp/dt, drift_q feeds
 * dq/dt.  Systems whose perturbing Hamiltonian depends only on coordinates
 * have drift_q identically zero, but the corrector treats both components
 * uniformly.
 */
struct PerturbationValue {
    std::vector<double> force_p;
    std::vector<double> drift_q;

    std::size_t dof() const noexcept { return force_p.size(); }
    void assign_zero(std::size_t r);
};

/// True iff every component of p and q is finite.
bool all_finite(const State& y);

/// Euclidean distance over the stacked (p, q) vector.  Ignores t.
double state_distance(const State& a, const State& b);

/// Exact bit-level equality of the (p, q) vectors.  Distinguishes +0.0
/// from -0.0 and never equates NaNs; time is not compared.
bool same_bits(const State& a, const State& b);

}  // namespace timepar
