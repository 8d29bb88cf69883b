#pragma once

#include "timepar/state.hpp"

#include <string>
#include <vector>

namespace timepar {

enum class ProblemKind { pendulum, spin_orbit };

/**
 * Almost-integrable separable Hamiltonian H = H_int(p) + eps * H_pert(q),
 * split so that the integrable part is exactly solvable and the small
 * parameter is folded into the perturbing evaluator.
 *
 * pendulum:    H = p^2/2 - eps*cos(q)
 * spin_orbit:  H = p^2/2 - eps*cos(2q) - alpha*(cos(2q + phi) - 7*cos(2q - phi))
 *
 * Both have H_int = p^2/2, so the integrable flow is free drift and the
 * perturbing field has no dq/dt component.
 */
struct SplitProblem {
    ProblemKind kind = ProblemKind::pendulum;
    double epsilon = 0.0;
    double alpha = 0.0;  // secondary amplitude, spin_orbit only
    double phi = 0.0;    // phase offset, spin_orbit only
    std::size_t dof = 1;

    static SplitProblem pendulum(double epsilon);
    static SplitProblem spin_orbit(double epsilon, double alpha, double phi);
};

/// Human-readable problem name ("pendulum", "spin-orbit").
std::string problem_name(const SplitProblem& prob);

/// dq/dt induced by the integrable part; identity in p for the built-ins.
void eval_integrable_drift(const SplitProblem& prob, const std::vector<double>& p,
                           std::vector<double>& velocity);
std::vector<double> eval_integrable_drift(const SplitProblem& prob,
                                          const std::vector<double>& p);

/// Perturbing vector field at (t, y), small parameter included.
void eval_perturbation(const SplitProblem& prob, double t, const State& y,
                       PerturbationValue& out);
PerturbationValue eval_perturbation(const SplitProblem& prob, double t, const State& y);

/// Total energy H(p, q).
double energy(const SplitProblem& prob, const State& y);

}  // namespace timepar
