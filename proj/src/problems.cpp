#include "timepar/problems.hpp"

#include "timepar/errors.hpp"

#include <cmath>

namespace timepar {

SplitProblem SplitProblem::pendulum(double epsilon) {
    if (!std::isfinite(epsilon))
        throw config_error("pendulum: epsilon must be finite");
    SplitProblem prob;
    prob.kind = ProblemKind::pendulum;
    prob.epsilon = epsilon;
    return prob;
}

SplitProblem SplitProblem::spin_orbit(double epsilon, double alpha, double phi) {
    if (!std::isfinite(epsilon) || !std::isfinite(alpha) || !std::isfinite(phi))
        throw config_error("spin-orbit: parameters must be finite");
    SplitProblem prob;
    prob.kind = ProblemKind::spin_orbit;
    prob.epsilon = epsilon;
    prob.alpha = alpha;
    prob.phi = phi;
    return prob;
}

std::string problem_name(const SplitProblem& prob) {
    switch (prob.kind) {
        case ProblemKind::pendulum: return "pendulum";
        case ProblemKind::spin_orbit: return "spin-orbit";
    }
    return "unknown";
}

void eval_integrable_drift(const SplitProblem&, const std::vector<double>& p,
                           std::vector<double>& velocity) {
    velocity.assign(p.begin(), p.end());
}

std::vector<double> eval_integrable_drift(const SplitProblem& prob,
                                          const std::vector<double>& p) {
    std::vector<double> velocity;
    eval_integrable_drift(prob, p, velocity);
    return velocity;
}

void eval_perturbation(const SplitProblem& prob, double /*t*/, const State& y,
                       PerturbationValue& out) {
    const std::size_t r = y.dof();
    out.force_p.resize(r);
    out.drift_q.assign(r, 0.0);
    switch (prob.kind) {
        case ProblemKind::pendulum:
            for (std::size_t l = 0; l < r; ++l)
                out.force_p[l] = -(prob.epsilon * std::sin(y.q[l]));
            break;
        case ProblemKind::spin_orbit:
            for (std::size_t l = 0; l < r; ++l) {
                const double q2 = 2.0 * y.q[l];
                out.force_p[l] = -(2.0 * prob.epsilon * std::sin(q2) +
                                   2.0 * prob.alpha * std::sin(q2 + prob.phi) -
                                   14.0 * prob.alpha * std::sin(q2 - prob.phi));
            }
            break;
    }
}

PerturbationValue eval_perturbation(const SplitProblem& prob, double t, const State& y) {
    PerturbationValue out;
    eval_perturbation(prob, t, y, out);
    return out;
}

double energy(const SplitProblem& prob, const State& y) {
    double h = 0.0;
    switch (prob.kind) {
        case ProblemKind::pendulum:
            for (std::size_t l = 0; l < y.dof(); ++l)
                h += 0.5 * y.p[l] * y.p[l] - prob.epsilon * std::cos(y.q[l]);
            break;
        case ProblemKind::spin_orbit:
            for (std::size_t l = 0; l < y.dof(); ++l) {
                const double q2 = 2.0 * y.q[l];
                h += 0.5 * y.p[l] * y.p[l] - prob.epsilon * std::cos(q2) -
                     prob.alpha * (std::cos(q2 + prob.phi) - 7.0 * std::cos(q2 - prob.phi));
            }
            break;
    }
    return h;
}

}  // namespace timepar
