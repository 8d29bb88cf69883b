#include "timepar/stepper.hpp"

#include "timepar/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace timepar {

SchemeStepper::SchemeStepper(const SplitProblem& prob, const SchemeSpec& scheme, double dt)
    : prob_(prob), scheme_(scheme), dt_(dt) {
    if (!std::isfinite(dt) || dt == 0.0)
        throw config_error("stepper requires a finite nonzero dt");
    if (scheme_.kick_coeffs.empty() || scheme_.drift_coeffs.empty())
        throw config_error("stepper requires a scheme with at least one kick and drift");
    const std::size_t nk = scheme_.kick_coeffs.size();
    const std::size_t nd = scheme_.drift_coeffs.size();
    const bool shape_ok = (scheme_.family == SchemeFamily::sbab) ? (nk == nd + 1)
                                                                 : (nd == nk + 1);
    if (!shape_ok)
        throw config_error("scheme stage counts do not alternate");
}

void SchemeStepper::step(State& y, std::size_t step_index) {
    run(y, KickMode::fresh, nullptr, nullptr, nullptr, step_index);
}

void SchemeStepper::step_recorded(State& y, StageTap& taps, std::size_t step_index) {
    if (taps.dof != y.dof())
        throw config_error("stage tap dimension does not match the state");
    run(y, KickMode::record, &taps, nullptr, nullptr, step_index);
}

void SchemeStepper::step_replay(State& y, const StageTap& taps, std::size_t& kick_cursor,
                                std::size_t step_index) {
    if (taps.dof != y.dof())
        throw config_error("stage tap dimension does not match the state");
    run(y, KickMode::replay, nullptr, &taps, &kick_cursor, step_index);
}

void SchemeStepper::step_drift_only(State& y, std::size_t step_index) {
    run(y, KickMode::skip, nullptr, nullptr, nullptr, step_index);
}

void SchemeStepper::run(State& y, KickMode mode, StageTap* record, const StageTap* replay,
                        std::size_t* kick_cursor, std::size_t step_index) {
    const std::size_t r = y.dof();
    const bool kick_first = scheme_.family == SchemeFamily::sbab;
    const std::size_t stages = scheme_.stages_per_step();
    std::size_t ik = 0;
    std::size_t id = 0;
    for (std::size_t s = 0; s < stages; ++s) {
        const bool is_kick = ((s % 2) == 0) == kick_first;
        if (is_kick) {
            switch (mode) {
                case KickMode::fresh:
                case KickMode::record: {
                    eval_perturbation(prob_, y.t, y, pv_);
                    const double w = scheme_.kick_coeffs[ik] * dt_;
                    for (std::size_t l = 0; l < r; ++l) {
                        const double inc = w * pv_.force_p[l];
                        if (mode == KickMode::record) record->force_p.push_back(inc);
                        y.p[l] += inc;
                    }
                    for (std::size_t l = 0; l < r; ++l) {
                        const double inc = w * pv_.drift_q[l];
                        if (mode == KickMode::record) record->drift_q.push_back(inc);
                        y.q[l] += inc;
                    }
                    break;
                }
                case KickMode::replay: {
                    const std::size_t base = *kick_cursor * r;
                    if (base + r > replay->force_p.size() || base + r > replay->drift_q.size())
                        throw std::logic_error("stage tap replay ran past the recording");
                    for (std::size_t l = 0; l < r; ++l) y.p[l] += replay->force_p[base + l];
                    for (std::size_t l = 0; l < r; ++l) y.q[l] += replay->drift_q[base + l];
                    ++*kick_cursor;
                    break;
                }
                case KickMode::skip:
                    break;
            }
            ++ik;
        } else {
            eval_integrable_drift(prob_, y.p, vel_);
            const double w = scheme_.drift_coeffs[id] * dt_;
            for (std::size_t l = 0; l < r; ++l) {
                const double inc = w * vel_[l];
                y.q[l] += inc;
            }
            ++id;
        }
        for (std::size_t l = 0; l < r; ++l) {
            if (!std::isfinite(y.p[l]) || !std::isfinite(y.q[l]))
                throw blowup_error(step_index, s,
                                   "non-finite state at step " + std::to_string(step_index) +
                                       ", stage " + std::to_string(s));
        }
    }
    y.t += dt_;
}

State fine_step(const SplitProblem& prob, const SchemeSpec& scheme, const State& y,
                double dt) {
    SchemeStepper stepper(prob, scheme, dt);
    State out = y;
    stepper.step(out);
    return out;
}

State fine_step_recorded(const SplitProblem& prob, const SchemeSpec& scheme, const State& y,
                         double dt, StageTap& taps) {
    SchemeStepper stepper(prob, scheme, dt);
    State out = y;
    stepper.step_recorded(out, taps);
    return out;
}

State fine_step_replay(const SplitProblem& prob, const SchemeSpec& scheme, const State& y,
                       double dt, const StageTap& taps, std::size_t& kick_cursor) {
    SchemeStepper stepper(prob, scheme, dt);
    State out = y;
    stepper.step_replay(out, taps, kick_cursor);
    return out;
}

State fine_step_drift_only(const SplitProblem& prob, const SchemeSpec& scheme,
                           const State& y, double dt) {
    SchemeStepper stepper(prob, scheme, dt);
    State out = y;
    stepper.step_drift_only(out);
    return out;
}

Trajectory integrate_sequential(const SplitProblem& prob, const SchemeSpec& scheme,
                                const State& y0, double dt, std::size_t steps,
                                std::size_t sample_every) {
    if (y0.dof() == 0 || y0.p.size() != y0.q.size())
        throw config_error("initial state must have matching p and q dimensions");
    if (!all_finite(y0))
        throw config_error("initial state must be finite");
    if (sample_every == 0)
        throw config_error("sample_every must be positive");

    SchemeStepper stepper(prob, scheme, dt);
    Trajectory traj;
    traj.t0 = y0.t;
    traj.dt = dt;
    traj.sample_every = sample_every;
    traj.states.reserve(steps / sample_every + 2);

    State y = y0;
    traj.states.push_back(y);
    traj.energies.push_back(energy(prob, y));
    for (std::size_t i = 0; i < steps; ++i) {
        stepper.step(y, i);
        if ((i + 1) % sample_every == 0 || i + 1 == steps) {
            traj.states.push_back(y);
            traj.energies.push_back(energy(prob, y));
        }
    }
    return traj;
}

}  // namespace timepar
