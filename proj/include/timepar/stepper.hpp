#pragma once

#include "timepar/problems.hpp"
#include "timepar/schemes.hpp"
#include "timepar/state.hpp"

#include <cstddef>
#include <vector>

namespace timepar {

/**
 * Scaled perturbation increments recorded while integrating, one entry of
 * length dof per kick stage in execution order.  An entry holds the exact
 * double added to the state, (d_i * dt) * g, so replaying a tap reproduces
 * the recorded step bit for bit without re-evaluating the perturbation.
 */
struct StageTap {
    std::size_t dof = 0;
    std::vector<double> force_p;
    std::vector<double> drift_q;

    std::size_t kick_count() const noexcept { return dof ? force_p.size() / dof : 0; }

    void reset(std::size_t r) {
        dof = r;
        force_p.clear();
        drift_q.clear();
    }

    void reserve_kicks(std::size_t kicks) {
        force_p.reserve(kicks * dof);
        drift_q.reserve(kicks * dof);
    }
};

/**
 * Applies one composition step of a splitting scheme to a state in place.
 * Reusable across steps and slices; owns the evaluation scratch so the hot
 * loop allocates nothing.
 *
 * All four entry points execute the same stage sequence with identical
 * floating-point arithmetic for the stages they share.  In particular a
 * replayed step adds exactly the doubles a recorded step added, so the two
 * agree bitwise when started from bitwise-equal states.
 */
class SchemeStepper {
public:
    SchemeStepper(const SplitProblem& prob, const SchemeSpec& scheme, double dt);

    /// One step with fresh perturbation evaluations.
    void step(State& y, std::size_t step_index = 0);

    /// One fresh step that appends every kick increment to taps.
    void step_recorded(State& y, StageTap& taps, std::size_t step_index = 0);

    /// One step whose kick increments are read from taps at kick_cursor
    /// (advanced by the kicks consumed) instead of being re-evaluated.
    void step_replay(State& y, const StageTap& taps, std::size_t& kick_cursor,
                     std::size_t step_index = 0);

    /// One step of the integrable flow alone: drift stages only.  Agrees
    /// bitwise with step() on a problem whose perturbation vanishes.
    void step_drift_only(State& y, std::size_t step_index = 0);

    double dt() const noexcept { return dt_; }
    const SchemeSpec& scheme() const noexcept { return scheme_; }
    const SplitProblem& problem() const noexcept { return prob_; }

private:
    enum class KickMode { fresh, record, replay, skip };

    void run(State& y, KickMode mode, StageTap* record, const StageTap* replay,
             std::size_t* kick_cursor, std::size_t step_index);

    SplitProblem prob_;
    SchemeSpec scheme_;
    double dt_;
    PerturbationValue pv_;
    std::vector<double> vel_;
};

/// Single fine step, value-returning convenience wrappers.
State fine_step(const SplitProblem& prob, const SchemeSpec& scheme, const State& y,
                double dt);
State fine_step_recorded(const SplitProblem& prob, const SchemeSpec& scheme,
                         const State& y, double dt, StageTap& taps);
State fine_step_replay(const SplitProblem& prob, const SchemeSpec& scheme, const State& y,
                       double dt, const StageTap& taps, std::size_t& kick_cursor);
State fine_step_drift_only(const SplitProblem& prob, const SchemeSpec& scheme,
                           const State& y, double dt);

/**
 * Sampled output of an integration: states every sample_every fine steps
 * (the initial state always included, the final state always appended) and
 * the total energy at each sample.
 */
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t sample_every = 1;
    std::vector<State> states;
    std::vector<double> energies;
};

/**
 * Integrates steps fine steps of size dt sequentially.  Throws blowup_error
 * with the offending step and stage index if a non-finite value appears.
 */
Trajectory integrate_sequential(const SplitProblem& prob, const SchemeSpec& scheme,
                                const State& y0, double dt, std::size_t steps,
                                std::size_t sample_every = 1);

}  // namespace timepar
