#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace timepar {

/** A scheme stage produced a non-finite component. */
class blowup_error : public std::runtime_error {
public:
    blowup_error(std::size_t step, std::size_t stage, const std::string& what_arg)
        : std::runtime_error(what_arg), step_(step), stage_(stage) {}

    /// Global fine-step index at which the failure occurred.
    std::size_t step() const noexcept { return step_; }
    /// Stage index within the failing step, in execution order.
    std::size_t stage() const noexcept { return stage_; }

private:
    std::size_t step_;
    std::size_t stage_;
};

/** Invalid or inconsistent configuration (bad scheme name, bad sizes, ...). */
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/** Two trajectories do not live on the same time grid. */
class grid_mismatch_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/** Analytical performance model evaluated outside its validity domain. */
class model_domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/** Least-squares fit requested on degenerate input (fewer than two
    distinct abscissae). */
class degenerate_fit_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/** A windowed run exceeded its iteration cap before the frontier
    reached the end of the integration span. */
class nonconvergence_error : public std::runtime_error {
public:
    nonconvergence_error(std::size_t iterations, std::size_t frontier,
                         const std::string& what_arg)
        : std::runtime_error(what_arg), iterations_(iterations), frontier_(frontier) {}

    std::size_t iterations() const noexcept { return iterations_; }
    std::size_t frontier() const noexcept { return frontier_; }

private:
    std::size_t iterations_;
    std::size_t frontier_;
};

}  // namespace timepar
