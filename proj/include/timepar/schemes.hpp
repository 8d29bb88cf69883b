#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace timepar {

enum class SchemeFamily { saba, sbab };

/**
 * Explicit symmetric splitting scheme for H = H_int + eps * H_pert:
 * alternating free drifts (coefficients c_i, fractions of the step) and
 * perturbation kicks (coefficients d_i).
 *
 * saba(n): drift c_1, kick d_1, ..., kick d_n, drift c_{n+1}
 * sbab(n): kick d_1, drift c_1, ..., drift c_n, kick d_{n+1}
 *
 * Both families are palindromic and accurate to O(tau^{2n} eps + tau^2 eps^2),
 * which makes them effectively high-order when eps is small.
 */
struct SchemeSpec {
    std::string name;
    SchemeFamily family = SchemeFamily::sbab;
    std::vector<double> drift_coeffs;  // c_i
    std::vector<double> kick_coeffs;   // d_i

    std::size_t kicks_per_step() const noexcept { return kick_coeffs.size(); }
    std::size_t drifts_per_step() const noexcept { return drift_coeffs.size(); }
    std::size_t stages_per_step() const noexcept {
        return kick_coeffs.size() + drift_coeffs.size();
    }
};

/**
 * Builds a scheme by quadrature order n.  kind is "saba", "sbab" or
 * "leapfrog" (the latter is sbab(1) under its usual name and ignores n).
 * Throws config_error for anything else or for n outside [1, 32].
 */
SchemeSpec make_scheme(const std::string& kind, unsigned n);

/// Parses compact names such as "leapfrog", "saba2", "sbab4".
SchemeSpec parse_scheme(const std::string& text);

}  // namespace timepar
