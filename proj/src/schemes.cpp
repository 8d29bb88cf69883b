#include "timepar/schemes.hpp"

#include "timepar/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace timepar {

namespace {

// Legendre polynomial P_n and its derivative by the three-term recurrence.
// The derivative uses (x^2 - 1) P_n' = n (x P_n - P_{n-1}), valid for |x| < 1.
std::pair<double, double> legendre_eval(unsigned n, double x) {
    if (n == 0) return {1.0, 0.0};
    double pm1 = 1.0;
    double p = x;
    for (unsigned k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
        pm1 = p;
        p = pk;
    }
    const double dp = n * (x * p - pm1) / (x * x - 1.0);
    return {p, dp};
}

// Gauss-Legendre nodes (ascending, interior) and weights on [-1, 1].
void gauss_legendre(unsigned n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (unsigned i = 0; i < n; ++i) {
        double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 64; ++it) {
            const auto [p, dp] = legendre_eval(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0))
                break;
        }
        const auto [p, dp] = legendre_eval(n, x);
        (void)p;
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

// Gauss-Lobatto nodes and weights on [-1, 1], m >= 2 points.  Interior
// nodes are the roots of P'_{m-1}; endpoint nodes are exactly +-1.
void gauss_lobatto(unsigned m, std::vector<double>& nodes, std::vector<double>& weights) {
    const unsigned M = m - 1;
    nodes.resize(m);
    weights.resize(m);
    nodes.front() = -1.0;
    nodes.back() = 1.0;
    for (unsigned i = 1; i < M; ++i) {
        double x = -std::cos(std::numbers::pi * i / M);
        for (int it = 0; it < 64; ++it) {
            const auto [p, dp] = legendre_eval(M, x);
            // P''_M from the Legendre differential equation.
            const double d2p = (2.0 * x * dp - double(M) * (M + 1.0) * p) / (1.0 - x * x);
            const double dx = dp / d2p;
            x -= dx;
            if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0))
                break;
        }
        nodes[i] = x;
    }
    for (unsigned i = 0; i < m; ++i) {
        const auto [p, dp] = legendre_eval(M, nodes[i]);
        (void)dp;
        weights[i] = 2.0 / (double(m) * M * p * p);
    }
}

// Makes a coefficient list exactly palindromic by averaging mirror pairs.
void symmetrize(std::vector<double>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double avg = 0.5 * (v[i] + v[n - 1 - i]);
        v[i] = avg;
        v[n - 1 - i] = avg;
    }
}

SchemeSpec build_saba(unsigned n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    SchemeSpec s;
    s.name = "saba" + std::to_string(n);
    s.family = SchemeFamily::saba;
    s.kick_coeffs.resize(n);
    s.drift_coeffs.resize(n + 1);
    std::vector<double> u(n);
    for (unsigned i = 0; i < n; ++i) {
        u[i] = 0.5 * (1.0 + x[i]);
        s.kick_coeffs[i] = 0.5 * w[i];
    }
    s.drift_coeffs[0] = u[0];
    for (unsigned i = 1; i < n; ++i) s.drift_coeffs[i] = u[i] - u[i - 1];
    s.drift_coeffs[n] = 1.0 - u[n - 1];
    symmetrize(s.kick_coeffs);
    symmetrize(s.drift_coeffs);
    return s;
}

SchemeSpec build_sbab(unsigned n) {
    std::vector<double> x, w;
    gauss_lobatto(n + 1, x, w);
    SchemeSpec s;
    s.name = "sbab" + std::to_string(n);
    s.family = SchemeFamily::sbab;
    s.kick_coeffs.resize(n + 1);
    s.drift_coeffs.resize(n);
    std::vector<double> u(n + 1);
    for (unsigned i = 0; i <= n; ++i) {
        u[i] = 0.5 * (1.0 + x[i]);
        s.kick_coeffs[i] = 0.5 * w[i];
    }
    for (unsigned i = 0; i < n; ++i) s.drift_coeffs[i] = u[i + 1] - u[i];
    symmetrize(s.kick_coeffs);
    symmetrize(s.drift_coeffs);
    return s;
}

}  // namespace

SchemeSpec make_scheme(const std::string& kind, unsigned n) {
    if (kind == "leapfrog") {
        SchemeSpec s = build_sbab(1);
        s.name = "leapfrog";
        return s;
    }
    if (n < 1 || n > 32)
        throw config_error("unsupported scheme order " + std::to_string(n) +
                           " (expected 1..32)");
    if (kind == "saba") return build_saba(n);
    if (kind == "sbab") return build_sbab(n);
    throw config_error("unsupported scheme '" + kind + "'");
}

SchemeSpec parse_scheme(const std::string& text) {
    std::string name(text.size(), '\0');
    std::transform(text.begin(), text.end(), name.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (name == "leapfrog") return make_scheme("leapfrog", 1);
    for (const std::string& kind : {std::string("saba"), std::string("sbab")}) {
        if (name.rfind(kind, 0) != 0) continue;
        const std::string digits = name.substr(kind.size());
        if (digits.empty() ||
            !std::all_of(digits.begin(), digits.end(),
                         [](unsigned char c) { return std::isdigit(c); }))
            break;
        const unsigned long n = std::stoul(digits);
        if (n < 1 || n > 32)
            throw config_error("unsupported scheme '" + text + "'");
        return make_scheme(kind, unsigned(n));
    }
    throw config_error("unsupported scheme '" + text + "'");
}

}  // namespace timepar
