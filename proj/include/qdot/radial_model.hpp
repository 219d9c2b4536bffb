#pragma once

// Domain types for the relative-motion radial problem of the planar
// two-electron quantum dot,
//
//     u''(r) + [eta - v(r) - omega^2 r^2 - (l^2 - 1/4) / r^2] u(r) = 0,
//
// in Hartree atomic units. omega is half the confinement frequency
// (Omega = 2 omega) and eta is the relative-motion energy.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdot {

/// Interaction term v(r) entering the effective potential.
enum class PotentialKind {
    Coulomb, ///< v = 1/r
    Log,     ///< v = ln r, unit prefactor, no additive constant
    None,    ///< non-interacting electrons
};

std::string_view to_string(PotentialKind kind);
/// Accepts "coulomb", "log", "none" (case-insensitive).
std::optional<PotentialKind> parse_potential(std::string_view name);

/// How the outward sweep is started at small r.
enum class InnerBoundary {
    /// Seeded from the regular solution u ~ r^{l+1/2}, integrated accurately
    /// through the singular region. r_min only sets where sampling starts.
    Regular,
    /// u(r_min) = r_min^{l+1/2}, u(r_min + h) = (r_min + h)^{l+1/2} and Numerov
    /// from the first grid point. For l = 0 the unresolved -1/(4r^2) region acts
    /// as a regulator and produces r_min-dependent negative-energy states.
    Cutoff,
};

std::string_view to_string(InnerBoundary inner);
std::optional<InnerBoundary> parse_inner_boundary(std::string_view name);

struct QuantumNumbers {
    int l = 0;
    int n = 1; ///< polynomial degree, analytic context only
};

inline constexpr double default_r_min = 1e-3;
inline constexpr std::size_t default_steps = 20000;
inline constexpr double default_tol = 1e-6;
/// Reference ground-state energy of three-dimensional hydrogen (Ha).
inline constexpr double hydrogen_ground_energy = -0.5;

/// r_max default: 40 oscillator lengths.
double default_r_max(double omega);

/// One eigenproblem on a uniform grid r_i = r_min + i h, i = 0 .. steps-1.
struct RadialProblem {
    PotentialKind potential = PotentialKind::Coulomb;
    double omega = 0.01;
    int l = 0;
    double r_min = default_r_min;
    double r_max = 400.0;
    std::size_t steps = default_steps;
    InnerBoundary inner = InnerBoundary::Regular;

    /// Problem with the default grid for this omega.
    static RadialProblem with_defaults(PotentialKind potential, double omega, int l);

    /// Throws ArgumentError unless 0 < r_min < r_max, steps >= 1000, omega > 0, l >= 0.
    void validate() const;
    double step() const { return (r_max - r_min) / static_cast<double>(steps - 1); }
    double radius(std::size_t i) const { return r_min + static_cast<double>(i) * step(); }
    std::vector<double> grid() const;
};

/// Sampled radial function u(r_i).
struct RadialWaveFunction {
    std::vector<double> grid;
    std::vector<double> values;
};

struct NumericalEigenstate {
    double eta = 0.0;
    int nodes = 0;
    RadialWaveFunction wave;
};

/// V_eff(r) = v(r) + omega^2 r^2 + (l^2 - 1/4) / r^2. Throws DomainError for r <= 0,
/// omega <= 0 or l < 0.
double effective_potential(PotentialKind potential, double omega, int l, double r);

/// The interaction term v(r) alone.
double interaction(PotentialKind potential, double r);

/// Composite Simpson rule on an arbitrary strictly increasing grid (irregular
/// spacing handled pairwise, an odd interval count closed with a three-point
/// end correction). Needs at least 3 points.
double simpson(std::span<const double> x, std::span<const double> f);

/// Interior sign changes of a sampled function; exact zeros are skipped.
int count_sign_changes(std::span<const double> values);

} // namespace qdot
