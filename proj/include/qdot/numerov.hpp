#pragma once

// Numerov shooting for u'' = -g(r) u with g = eta - V_eff(r) on a uniform grid:
//
//     u_{i+1} = [2(1 - 5h^2 g_i/12) u_i - (1 + h^2 g_{i-1}/12) u_{i-1}] / (1 + h^2 g_{i+1}/12)
//
// Eigenvalues are bracketed by the node count of the full outward sweep
// (a discrete Sturm count, monotone in eta while 1 + h^2 g/12 > 0), then polished
// on the log-derivative mismatch of outward and inward sweeps joined at the
// outermost classical turning point.

#include "qdot/radial_model.hpp"

#include <cstddef>
#include <vector>

namespace qdot::numerov {

struct ShotResult {
    int nodes = 0;          ///< sign changes of the outward sweep on the whole grid
    double mismatch = 0.0;  ///< h * (u'/u)_out - h * (u'/u)_in at the join
    std::vector<double> samples; ///< outward solution up to the join, scaled inward beyond
    std::size_t join = 0;   ///< grid index of the join
    int rescales = 0;       ///< overflow renormalizations during the sweeps
};

struct SpectrumRequest {
    RadialProblem problem;
    double eta_min = 0.0;
    double eta_max = 1.0;
    int max_states = 64;
    double tol = default_tol;

    void validate() const;
};

/// Negative-energy states together with the cutoff they were computed with.
struct BoundSpectrum {
    double r_min = 0.0;
    double eta_floor = 0.0; ///< floor actually searched (clamped to the grid's stable range)
    std::vector<NumericalEigenstate> states;
};

/// Precomputed grid and potential for one RadialProblem; every member is const and
/// safe to share across threads.
class Shooter {
  public:
    explicit Shooter(RadialProblem problem);

    const RadialProblem& problem() const { return problem_; }
    const std::vector<double>& grid() const { return r_; }

    /// Index of the first point advanced by the Numerov recursion.
    std::size_t first_numerov_index() const { return start_ + 1; }

    /// Node count of the outward sweep over the full grid (number of discrete
    /// eigenvalues below eta).
    int count_nodes(double eta) const;

    ShotResult shoot(double eta) const;

    /// Lowest eta for which 1 + h^2 g_i / 12 >= 1/2 on every Numerov point.
    double stable_eta_floor() const;

  private:
    struct Seed {
        std::vector<double> values; // u_0 .. u_{start+1}
        int nodes = 0;
        int rescales = 0;
    };

    Seed seed(double eta) const;

    RadialProblem problem_;
    std::vector<double> r_;
    std::vector<double> v_;
    double h_ = 0.0;
    double c_ = 0.0; // h^2 / 12
    std::size_t start_ = 0;
};

/// One shot at trial energy eta.
ShotResult integrate(const RadialProblem& problem, double eta);

/// Eigenvalues in [eta_min, eta_max], ascending, at most max_states.
/// An empty range yields an empty list. Throws NumericalError when the grid
/// is too coarse for the requested window.
std::vector<NumericalEigenstate> find_eigenvalues(const SpectrumRequest& request);

/// Negative-eta states of an l = 0 problem in [eta_floor, 0). Throws DomainError
/// for l >= 1 and ArgumentError for eta_floor >= 0.
BoundSpectrum bound_states(const RadialProblem& problem, double eta_floor, double tol = default_tol);

/// Scales to Simpson integral of u^2 equal to 1 and makes u positive at the first
/// interior point. Throws ArgumentError for fewer than 3 samples or u == 0.
RadialWaveFunction normalize(RadialWaveFunction wave);

} // namespace qdot::numerov
