#include "qdot/numerov.hpp"

#include "qdot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <tuple>

namespace qdot::numerov {

namespace {

// The outward sweep is seeded from the regular solution out to this many steps.
constexpr double regular_seed_steps = 16.0;
constexpr std::size_t renormalize_every = 1000;
constexpr double overflow_guard = 1e150;
constexpr int scan_panels = 400;

// Tracks sign changes of a sampled sequence, skipping exact zeros.
class SignCounter {
  public:
    void push(double v) {
        if (v == 0.0) {
            return;
        }
        const int s = v > 0.0 ? 1 : -1;
        if (last_ != 0 && s != last_) {
            ++changes_;
        }
        last_ = s;
    }
    int changes() const { return changes_; }

  private:
    int last_ = 0;
    int changes_ = 0;
};

} // namespace

void SpectrumRequest::validate() const {
    problem.validate();
    if (!(eta_min < eta_max) || !std::isfinite(eta_min) || !std::isfinite(eta_max)) {
        throw ArgumentError(fmt::format("need eta_min < eta_max, got [{}, {}]", eta_min, eta_max));
    }
    if (max_states < 1) {
        throw ArgumentError(fmt::format("max_states must be >= 1, got {}", max_states));
    }
    if (!(tol > 0.0)) {
        throw ArgumentError(fmt::format("tol must be positive, got {}", tol));
    }
}

Shooter::Shooter(RadialProblem problem) : problem_(problem) {
    problem_.validate();
    r_ = problem_.grid();
    h_ = problem_.step();
    c_ = h_ * h_ / 12.0;
    v_.resize(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) {
        v_[i] = effective_potential(problem_.potential, problem_.omega, problem_.l, r_[i]);
    }
    if (problem_.inner == InnerBoundary::Regular) {
        const double reach = regular_seed_steps * h_;
        if (problem_.r_min < reach) {
            start_ = static_cast<std::size_t>(std::ceil((reach - problem_.r_min) / h_));
        }
        start_ = std::min(start_, r_.size() - 4);
    }
}

double Shooter::stable_eta_floor() const {
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = start_ + 1; i < v_.size(); ++i) {
        vmax = std::max(vmax, v_[i]);
    }
    return vmax - 0.5 / c_;
}

// Values u_0 .. u_{start+1}. The regular seed integrates phi = u / sqrt(r) in x = ln r,
//     phi'' = [l^2 + r^2 (v(r) + omega^2 r^2 - eta)] phi,
// whose regular solution behaves as exp(l x), with classical RK4.
Shooter::Seed Shooter::seed(double eta) const {
    Seed s;
    s.values.resize(start_ + 2);
    const double l = problem_.l;
    if (problem_.inner == InnerBoundary::Cutoff) {
        s.values[0] = std::pow(r_[0], l + 0.5);
        s.values[1] = std::pow(r_[1], l + 0.5);
        return s;
    }

    const auto kind = problem_.potential;
    const double w2 = problem_.omega * problem_.omega;
    auto curvature = [&](double x) {
        const double r = std::exp(x);
        return l * l + r * r * (interaction(kind, r) + w2 * r * r - eta);
    };

    const double reach = problem_.l == 0 ? 16.0 : std::min(16.0, 40.0 / l);
    double x = std::log(r_[0]) - reach;
    double phi = 1.0;
    double dphi = l;
    SignCounter signs;
    signs.push(phi);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double target = std::log(r_[i]);
        const double rt = r_[i];
        const double qmax =
            l * l + rt * rt * (std::abs(interaction(kind, rt)) + w2 * rt * rt + std::abs(eta)) + 1.0;
        const double span = target - x;
        const double max_dx = std::min(0.02, 0.1 / std::sqrt(qmax));
        const int n = std::max(1, static_cast<int>(std::ceil(span / max_dx)));
        const double dx = span / n;
        for (int k = 0; k < n; ++k) {
            const double k1p = dphi;
            const double k1d = curvature(x) * phi;
            const double k2p = dphi + 0.5 * dx * k1d;
            const double k2d = curvature(x + 0.5 * dx) * (phi + 0.5 * dx * k1p);
            const double k3p = dphi + 0.5 * dx * k2d;
            const double k3d = curvature(x + 0.5 * dx) * (phi + 0.5 * dx * k2p);
            const double k4p = dphi + dx * k3d;
            const double k4d = curvature(x + dx) * (phi + dx * k3p);
            phi += dx / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            dphi += dx / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            x += dx;
            signs.push(phi);
            if (std::abs(phi) > overflow_guard) {
                const double scale = 1.0 / std::abs(phi);
                phi *= scale;
                dphi *= scale;
                for (std::size_t j = 0; j < i; ++j) {
                    s.values[j] *= scale;
                }
                ++s.rescales;
            }
        }
        x = target;
        s.values[i] = std::sqrt(rt) * phi;
    }
    s.nodes = signs.changes();
    return s;
}

int Shooter::count_nodes(double eta) const {
    const Seed s = seed(eta);
    SignCounter signs;
    if (problem_.inner == InnerBoundary::Cutoff) {
        signs.push(s.values[0]);
    } else {
        // sign changes up to r_{start+1} were tracked by the seed
        for (int k = 0; k < s.nodes; ++k) {
            signs.push(k % 2 == 0 ? 1.0 : -1.0);
        }
        signs.push(s.nodes % 2 == 0 ? 1.0 : -1.0);
    }
    double u0 = s.values[start_];
    double u1 = s.values[start_ + 1];
    signs.push(u1);
    double g0 = eta - v_[start_];
    double g1 = eta - v_[start_ + 1];
    double running_max = 0.0;
    const std::size_t n = r_.size();
    for (std::size_t i = start_ + 1; i + 1 < n; ++i) {
        const double g2 = eta - v_[i + 1];
        const double u2 = (2.0 * (1.0 - 5.0 * c_ * g1) * u1 - (1.0 + c_ * g0) * u0) / (1.0 + c_ * g2);
        signs.push(u2);
        u0 = u1;
        u1 = u2;
        g0 = g1;
        g1 = g2;
        running_max = std::max(running_max, std::abs(u2));
        if ((i % renormalize_every == 0 && running_max > 0.0) || running_max > overflow_guard) {
            u0 /= running_max;
            u1 /= running_max;
            running_max = 0.0;
        }
    }
    return signs.changes();
}

ShotResult Shooter::shoot(double eta) const {
    const std::size_t n = r_.size();
    ShotResult result;

    std::size_t join = start_ + 2;
    for (std::size_t i = n - 3; i > start_ + 2; --i) {
        if (eta - v_[i] > 0.0) {
            join = i;
            break;
        }
    }
    result.join = join;

    // outward: indices 0 .. join+1
    Seed s = seed(eta);
    result.rescales += s.rescales;
    std::vector<double> out(join + 2, 0.0);
    std::copy(s.values.begin(), s.values.end(), out.begin());
    for (std::size_t i = start_ + 1; i <= join; ++i) {
        const double g0 = eta - v_[i - 1];
        const double g1 = eta - v_[i];
        const double g2 = eta - v_[i + 1];
        out[i + 1] = (2.0 * (1.0 - 5.0 * c_ * g1) * out[i] - (1.0 + c_ * g0) * out[i - 1]) / (1.0 + c_ * g2);
        if (std::abs(out[i + 1]) > overflow_guard) {
            const double scale = 1.0 / std::abs(out[i + 1]);
            for (std::size_t j = 0; j <= i + 1; ++j) {
                out[j] *= scale;
            }
            ++result.rescales;
        }
    }

    // inward: indices join-1 .. n-1, starting from u(r_max) = 0
    std::vector<double> in(n, 0.0);
    in[n - 1] = 0.0;
    in[n - 2] = 1.0;
    for (std::size_t i = n - 2; i >= join; --i) {
        const double g0 = eta - v_[i + 1];
        const double g1 = eta - v_[i];
        const double g2 = eta - v_[i - 1];
        in[i - 1] = (2.0 * (1.0 - 5.0 * c_ * g1) * in[i] - (1.0 + c_ * g0) * in[i + 1]) / (1.0 + c_ * g2);
        if (std::abs(in[i - 1]) > overflow_guard) {
            const double scale = 1.0 / std::abs(in[i - 1]);
            for (std::size_t j = i - 1; j < n; ++j) {
                in[j] *= scale;
            }
            ++result.rescales;
        }
    }

    if (out[join] != 0.0 && in[join] != 0.0) {
        result.mismatch = (out[join + 1] - out[join - 1]) / (2.0 * out[join]) -
                          (in[join + 1] - in[join - 1]) / (2.0 * in[join]);
    } else {
        result.mismatch = std::numeric_limits<double>::quiet_NaN();
    }

    result.samples.resize(n);
    std::copy(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(join) + 1, result.samples.begin());
    const double scale = in[join] != 0.0 ? out[join] / in[join] : 0.0;
    for (std::size_t i = join + 1; i < n; ++i) {
        result.samples[i] = in[i] * scale;
    }
    result.nodes = count_nodes(eta);
    return result;
}

ShotResult integrate(const RadialProblem& problem, double eta) {
    if (!std::isfinite(eta)) {
        throw ArgumentError("integrate: eta must be finite");
    }
    return Shooter(problem).shoot(eta);
}

namespace {

struct Bracket {
    double lo;
    double hi;
    int index; // node count of the state inside
};

void split(const Shooter& shooter, double lo, double hi, int n_lo, int n_hi,
           std::vector<Bracket>& out, int depth) {
    if (n_hi < n_lo) {
        throw NumericalError(fmt::format(
            "node count decreased from {} to {} between eta={} and eta={}; the grid is too coarse, "
            "reduce h by increasing steps",
            n_lo, n_hi, lo, hi));
    }
    if (n_hi == n_lo) {
        return;
    }
    if (n_hi - n_lo == 1) {
        out.push_back({lo, hi, n_lo});
        return;
    }
    if (depth > 80) {
        throw NumericalError(fmt::format("could not separate {} states in [{}, {}]", n_hi - n_lo, lo, hi));
    }
    const double mid = 0.5 * (lo + hi);
    const int n_mid = shooter.count_nodes(mid);
    split(shooter, lo, mid, n_lo, n_mid, out, depth + 1);
    split(shooter, mid, hi, n_mid, n_hi, out, depth + 1);
}

double refine(const Shooter& shooter, Bracket b, double tol) {
    double lo = b.lo;
    double hi = b.hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (shooter.count_nodes(mid) > b.index) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // Illinois false position on the mismatch inside the node bracket.
    double f_lo = shooter.shoot(lo).mismatch;
    double f_hi = shooter.shoot(hi).mismatch;
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || f_lo * f_hi > 0.0) {
        return 0.5 * (lo + hi);
    }
    int side = 0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 40 && hi - lo > 1e-4 * tol; ++it) {
        x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(x > lo && x < hi)) {
            x = 0.5 * (lo + hi);
        }
        const double fx = shooter.shoot(x).mismatch;
        if (!std::isfinite(fx) || fx == 0.0) {
            break;
        }
        if (fx * f_hi > 0.0) {
            hi = x;
            f_hi = fx;
            if (side == 1) {
                f_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            f_lo = fx;
            if (side == -1) {
                f_hi *= 0.5;
            }
            side = -1;
        }
    }
    return x;
}

std::vector<NumericalEigenstate> solve_window(const Shooter& shooter, double eta_min, double eta_max,
                                              int max_states, double tol) {
    const double floor = shooter.stable_eta_floor();
    if (eta_min < floor) {
        throw NumericalError(fmt::format(
            "eta_min={} is below the stable limit {} of this grid (h={}); reduce h by increasing steps",
            eta_min, floor, shooter.problem().step()));
    }

    std::vector<double> eta(scan_panels + 1);
    std::vector<int> nodes(scan_panels + 1);
    for (int k = 0; k <= scan_panels; ++k) {
        eta[k] = eta_min + (eta_max - eta_min) * k / scan_panels;
        nodes[k] = shooter.count_nodes(eta[k]);
    }
    std::vector<Bracket> brackets;
    for (int k = 0; k < scan_panels; ++k) {
        split(shooter, eta[k], eta[k + 1], nodes[k], nodes[k + 1], brackets, 0);
        if (static_cast<int>(brackets.size()) >= max_states) {
            break;
        }
    }

    std::vector<NumericalEigenstate> states;
    for (const auto& b : brackets) {
        if (static_cast<int>(states.size()) >= max_states) {
            break;
        }
        NumericalEigenstate state;
        state.eta = refine(shooter, b, tol);
        state.nodes = b.index;
        auto shot = shooter.shoot(state.eta);
        state.wave = normalize({shooter.grid(), std::move(shot.samples)});
        states.push_back(std::move(state));
    }
    return states;
}

} // namespace

std::vector<NumericalEigenstate> find_eigenvalues(const SpectrumRequest& request) {
    request.validate();
    const Shooter shooter(request.problem);
    return solve_window(shooter, request.eta_min, request.eta_max, request.max_states, request.tol);
}

BoundSpectrum bound_states(const RadialProblem& problem, double eta_floor, double tol) {
    problem.validate();
    if (problem.l >= 1) {
        throw DomainError(fmt::format(
            "bound states need l = 0; for l = {} the centrifugal term (l^2 - 1/4)/r^2 is repulsive and "
            "with the interaction keeps V_eff positive, so no eta < 0 exists",
            problem.l));
    }
    if (!(eta_floor < 0.0)) {
        throw ArgumentError(fmt::format("eta_floor must be negative, got {}", eta_floor));
    }
    if (!(tol > 0.0)) {
        throw ArgumentError(fmt::format("tol must be positive, got {}", tol));
    }
    const Shooter shooter(problem);
    BoundSpectrum result;
    result.r_min = problem.r_min;
    result.eta_floor = std::max(eta_floor, shooter.stable_eta_floor());
    if (!(result.eta_floor < 0.0)) {
        return result;
    }
    auto states = solve_window(shooter, result.eta_floor, 0.0, 64, tol);
    for (auto& s : states) {
        if (s.eta < 0.0) {
            result.states.push_back(std::move(s));
        }
    }
    return result;
}

RadialWaveFunction normalize(RadialWaveFunction wave) {
    if (wave.grid.size() != wave.values.size()) {
        throw ArgumentError("normalize: grid and values differ in length");
    }
    if (wave.values.size() < 3) {
        throw ArgumentError("normalize: need at least 3 samples");
    }
    std::vector<double> sq(wave.values.size());
    std::ranges::transform(wave.values, sq.begin(), [](double u) { return u * u; });
    const double norm2 = simpson(wave.grid, sq);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
        throw ArgumentError("normalize: function is identically zero or not finite");
    }
    double scale = 1.0 / std::sqrt(norm2);
    const auto first = std::find_if(wave.values.begin() + 1, wave.values.end(), [](double u) { return u != 0.0; });
    if (first != wave.values.end() && *first < 0.0) {
        scale = -scale;
    }
    for (double& u : wave.values) {
        u *= scale;
    }
    return wave;
}

} // namespace qdot::numerov
