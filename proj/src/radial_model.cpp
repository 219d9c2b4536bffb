#include "qdot/radial_model.hpp"

#include "qdot/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fmt/format.h>

namespace qdot {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::ranges::transform(out, out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

} // namespace

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
    case PotentialKind::Coulomb:
        return "coulomb";
    case PotentialKind::Log:
        return "log";
    case PotentialKind::None:
        return "none";
    }
    return "unknown";
}

std::optional<PotentialKind> parse_potential(std::string_view name) {
    const auto s = lowercase(name);
    if (s == "coulomb") {
        return PotentialKind::Coulomb;
    }
    if (s == "log") {
        return PotentialKind::Log;
    }
    if (s == "none") {
        return PotentialKind::None;
    }
    return std::nullopt;
}

std::string_view to_string(InnerBoundary inner) {
    return inner == InnerBoundary::Regular ? "regular" : "cutoff";
}

std::optional<InnerBoundary> parse_inner_boundary(std::string_view name) {
    const auto s = lowercase(name);
    if (s == "regular") {
        return InnerBoundary::Regular;
    }
    if (s == "cutoff") {
        return InnerBoundary::Cutoff;
    }
    return std::nullopt;
}

double default_r_max(double omega) {
    if (!(omega > 0.0)) {
        throw ArgumentError(fmt::format("omega must be positive, got {}", omega));
    }
    return 40.0 / std::sqrt(omega);
}

RadialProblem RadialProblem::with_defaults(PotentialKind potential, double omega, int l) {
    RadialProblem p;
    p.potential = potential;
    p.omega = omega;
    p.l = l;
    p.r_max = default_r_max(omega);
    return p;
}

void RadialProblem::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw ArgumentError(fmt::format("omega must be positive and finite, got {}", omega));
    }
    if (l < 0) {
        throw ArgumentError(fmt::format("l must be >= 0, got {}", l));
    }
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
        throw ArgumentError(fmt::format("need 0 < r_min < r_max, got r_min={} r_max={}", r_min, r_max));
    }
    if (steps < 1000) {
        throw ArgumentError(fmt::format("steps must be >= 1000, got {}", steps));
    }
}

std::vector<double> RadialProblem::grid() const {
    std::vector<double> r(steps);
    const double h = step();
    for (std::size_t i = 0; i < steps; ++i) {
        r[i] = r_min + static_cast<double>(i) * h;
    }
    return r;
}

double interaction(PotentialKind potential, double r) {
    switch (potential) {
    case PotentialKind::Coulomb:
        return 1.0 / r;
    case PotentialKind::Log:
        return std::log(r);
    case PotentialKind::None:
        return 0.0;
    }
    return 0.0;
}

double effective_potential(PotentialKind potential, double omega, int l, double r) {
    if (!(r > 0.0)) {
        throw DomainError(fmt::format("effective potential needs r > 0, got {}", r));
    }
    if (!(omega > 0.0)) {
        throw DomainError(fmt::format("effective potential needs omega > 0, got {}", omega));
    }
    if (l < 0) {
        throw DomainError(fmt::format("effective potential needs l >= 0, got {}", l));
    }
    const double centrifugal = (static_cast<double>(l) * l - 0.25) / (r * r);
    return interaction(potential, r) + omega * omega * r * r + centrifugal;
}

double simpson(std::span<const double> x, std::span<const double> f) {
    if (x.size() != f.size()) {
        throw ArgumentError("simpson: grid and values differ in length");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw ArgumentError("simpson: need at least 3 samples");
    }
    const std::size_t intervals = n - 1;
    const std::size_t paired = intervals - intervals % 2;

    double sum = 0.0;
    for (std::size_t i = 0; i + 2 <= paired; i += 2) {
        const double h0 = x[i + 1] - x[i];
        const double h1 = x[i + 2] - x[i + 1];
        const double hs = h0 + h1;
        sum += hs / 6.0 *
               ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] + (2.0 - h0 / h1) * f[i + 2]);
    }
    if (intervals % 2 == 1) {
        // last interval [x_{n-2}, x_{n-1}] from the parabola through the final three points
        const double h0 = x[n - 2] - x[n - 3];
        const double h1 = x[n - 1] - x[n - 2];
        const double a = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
        const double b = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
        const double c = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
        sum += a * f[n - 1] + b * f[n - 2] - c * f[n - 3];
    }
    return sum;
}

int count_sign_changes(std::span<const double> values) {
    int changes = 0;
    double last = 0.0;
    for (double v : values) {
        if (v == 0.0) {
            continue;
        }
        if (last != 0.0 && (v > 0.0) != (last > 0.0)) {
            ++changes;
        }
        last = v;
    }
    return changes;
}

} // namespace qdot
