#include "qdot/heun_analytic.hpp"

#include "qdot/errors.hpp"
#include "qdot/numerov.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace qdot::heun {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RationalPoly = std::vector<Rational>; // index = power

void check_nl(int n, int l) {
    if (n < 1) {
        throw ArgumentError(fmt::format("polynomial degree n must be >= 1, got {}", n));
    }
    if (l < 0) {
        throw ArgumentError(fmt::format("angular momentum l must be >= 0, got {}", l));
    }
    if (n > max_degree) {
        throw ArgumentError(
            fmt::format("exact recurrence is limited to n <= {}, got {}", max_degree, n));
    }
}

void trim(RationalPoly& p) {
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

Rational evaluate(const RationalPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

RationalPoly derivative(const RationalPoly& p) {
    RationalPoly d;
    for (std::size_t k = 1; k < p.size(); ++k) {
        d.push_back(p[k] * static_cast<long>(k));
    }
    trim(d);
    return d;
}

// Polynomial long division; returns {quotient, remainder}.
std::pair<RationalPoly, RationalPoly> divide(RationalPoly num, const RationalPoly& den) {
    RationalPoly quotient;
    if (num.size() >= den.size()) {
        quotient.assign(num.size() - den.size() + 1, Rational(0));
    }
    while (!num.empty() && num.size() >= den.size()) {
        const std::size_t shift = num.size() - den.size();
        const Rational factor = num.back() / den.back();
        quotient[shift] = factor;
        for (std::size_t k = 0; k < den.size(); ++k) {
            num[shift + k] -= factor * den[k];
        }
        num.pop_back();
        trim(num);
    }
    trim(quotient);
    return {quotient, num};
}

std::vector<RationalPoly> sturm_chain(const RationalPoly& p) {
    std::vector<RationalPoly> chain{p, derivative(p)};
    while (chain.back().size() > 1) {
        auto [q, r] = divide(chain[chain.size() - 2], chain.back());
        if (r.empty()) {
            break;
        }
        for (auto& c : r) {
            c = -c;
        }
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_variations(const std::vector<RationalPoly>& chain, const Rational& x) {
    int variations = 0;
    int last = 0;
    for (const auto& p : chain) {
        const Rational v = evaluate(p, x);
        const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) {
            continue;
        }
        if (last != 0 && s != last) {
            ++variations;
        }
        last = s;
    }
    return variations;
}

int sign_of(const RationalPoly& p, const Rational& x) {
    const Rational v = evaluate(p, x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

struct Interval {
    Rational lo;
    Rational hi;
};

// Isolates the distinct roots of p in (lo, hi] into intervals holding exactly one root each.
void isolate(const std::vector<RationalPoly>& chain, Interval iv, int v_lo, int v_hi,
             std::vector<Interval>& out, int depth) {
    const int count = v_lo - v_hi;
    if (count <= 0) {
        return;
    }
    if (count == 1) {
        out.push_back(iv);
        return;
    }
    if (depth > 400) {
        throw NumericalError(fmt::format("root isolation did not separate roots in ({}, {}]",
                                         static_cast<double>(iv.lo), static_cast<double>(iv.hi)));
    }
    const Rational mid = (iv.lo + iv.hi) / 2;
    const int v_mid = sign_variations(chain, mid);
    isolate(chain, {iv.lo, mid}, v_lo, v_mid, out, depth + 1);
    isolate(chain, {mid, iv.hi}, v_mid, v_hi, out, depth + 1);
}

} // namespace

int CoefficientPolynomial::degree() const {
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        if (coeffs[k] != 0) {
            return static_cast<int>(k);
        }
    }
    return 0;
}

long double CoefficientPolynomial::evaluate(long double t) const {
    long double acc = 0.0L;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * t + it->convert_to<long double>();
    }
    return acc;
}

std::vector<CoefficientPolynomial> recurrence_coefficients(int n, int l) {
    check_nl(n, l);
    const long alpha = 2L * l;
    std::vector<CoefficientPolynomial> a(static_cast<std::size_t>(n) + 2);
    a[0].coeffs = {BigInt(1)};
    a[1].coeffs = {BigInt(0), BigInt(1)};
    for (int p = 0; p + 2 <= n + 1; ++p) {
        const auto& next = a[p + 1].coeffs;
        const auto& prev = a[p].coeffs;
        const BigInt factor = BigInt(2L * n - 2L * p) * (p + 1) * (p + alpha + 1);
        std::vector<BigInt> c(next.size() + 1, BigInt(0));
        for (std::size_t k = 0; k < next.size(); ++k) {
            c[k + 1] += next[k];
        }
        for (std::size_t k = 0; k < prev.size(); ++k) {
            c[k] -= factor * prev[k];
        }
        a[p + 2].coeffs = std::move(c);
    }
    return a;
}

AdmissibleRoots admissible_roots(int n, int l, double tol) {
    check_nl(n, l);
    if (!(tol > 0.0)) {
        throw ArgumentError(fmt::format("root tolerance must be positive, got {}", tol));
    }
    const auto a = recurrence_coefficients(n, l);
    const auto& top = a.back().coeffs;

    AdmissibleRoots result;
    // A_{n+1}(t) = t^{parity} Q(t^2): keep the even part in s = t^2.
    const std::size_t parity = static_cast<std::size_t>((n + 1) % 2);
    RationalPoly q;
    for (std::size_t k = parity; k < top.size(); k += 2) {
        q.emplace_back(top[k]);
    }
    trim(q);
    result.asymptotic = parity == 1;
    while (!q.empty() && q.front() == 0) {
        q.erase(q.begin());
        result.asymptotic = true;
    }
    if (q.size() <= 1) {
        return result;
    }

    const auto chain = sturm_chain(q);
    // square-free part: roots of q / gcd(q, q') are the distinct roots of q, all simple
    RationalPoly simple = q;
    if (chain.back().size() > 1) {
        simple = divide(q, chain.back()).first;
    }

    Rational bound = 0;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        const Rational ratio = abs(q[k] / q.back());
        bound = std::max(bound, ratio);
    }
    bound += 1;

    std::vector<Interval> isolated;
    isolate(chain, {Rational(0), bound}, sign_variations(chain, Rational(0)),
            sign_variations(chain, bound), isolated, 0);

    for (auto iv : isolated) {
        int s_lo = sign_of(simple, iv.lo);
        int s_hi = sign_of(simple, iv.hi);
        double root = 0.0;
        bool exact = false;
        if (s_hi == 0) {
            root = std::sqrt(static_cast<double>(iv.hi));
            exact = true;
        }
        int iter = 0;
        constexpr int budget = 400;
        while (!exact) {
            const double t_lo = std::sqrt(static_cast<double>(iv.lo));
            const double t_hi = std::sqrt(static_cast<double>(iv.hi));
            if (t_hi - t_lo <= tol) {
                root = 0.5 * (t_lo + t_hi);
                break;
            }
            if (++iter > budget) {
                throw NumericalError(fmt::format(
                    "root refinement for n={} l={} did not converge in bracket t in [{}, {}]", n, l,
                    t_lo, t_hi));
            }
            const Rational mid = (iv.lo + iv.hi) / 2;
            const int s_mid = sign_of(simple, mid);
            if (s_mid == 0) {
                root = std::sqrt(static_cast<double>(mid));
                exact = true;
            } else if (s_mid == s_lo) {
                iv.lo = mid;
                s_lo = s_mid;
            } else {
                iv.hi = mid;
            }
        }
        if (root > 0.0) {
            result.roots.push_back(root);
        }
    }
    std::ranges::sort(result.roots);
    return result;
}

double quantized_energy(int n, int l, double omega) {
    return 2.0 * static_cast<double>(n + l + 1) * omega;
}

double HeunSolution::y(double r) const {
    double acc = 0.0;
    for (auto it = y_coeffs.rbegin(); it != y_coeffs.rend(); ++it) {
        acc = acc * r + *it;
    }
    return acc;
}

double HeunSolution::u(double r) const {
    return std::pow(r, l + 0.5) * std::exp(-gaussian_exponent() * r * r) * y(r);
}

HeunSolution solution_at_root(int n, int l, double t) {
    check_nl(n, l);
    if (!(t > 0.0)) {
        throw ArgumentError(fmt::format("admissible root must be positive, got {}", t));
    }
    const auto a = recurrence_coefficients(n, l);
    HeunSolution s;
    s.n = n;
    s.l = l;
    s.t = t;
    s.omega = 1.0 / (t * t);
    s.eta = quantized_energy(n, l, s.omega);
    s.alpha = 2.0 * l;
    s.gamma = s.eta / s.omega;

    // x = sqrt(omega) r = r / t, so the r^p coefficient is A_p(t) t^{-p} / ((1+alpha)_p p!)
    s.y_coeffs.resize(static_cast<std::size_t>(n) + 1);
    long double pochhammer_factorial = 1.0L;
    long double t_power = 1.0L;
    for (int p = 0; p <= n; ++p) {
        if (p > 0) {
            pochhammer_factorial *= static_cast<long double>(s.alpha + p) * p;
            t_power *= t;
        }
        s.y_coeffs[p] = static_cast<double>(a[p].evaluate(t) / (t_power * pochhammer_factorial));
    }
    return s;
}

HeunSolution build_solution(int n, int l, std::size_t root_index) {
    const auto roots = admissible_roots(n, l);
    if (root_index >= roots.roots.size()) {
        throw ArgumentError(fmt::format("root index {} out of range: n={} l={} has {} positive root(s)",
                                        root_index, n, l, roots.roots.size()));
    }
    return solution_at_root(n, l, roots.roots[root_index]);
}

RadialWaveFunction sample_u(const HeunSolution& solution, std::span<const double> grid) {
    RadialWaveFunction wave;
    wave.grid.assign(grid.begin(), grid.end());
    wave.values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw ArgumentError("sample_u: grid must be positive and strictly increasing");
        }
        wave.values.push_back(solution.u(grid[i]));
    }
    return numerov::normalize(std::move(wave));
}

std::vector<double> series_coefficients(double alpha, double shift, double delta_prime, int count) {
    if (count <= 0) {
        return {};
    }
    std::vector<double> c(static_cast<std::size_t>(count), 0.0);
    c[0] = 1.0;
    if (count > 1) {
        c[1] = -delta_prime / (1.0 + alpha);
    }
    for (int p = 0; p + 2 < count; ++p) {
        c[p + 2] = (-delta_prime * c[p + 1] - (shift - 2.0 * p) * c[p]) /
                   ((p + 2.0) * (p + 2.0 + alpha));
    }
    return c;
}

std::vector<double> laguerre_asymptotic(int n, int l) {
    if (n < 0 || l < 0) {
        throw ArgumentError(fmt::format("laguerre_asymptotic needs n, l >= 0, got n={} l={}", n, l));
    }
    // n! l! / (n+l)! * (-1)^k C(n+l, n-k) / k!  ==  (-1)^k C(n, k) l! / (k + l)!
    std::vector<double> coeffs(2 * static_cast<std::size_t>(n) + 1, 0.0);
    long double binom = 1.0L;   // C(n, k)
    long double rising = 1.0L;  // (l+1)(l+2)...(l+k)
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            binom = binom * (n - k + 1) / k;
            rising *= static_cast<long double>(l + k);
        }
        const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
        coeffs[2 * static_cast<std::size_t>(k)] = static_cast<double>(sign * binom / rising);
    }
    return coeffs;
}

} // namespace qdot::heun
