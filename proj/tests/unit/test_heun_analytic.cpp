#include "qdot/errors.hpp"
#include "qdot/heun_analytic.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace qdot;
using namespace qdot::heun;
using doctest::Approx;

namespace {

std::vector<long long> as_ll(const CoefficientPolynomial& p) {
    std::vector<long long> out;
    for (const auto& c : p.coeffs) {
        out.push_back(c.convert_to<long long>());
    }
    return out;
}

// Positive real roots of a monic polynomial from its companion matrix.
std::vector<double> companion_roots(const CoefficientPolynomial& p) {
    const int d = p.degree();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) {
        m(i, i - 1) = 1.0;
    }
    for (int i = 0; i < d; ++i) {
        m(i, d - 1) = -p.coeffs[i].convert_to<double>();
    }
    const Eigen::VectorXcd eig = m.eigenvalues();
    std::vector<double> roots;
    for (int i = 0; i < d; ++i) {
        const auto z = eig[i];
        if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z)) && z.real() > 1e-6) {
            roots.push_back(z.real());
        }
    }
    std::ranges::sort(roots);
    return roots;
}

} // namespace

TEST_CASE("recurrence polynomials") {
    CHECK(as_ll(recurrence_coefficients(1, 0)[2]) == std::vector<long long>{-2, 0, 1});
    CHECK(as_ll(recurrence_coefficients(2, 0)[3]) == std::vector<long long>{0, -12, 0, 1});
    CHECK(as_ll(recurrence_coefficients(2, 1)[3]) == std::vector<long long>{0, -28, 0, 1});
    CHECK(as_ll(recurrence_coefficients(3, 0)[4]) == std::vector<long long>{108, 0, -40, 0, 1});
    CHECK(as_ll(recurrence_coefficients(3, 1)[4]) == std::vector<long long>{540, 0, -80, 0, 1});
    CHECK(as_ll(recurrence_coefficients(3, 2)[4]) == std::vector<long long>{1260, 0, -120, 0, 1});

    const auto a = recurrence_coefficients(4, 2);
    REQUIRE(a.size() == 6);
    CHECK(as_ll(a[0]) == std::vector<long long>{1});
    CHECK(as_ll(a[1]) == std::vector<long long>{0, 1});
}

TEST_CASE("recurrence parity and degree") {
    for (int n = 1; n <= 12; ++n) {
        for (int l = 0; l <= 4; ++l) {
            const auto a = recurrence_coefficients(n, l);
            REQUIRE(a.size() == static_cast<std::size_t>(n + 2));
            for (int p = 0; p <= n + 1; ++p) {
                CHECK(a[p].degree() == p);
                for (std::size_t k = 0; k < a[p].coeffs.size(); ++k) {
                    if ((static_cast<int>(k) + p) % 2 != 0) {
                        CHECK(a[p].coeffs[k] == 0);
                    }
                }
            }
            CHECK(admissible_roots(n, l).asymptotic == (n % 2 == 0));
        }
    }
}

TEST_CASE("coefficients beyond 64 bits stay exact") {
    const auto a = recurrence_coefficients(20, 4);
    const auto& top = a.back().coeffs;
    const auto biggest = *std::ranges::max_element(top, [](const BigInt& x, const BigInt& y) { return abs(x) < abs(y); });
    CHECK(abs(biggest) > BigInt(std::numeric_limits<long long>::max()));
    CHECK(top.front() == 0); // n = 20 is even: t = 0 is a root
    CHECK_THROWS_AS(recurrence_coefficients(21, 0), ArgumentError);
    CHECK_THROWS_AS(recurrence_coefficients(0, 0), ArgumentError);
    CHECK_THROWS_AS(recurrence_coefficients(3, -1), ArgumentError);
}

TEST_CASE("admissible roots reference values") {
    auto r = admissible_roots(1, 0);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0] == Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK_FALSE(r.asymptotic);

    r = admissible_roots(3, 1);
    REQUIRE(r.roots.size() == 2);
    CHECK(r.roots[0] == Approx(2.728068695579455).epsilon(1e-12));
    CHECK(r.roots[1] == Approx(8.518077317810599).epsilon(1e-12));

    r = admissible_roots(4, 0);
    REQUIRE(r.roots.size() == 2);
    CHECK(r.roots[0] == Approx(3.9411450266).epsilon(1e-10));
    CHECK(r.roots[1] == Approx(9.1906134659).epsilon(1e-10));
    CHECK(r.asymptotic);

    r = admissible_roots(5, 0);
    REQUIRE(r.roots.size() == 3);
    CHECK(r.roots[0] == Approx(1.9283486778).epsilon(1e-10));
    CHECK(r.roots[1] == Approx(6.7103003079).epsilon(1e-10));
    CHECK(r.roots[2] == Approx(12.6985567).epsilon(1e-8));

    CHECK_THROWS_AS(admissible_roots(3, 0, 0.0), ArgumentError);
}

TEST_CASE("admissible roots agree with a companion-matrix oracle") {
    for (int n = 1; n <= 8; ++n) {
        for (int l = 0; l <= 4; ++l) {
            const auto exact = admissible_roots(n, l).roots;
            const auto oracle = companion_roots(recurrence_coefficients(n, l).back());
            REQUIRE(exact.size() == oracle.size());
            for (std::size_t i = 0; i < exact.size(); ++i) {
                CHECK(exact[i] == Approx(oracle[i]).epsilon(1e-8));
            }
            const auto poly = recurrence_coefficients(n, l).back();
            for (double t : exact) {
                // residual relative to the largest term
                long double scale = 0.0L;
                for (std::size_t k = 0; k < poly.coeffs.size(); ++k) {
                    scale = std::max(scale, std::abs(poly.coeffs[k].convert_to<long double>() * std::pow((long double)t, k)));
                }
                CHECK(std::abs(poly.evaluate(t)) <= 1e-9L * scale);
            }
        }
    }
}

TEST_CASE("quantized energy") {
    CHECK(quantized_energy(1, 0, 0.5) == 2.0);
    CHECK(quantized_energy(3, 0, 0.027) == Approx(0.216).epsilon(1e-14));
    CHECK(quantized_energy(0, 0, 1e-300) == Approx(0.0));
}

TEST_CASE("build_solution reference polynomials") {
    auto s = build_solution(1, 0, 0);
    CHECK(s.omega == Approx(0.5).epsilon(1e-11));
    CHECK(s.eta == Approx(2.0).epsilon(1e-11));
    REQUIRE(s.y_coeffs.size() == 2);
    CHECK(s.y_coeffs[0] == 1.0);
    CHECK(s.y_coeffs[1] == Approx(1.0).epsilon(1e-13));
    CHECK(s.gaussian_exponent() == Approx(0.25).epsilon(1e-13));

    s = build_solution(2, 0, 0);
    REQUIRE(s.y_coeffs.size() == 3);
    CHECK(s.y_coeffs[2] == Approx(1.0 / 6.0).epsilon(1e-13));

    s = build_solution(3, 0, 1);
    CHECK(s.t == Approx(6.089992404809308).epsilon(1e-13));
    CHECK(s.y_coeffs[2] == Approx(0.2095556596).epsilon(1e-9));
    CHECK(s.y_coeffs[3] == Approx(0.0113004539).epsilon(1e-8));

    CHECK_THROWS_AS(build_solution(3, 0, 2), ArgumentError);
    CHECK_THROWS_AS(build_solution(1, 0, 1), ArgumentError);
}

TEST_CASE("solution invariants") {
    for (int n = 1; n <= 8; ++n) {
        for (int l = 0; l <= 3; ++l) {
            const auto roots = admissible_roots(n, l).roots;
            for (std::size_t k = 0; k < roots.size(); ++k) {
                const auto s = build_solution(n, l, k);
                CHECK(s.eta == Approx(2.0 * (n + l + 1) * s.omega).epsilon(1e-14));
                CHECK(s.gamma - s.alpha - 2.0 == Approx(2.0 * n).epsilon(1e-12));
                CHECK(s.alpha == 2.0 * l);
                CHECK(s.omega == Approx(1.0 / (s.t * s.t)).epsilon(1e-14));
                CHECK(s.gaussian_exponent() == Approx(0.5 / (s.t * s.t)).epsilon(1e-14));
                REQUIRE(s.y_coeffs.size() == static_cast<std::size_t>(n + 1));
                CHECK(s.y_coeffs[0] == 1.0);
                // r^1 coefficient is t sqrt(omega) / (1 + 2l)
                CHECK(s.y_coeffs[1] == Approx(1.0 / (1.0 + 2.0 * l)).epsilon(1e-12));

                // residual of x y'' + (1 + alpha - 2x^2) y' + (-t + (gamma - alpha - 2) x) y in powers of x
                std::vector<double> c(n + 1);
                for (int p = 0; p <= n; ++p) {
                    c[p] = s.y_coeffs[p] * std::pow(s.t, p);
                }
                const double shift = s.gamma - s.alpha - 2.0;
                double scale = 0.0;
                for (double v : c) {
                    scale = std::max(scale, std::abs(v));
                }
                for (int q = 0; q <= n + 1; ++q) {
                    auto at = [&](int p) { return p >= 0 && p <= n ? c[p] : 0.0; };
                    const double res = (q + 1.0) * (q + 1.0 + s.alpha) * at(q + 1) - s.t * at(q) +
                                       (shift - 2.0 * (q - 1)) * at(q - 1);
                    CHECK(std::abs(res) <= 1e-10 * scale * std::max(1.0, s.t));
                }
            }
        }
    }
}

TEST_CASE("listed l = 0 solutions are nodeless") {
    // the largest root for n <= 4
    for (int n = 1; n <= 4; ++n) {
        const auto roots = admissible_roots(n, 0).roots;
        const auto s = build_solution(n, 0, roots.size() - 1);
        const auto p = RadialProblem::with_defaults(PotentialKind::Coulomb, s.omega, 0);
        const auto u = sample_u(s, p.grid());
        CHECK(count_sign_changes(u.values) == 0);
    }
}

TEST_CASE("sample_u normalization and small-r behaviour") {
    const auto s = build_solution(3, 1, 0);
    const auto p = RadialProblem::with_defaults(PotentialKind::Coulomb, s.omega, 1);
    const auto grid = p.grid();
    const auto u = sample_u(s, grid);
    std::vector<double> sq(u.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        sq[i] = u.values[i] * u.values[i];
    }
    CHECK(simpson(u.grid, sq) == Approx(1.0).epsilon(1e-9));
    CHECK(u.values[1] > 0.0);
    // u ~ C r^{l+1/2} near the origin
    const double c0 = u.values[0] / std::pow(grid[0], 1.5);
    const double c1 = u.values[1] / std::pow(grid[1], 1.5);
    CHECK(c1 / c0 == Approx(1.0).epsilon(0.05));

    std::vector<double> bad{1.0, 0.5, 2.0};
    CHECK_THROWS_AS(sample_u(s, bad), ArgumentError);
    std::vector<double> negative{-1.0, 0.5, 2.0};
    CHECK_THROWS_AS(sample_u(s, negative), ArgumentError);
}

TEST_CASE("Laguerre limit") {
    CHECK(laguerre_asymptotic(0, 3) == std::vector<double>{1.0});
    CHECK(laguerre_asymptotic(1, 0) == std::vector<double>{1.0, 0.0, -1.0});
    const auto two = laguerre_asymptotic(2, 0);
    REQUIRE(two.size() == 5);
    CHECK(two[1] == 0.0);
    CHECK(two[3] == 0.0);
    CHECK(two[4] == Approx(0.5));
    for (int n = 0; n <= 8; ++n) {
        for (int l = 0; l <= 4; ++l) {
            const auto a = laguerre_asymptotic(n, l);
            const auto b = series_coefficients(2.0 * l, 4.0 * n, 0.0, 2 * n + 3);
            for (std::size_t p = 0; p < a.size(); ++p) {
                CHECK(std::abs(a[p] - b[p]) <= 1e-12);
            }
            // the series terminates
            CHECK(std::abs(b[2 * n + 2]) <= 1e-14);
        }
    }
    CHECK_THROWS_AS(laguerre_asymptotic(-1, 0), ArgumentError);
}

TEST_CASE("generic series reproduces the terminating polynomial") {
    const auto s = build_solution(4, 1, 1);
    const auto c = series_coefficients(s.alpha, s.gamma - s.alpha - 2.0, -s.t, 8);
    for (int p = 0; p <= 4; ++p) {
        CHECK(c[p] == Approx(s.y_coeffs[p] * std::pow(s.t, p)).epsilon(1e-9));
    }
    for (int p = 5; p < 8; ++p) {
        CHECK(std::abs(c[p]) <= 1e-9 * std::abs(c[4]));
    }
}
