#include <random>

#include "doctest.h"
#include "hamloop/toric.hpp"

using namespace hamloop::toric;

namespace {
ExactValue q(long num, long den) { return ExactValue(num) / den; }

std::vector<DelzantTrapezoid> random_trapezoids(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> k_dist(1, 5);
    std::uniform_int_distribution<long> num(1, 40), den(1, 7);
    std::vector<DelzantTrapezoid> out;
    while (static_cast<int>(out.size()) < count) {
        int k = k_dist(rng);
        ExactValue mu = q(num(rng), den(rng));
        ExactValue tau = k * mu + q(num(rng), den(rng));
        out.emplace_back(k, tau, mu);
    }
    return out;
}
} // namespace

TEST_CASE("trapezoid validity conditions") {
    CHECK_NOTHROW(DelzantTrapezoid(1, 3, 1));
    CHECK_THROWS(DelzantTrapezoid(0, 3, 1));   // k >= 1 required
    CHECK_THROWS(DelzantTrapezoid(1, 1, 1));   // k mu < tau violated
    CHECK_THROWS(DelzantTrapezoid(2, 3, -1));  // positive mu required
    CHECK(DelzantTrapezoid(2, 5, 1).lambda() == 3);
}

TEST_CASE("exact monomial integrals over the trapezoid") {
    DelzantTrapezoid trap(1, 3, 1);
    CHECK(integrate_monomial(trap, 0, 0) == q(5, 2));
    CHECK(integrate_monomial(trap, 0, 1) == q(7, 6));
    CHECK_THROWS(integrate_monomial(trap, -1, 0));
    // Unit-height strip with k = 1, tau = 2: int x dA over the trapezoid
    // {0 <= y <= 1, 0 <= x <= 2 - y} is int_0^1 (2-y)^2/2 dy = 7/6.
    CHECK(integrate_monomial(DelzantTrapezoid(1, 2, 1), 1, 0) == q(7, 6));
}

TEST_CASE("monomial integrals agree with Monte Carlo rejection sampling") {
    DelzantTrapezoid trap(2, 5, 1);
    const double tau = 5.0, mu = 1.0, k = 2.0;
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> ux(0.0, tau), uy(0.0, mu);
    const int n_samples = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double x = ux(rng), y = uy(rng);
        double v = (x <= tau - k * y) ? x * y : 0.0;
        sum += v;
        sum_sq += v * v;
    }
    const double box = tau * mu;
    double mean = sum / n_samples;
    double stderr_est =
        box * std::sqrt((sum_sq / n_samples - mean * mean) / n_samples);
    double estimate = box * mean;
    double exact = to_double(integrate_monomial(trap, 1, 1));
    CHECK(std::abs(estimate - exact) < 3.0 * stderr_est);
}

TEST_CASE("normalization constants at the reference parameters") {
    DelzantTrapezoid trap(1, 3, 1);
    CHECK(kappa(trap) == q(7, 15));
    CHECK(kappa_tilde(trap) == q(19, 15));
}

TEST_CASE("normalization formulas agree exactly with moment ratios") {
    for (const auto& trap : random_trapezoids(25, 99)) {
        CHECK(kappa(trap) == kappa_from_moment_ratio(trap));
        CHECK(kappa_tilde(trap) == kappa_tilde_from_moment_ratio(trap));
    }
}

TEST_CASE("kappa tends to mu/2 in the long-strip limit") {
    ExactValue mu = q(3, 2);
    DelzantTrapezoid strip(2, 2 * mu + ExactValue(1000000), mu);
    ExactValue diff = kappa(strip) - mu / 2;
    CHECK(abs(diff) < q(1, 100000));
}

TEST_CASE("closed-form invariants at the reference parameters") {
    auto [i_psi, i_tilde] = closed_form_invariants(DelzantTrapezoid(1, 3, 1));
    CHECK(i_psi == q(8, 15));
    CHECK(i_tilde == q(-4, 15));
    auto [j_psi, j_tilde] = closed_form_invariants(DelzantTrapezoid(2, 5, 1));
    CHECK(j_psi == q(7, 6));
    CHECK(j_tilde == q(-7, 6));
}

TEST_CASE("the invariant ratio is exactly -k/2 for random parameters") {
    for (const auto& trap : random_trapezoids(25, 7)) {
        auto [i_psi, i_tilde] = closed_form_invariants(trap);
        CHECK(i_tilde * 2 == -trap.k * i_psi);
    }
}

TEST_CASE("boundary terms at the reference parameters") {
    DelzantTrapezoid trap(1, 3, 1);
    auto terms = boundary_terms(trap);
    CHECK(terms.n01 == q(14, 5)); // 2 tau kappa with kappa = 7/15
    CHECK(terms.sum() == q(8, 15));
    auto tilde = boundary_terms_tilde(trap);
    CHECK(tilde.sum() == q(-4, 15));
}

TEST_CASE("boundary terms sum to the closed-form invariants exactly") {
    for (const auto& trap : random_trapezoids(25, 31)) {
        auto [i_psi, i_tilde] = closed_form_invariants(trap);
        CHECK(boundary_terms(trap).sum() == i_psi);
        CHECK(boundary_terms_tilde(trap).sum() == i_tilde);
    }
}

TEST_CASE("rational parsing round trips") {
    CHECK(parse_rational("7/15") == q(7, 15));
    CHECK(parse_rational("-4/15") == q(-4, 15));
    CHECK(parse_rational("3") == 3);
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
    CHECK(to_double(q(1, 2)) == 0.5);
}
