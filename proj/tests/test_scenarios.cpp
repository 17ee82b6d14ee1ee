#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hamloop/invariant.hpp"
#include "hamloop/scenarios/hirzebruch.hpp"
#include "hamloop/scenarios/sphere.hpp"
#include "hamloop/scenarios/torus.hpp"

using namespace hamloop;
using geom::Point;
namespace {
constexpr double kPi = std::numbers::pi;
const geom::QuadratureSpec kFast{6, 512, 12, 1};

toric::ExactValue q(long num, long den) { return toric::ExactValue(num) / den; }
} // namespace

TEST_CASE("sphere golden record") {
    auto exp = scenarios::sphere_expected();
    CHECK(exp.j_u == +1);
    CHECK(exp.j_v == -1);
    CHECK(exp.invariant == 0.0);
    CHECK(exp.chern == 2.0);
}

TEST_CASE("sphere scenario certificates and report") {
    for (double eps_hat : {0.15, 0.6}) {
        auto sphere = scenarios::make_sphere(eps_hat);
        CHECK(sphere.total_volume == doctest::Approx(4 * kPi).epsilon(1e-12));
        CHECK(sphere.boundary_constant ==
              doctest::Approx(2 * kPi * std::sin(eps_hat)).epsilon(1e-9));
        CHECK(sphere.f_south_pole == doctest::Approx(2 * kPi).epsilon(1e-12));
        auto report = invariant::compute_invariant(sphere.inputs, kFast);
        REQUIRE(report.chart_terms.size() == 2);
        CHECK(report.chart_terms[0].maslov.index == sphere.expected.j_u);
        CHECK(report.chart_terms[1].maslov.index == sphere.expected.j_v);
        CHECK(report.chart_terms[0].volume ==
              doctest::Approx(2 * kPi * (1 + std::sin(eps_hat))).epsilon(1e-9));
        CHECK(std::abs(report.total) < 1e-6);
    }
}

TEST_CASE("sphere corollaries vanish") {
    auto sphere = scenarios::make_sphere(0.35);
    auto report = invariant::compute_invariant(sphere.inputs, kFast);
    double vol_u = report.chart_terms[0].volume;
    double vol_v_minus_u = report.chart_terms[1].volume;
    double two_charts = invariant::corollary_two_charts(
        sphere.expected.j_u, sphere.expected.j_v, vol_u, vol_v_minus_u, 1,
        sphere.boundary_constant, sphere.expected.chern);
    CHECK(std::abs(two_charts) < 1e-9);
    double punctured = invariant::corollary_punctured(
        sphere.expected.j_u, sphere.total_volume, 1, sphere.f_south_pole,
        sphere.expected.chern);
    CHECK(std::abs(punctured) < 1e-12);
}

TEST_CASE("sphere transition jacobian: closed form validates finite differences") {
    auto sphere = scenarios::make_sphere(0.2);
    const auto& chart_u = sphere.inputs.atlas[0];
    const auto& chart_v = sphere.inputs.atlas[1];
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> z_dist(-0.19, 0.19), phi_dist(0.0, 2 * kPi);
    for (int trial = 0; trial < 10; ++trial) {
        Point model(2);
        model << phi_dist(rng), z_dist(rng);
        Eigen::MatrixXd fd = geom::transition_jacobian_fd(chart_u, chart_v, model);
        Eigen::MatrixXd cf = scenarios::sphere_r12_jacobian(chart_v.to_coords(model));
        CHECK((fd - cf).cwiseAbs().maxCoeff() < 1e-5);
    }
    auto fd_scenario = scenarios::make_sphere(0.2, geom::JacobianMode::FiniteDifference);
    Point model(2);
    model << 1.3, 0.05;
    auto a = sphere.inputs.phases[0].eval(model);
    auto b = fd_scenario.inputs.phases[0].eval(model);
    CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("torus loops close and have vanishing index and invariant") {
    auto torus = scenarios::make_torus(1, 7);
    CHECK(torus.expected.maslov == 0);
    CHECK(torus.expected.invariant == 0.0);
    for (const auto& p : torus.sample_points) {
        Point back = torus.inputs.loop.flow(1.0, p);
        CHECK((back - p).cwiseAbs().maxCoeff() < 1e-8);
    }
    auto report = invariant::compute_invariant(torus.inputs, kFast);
    CHECK(report.chart_terms[0].maslov.index == 0);
    CHECK(report.total == 0.0);
}

TEST_CASE("torus index is independent of the base point") {
    auto torus = scenarios::make_torus(1, 11);
    std::vector<symp::MatrixLoop> loops;
    for (const auto& p : torus.sample_points) {
        loops.push_back([&torus, p](double t) {
            return torus.inputs.loop.linearization(1, t, p);
        });
    }
    int common = 99;
    CHECK(symp::point_independence_check(loops, 512, &common));
    CHECK(common == 0);
}

TEST_CASE("torus reparameterization pins the loop endpoints") {
    CHECK(scenarios::torus_reparameterization(0.0) == doctest::Approx(0.0));
    CHECK(scenarios::torus_reparameterization(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(scenarios::torus_reparameterization(0.5) == doctest::Approx(1.0));
}

TEST_CASE("hirzebruch golden records") {
    auto a = scenarios::hirzebruch_expected({1, 3, 1});
    CHECK(a.kappa == q(7, 15));
    CHECK(a.kappa_tilde == q(19, 15));
    CHECK(a.i_psi == q(8, 15));
    CHECK(a.i_psi_tilde == q(-4, 15));
    CHECK(a.ratio == q(-1, 2));
    CHECK(a.chern == 7);
    CHECK(a.maslov == std::array<int, 5>{0, +1, 0, -1, 0});
    CHECK(a.maslov_tilde == std::array<int, 5>{0, 0, +1, +1, -1});

    auto b = scenarios::hirzebruch_expected({2, 5, 1});
    CHECK(b.i_psi == q(7, 6));
    CHECK(b.i_psi_tilde == q(-7, 6));
    CHECK(b.ratio == -1);
    CHECK(b.chern == 10);
    CHECK(b.maslov_tilde == std::array<int, 5>{0, 0, +1, +2, -1});
}

TEST_CASE("hirzebruch transition phase windings are frozen") {
    // Regression pin: winding of each r_0j along its chain circle, with the
    // transverse parameters held at their midpoints.
    const std::array<int, 4> frozen{-1, -1, +1, +1};
    for (auto params : {scenarios::HirzebruchParams{1, 3, 1},
                        scenarios::HirzebruchParams{2, 5, 1}}) {
        auto sc = scenarios::make_hirzebruch(params, 0.05);
        REQUIRE(sc.psi.chains.size() == 4);
        for (std::size_t c = 0; c < 4; ++c) {
            const auto& chain = sc.psi.chains[c].second;
            const auto& phase = sc.psi.phases[c];
            Point p(static_cast<int>(chain.params.size()));
            for (std::size_t i = 1; i < chain.params.size(); ++i) {
                p[static_cast<int>(i)] = 0.5 * (chain.params[i].lo + chain.params[i].hi);
            }
            auto path = symp::PhasePath::adaptive(
                [&](double t) {
                    p[0] = chain.params[0].lo + t * (chain.params[0].hi - chain.params[0].lo);
                    return phase.eval(chain.map(p));
                },
                512);
            CHECK(symp::winding_number(path) == frozen[c]);
        }
    }
}

TEST_CASE("hirzebruch single-epsilon run lands near the closed forms") {
    auto sc = scenarios::make_hirzebruch({1, 3, 1}, 0.05);
    auto psi = invariant::compute_invariant(sc.psi, kFast);
    auto tilde = invariant::compute_invariant(sc.psi_tilde, kFast);
    CHECK(psi.total == doctest::Approx(toric::to_double(sc.expected.i_psi)).epsilon(0.05));
    CHECK(tilde.total ==
          doctest::Approx(toric::to_double(sc.expected.i_psi_tilde)).epsilon(0.2));
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(psi.chart_terms[j].maslov.index == sc.expected.maslov[j]);
        CHECK(tilde.chart_terms[j].maslov.index == sc.expected.maslov_tilde[j]);
    }
}

TEST_CASE("hirzebruch r01 finite-difference phase matches the closed form") {
    auto closed = scenarios::make_hirzebruch({1, 3, 1}, 0.05);
    auto fd = scenarios::make_hirzebruch({1, 3, 1}, 0.05, true);
    const auto& chain = closed.psi.chains[0].second;
    Point p(static_cast<int>(chain.params.size()));
    for (std::size_t i = 0; i < chain.params.size(); ++i) {
        p[static_cast<int>(i)] = 0.5 * (chain.params[i].lo + chain.params[i].hi);
    }
    Point model = chain.map(p);
    CHECK(std::abs(closed.psi.phases[0].eval(model) - fd.psi.phases[0].eval(model)) < 1e-5);
}
