#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hamloop/invariant.hpp"
#include "hamloop/scenarios/hirzebruch.hpp"
#include "hamloop/scenarios/sphere.hpp"

using namespace hamloop;
using invariant::InvariantInputs;
using geom::Point;
namespace {
constexpr double kPi = std::numbers::pi;
const geom::QuadratureSpec kFast{6, 512, 12, 1};

// Same loop traversed twice: psi_{s(t)} with s(t) = 2t mod 1, whose normalized
// Hamiltonian is 2 f.
InvariantInputs doubled(InvariantInputs inputs) {
    auto base = inputs.loop;
    auto s = [](double t) { return t < 0.5 ? 2 * t : 2 * t - 1.0; };
    inputs.loop.flow = [=](double t, const Point& x) { return base.flow(s(t), x); };
    inputs.loop.inverse_flow = [=](double t, const Point& x) {
        return base.inverse_flow(s(t), x);
    };
    inputs.loop.hamiltonian = [=](double t, const Point& x) {
        return 2.0 * base.hamiltonian(s(t), x);
    };
    inputs.loop.linearization = [=](int c, double t, const Point& x) {
        return base.linearization(c, s(t), x);
    };
    return inputs;
}

// Reversed loop psi_{1-t}, whose normalized Hamiltonian is -f at time 1-t.
InvariantInputs reversed(InvariantInputs inputs) {
    auto base = inputs.loop;
    inputs.loop.flow = [=](double t, const Point& x) { return base.flow(1.0 - t, x); };
    inputs.loop.inverse_flow = [=](double t, const Point& x) {
        return base.inverse_flow(1.0 - t, x);
    };
    inputs.loop.hamiltonian = [=](double t, const Point& x) {
        return -base.hamiltonian(1.0 - t, x);
    };
    inputs.loop.linearization = [=](int c, double t, const Point& x) {
        return base.linearization(c, 1.0 - t, x);
    };
    return inputs;
}
} // namespace

TEST_CASE("linear extrapolation hits the intercept exactly on affine data") {
    std::array<double, 3> eps{0.05, 0.025, 0.0125};
    std::array<double, 3> vals{1.0 + 3.0 * 0.05, 1.0 + 3.0 * 0.025, 1.0 + 3.0 * 0.0125};
    CHECK(invariant::extrapolate_linear(eps, vals) == doctest::Approx(1.0).epsilon(1e-12));
    std::array<double, 2> e2{0.1, 0.2}, v2{5.0, 5.0};
    CHECK(invariant::extrapolate_linear(e2, v2) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("two-chart corollary is the stated linear combination") {
    CHECK(invariant::corollary_two_charts(2, -1, 3.0, 5.0, 1, 0.5, 4.0) ==
          doctest::Approx(2 * 3.0 - 5.0 - 1 * 0.5 * 4.0));
    CHECK(invariant::corollary_two_charts(1, 1, 2.0, 3.0, 2, 0.7, 0.0) ==
          doctest::Approx(5.0));
    CHECK(invariant::corollary_two_charts(0, 0, 9.0, 9.0, 1, 0.25, 2.0) ==
          doctest::Approx(-0.5));
}

TEST_CASE("punctured corollary is the stated linear combination") {
    CHECK(invariant::corollary_punctured(1, 4 * kPi, 1, 2 * kPi, 2.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(invariant::corollary_punctured(3, 2.0, 1, 0.0, 7.0) == doctest::Approx(6.0));
    CHECK(invariant::corollary_punctured(0, 2.0, 2, 1.5, 3.0) == doctest::Approx(-9.0));
}

TEST_CASE("bookkeeping identity holds exactly on the sphere report") {
    auto sphere = scenarios::make_sphere(0.3);
    auto report = invariant::compute_invariant(sphere.inputs, kFast);
    double acc = 0.0;
    for (const auto& c : report.chart_terms) {
        CHECK(c.contribution == c.maslov.index * c.volume);
        acc += c.contribution;
    }
    for (const auto& p : report.pair_terms) acc += p.value;
    CHECK(report.total == acc);
    CHECK(std::abs(report.total) < 1e-6);
}

TEST_CASE("the identity loop contributes nothing") {
    auto sphere = scenarios::make_sphere(0.2);
    auto inputs = sphere.inputs;
    inputs.loop.flow = [](double, const Point& x) { return x; };
    inputs.loop.inverse_flow = [](double, const Point& x) { return x; };
    inputs.loop.hamiltonian = [](double, const Point&) { return 0.0; };
    inputs.loop.linearization = [](int, double, const Point&) {
        return symp::SymplecticMatrix::identity(1);
    };
    auto report = invariant::compute_invariant(inputs, kFast);
    CHECK(report.total == 0.0);
    for (const auto& c : report.chart_terms) CHECK(c.maslov.index == 0);
}

TEST_CASE("missing invariance certificates are a hard error") {
    auto sphere = scenarios::make_sphere(0.2);
    auto inputs = sphere.inputs;
    inputs.loop.invariant_charts = {1}; // chart 2 no longer certified
    CHECK_THROWS_AS(invariant::compute_invariant(inputs, kFast),
                    hamloop::MissingInvarianceCertificateError);
}

TEST_CASE("double traversal doubles the invariant") {
    auto scenario = scenarios::make_hirzebruch({1, 3, 1}, 0.05);
    auto base = invariant::compute_invariant(scenario.psi, kFast);
    auto twice = invariant::compute_invariant(doubled(scenario.psi), kFast);
    CHECK(twice.total == doctest::Approx(2.0 * base.total).epsilon(1e-9));
    for (std::size_t i = 0; i < base.chart_terms.size(); ++i) {
        CHECK(twice.chart_terms[i].maslov.index == 2 * base.chart_terms[i].maslov.index);
    }
}

TEST_CASE("loop reversal negates the invariant") {
    auto sphere = scenarios::make_sphere(0.25);
    auto fwd = invariant::compute_invariant(sphere.inputs, kFast);
    auto bwd = invariant::compute_invariant(reversed(sphere.inputs), kFast);
    CHECK(bwd.total == doctest::Approx(-fwd.total).epsilon(1e-9));
    CHECK(bwd.pair_terms[0].value == doctest::Approx(-fwd.pair_terms[0].value).epsilon(1e-9));

    auto scenario = scenarios::make_hirzebruch({1, 3, 1}, 0.05);
    auto h_fwd = invariant::compute_invariant(scenario.psi, kFast);
    auto h_bwd = invariant::compute_invariant(reversed(scenario.psi), kFast);
    CHECK(h_bwd.total == doctest::Approx(-h_fwd.total).epsilon(1e-9));
}

TEST_CASE("the collapsed time integral matches explicit time quadrature") {
    auto sphere = scenarios::make_sphere(0.2);
    auto collapsed = invariant::compute_invariant(sphere.inputs, kFast);
    auto inputs = sphere.inputs;
    inputs.loop.autonomous = false; // force the Gauss-Legendre quadrature in t
    auto explicit_t = invariant::compute_invariant(inputs, kFast, 8);
    CHECK(explicit_t.total == doctest::Approx(collapsed.total).epsilon(1e-10));
}

TEST_CASE("the boundary integral of the hamiltonian is constant on the overlap") {
    auto sphere = scenarios::make_sphere(0.4);
    const auto& chain = sphere.inputs.chains[0].second;
    double k_const = invariant::verify_boundary_constant(chain, sphere.inputs.loop);
    CHECK(k_const == doctest::Approx(2 * kPi * std::sin(0.4)).epsilon(1e-9));

    auto loop = sphere.inputs.loop;
    loop.hamiltonian = [](double, const Point& p) { return std::sin(p[0]); };
    CHECK_THROWS_AS(invariant::verify_boundary_constant(chain, loop),
                    hamloop::NonConstantBoundaryHamiltonianError);
}

TEST_CASE("chern pairing of the two-cap atlas is 2 and of no atlas is 0") {
    auto sphere = scenarios::make_sphere(0.2);
    double chern =
        invariant::chern_pairing(sphere.inputs.chains, sphere.inputs.phases, 1, kFast);
    CHECK(chern == doctest::Approx(2.0).epsilon(1e-6));
    std::vector<std::pair<std::pair<int, int>, geom::Chain>> no_chains;
    std::vector<geom::TransitionPhase> no_phases;
    CHECK(invariant::chern_pairing(no_chains, no_phases, 1, kFast) == 0.0);
}

TEST_CASE("integrable route agrees with the boundary terms of the full pipeline") {
    auto scenario = scenarios::make_hirzebruch({1, 3, 1}, 0.05);
    std::vector<std::pair<geom::Chain, geom::TransitionPhase>> data;
    for (std::size_t i = 0; i < scenario.psi.chains.size(); ++i) {
        data.emplace_back(scenario.psi.chains[i].second, scenario.psi.phases[i]);
    }
    auto f = [&](const Point& x) { return scenario.psi.loop.hamiltonian(0.0, x); };
    auto res = invariant::integrable_invariant(data, f, 2, kFast);
    auto report = invariant::compute_invariant(scenario.psi, kFast);
    double n_sum = 0.0;
    for (const auto& p : report.pair_terms) n_sum += p.value;
    CHECK(res.i_psi == doctest::Approx(n_sum).epsilon(1e-9));
    double chern =
        invariant::chern_pairing(scenario.psi.chains, scenario.psi.phases, 2, kFast);
    CHECK(res.chern_sum == doctest::Approx(chern).epsilon(1e-9));

    auto zero = invariant::integrable_invariant(data, [](const Point&) { return 0.0; }, 2, kFast);
    CHECK(zero.i_psi == 0.0);
}

TEST_CASE("finite-difference linearization validates the closed form") {
    auto sphere = scenarios::make_sphere(0.2);
    const auto& chart = sphere.inputs.atlas[0];
    Point p = sphere.inputs.maslov_points.at(1);
    for (double t : {0.15, 0.6}) {
        auto fd = invariant::fd_linearization(chart, sphere.inputs.loop, t, p);
        auto cf = sphere.inputs.loop.linearization(1, t, p);
        CHECK((fd.entries() - cf.entries()).cwiseAbs().maxCoeff() < 1e-5);
    }
}
