#include "hamloop/scenarios/sphere.hpp"

#include <cmath>
#include <numbers>

namespace hamloop::scenarios {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

geom::Chart make_chart_u() {
    geom::Chart chart;
    chart.id = 1;
    chart.n = 1;
    chart.params = {{"X", -2.0, 2.0, false}, {"Y", -2.0, 2.0, false}};
    chart.orientation_sign = +1;
    chart.to_coords = [](const geom::Point& m) {
        const double r = std::sqrt(2.0 * (1.0 - m[1]));
        geom::Point c(2);
        c << r * std::cos(m[0]), r * std::sin(m[0]);
        return c;
    };
    chart.from_coords = [](const geom::Point& c) {
        geom::Point m(2);
        m << std::atan2(c[1], c[0]), 1.0 - 0.5 * (c[0] * c[0] + c[1] * c[1]);
        return m;
    };
    return chart;
}

geom::Chart make_chart_v() {
    geom::Chart chart;
    chart.id = 2;
    chart.n = 1;
    chart.params = {{"X'", -2.0, 2.0, false}, {"Y'", -2.0, 2.0, false}};
    chart.orientation_sign = +1;
    chart.to_coords = [](const geom::Point& m) {
        const double r = std::sqrt(2.0 * (1.0 + m[1]));
        geom::Point c(2);
        c << r * std::cos(-m[0]), r * std::sin(-m[0]);
        return c;
    };
    chart.from_coords = [](const geom::Point& c) {
        geom::Point m(2);
        m << -std::atan2(c[1], c[0]), 0.5 * (c[0] * c[0] + c[1] * c[1]) - 1.0;
        return m;
    };
    return chart;
}

} // namespace

SphereExpected sphere_expected() { return SphereExpected{}; }

Eigen::MatrixXd sphere_r12_jacobian(const geom::Point& coords_v) {
    const double xp = coords_v[0], yp = coords_v[1];
    const double rp2 = xp * xp + yp * yp;
    const double u = 2.0 - 0.5 * rp2; // u = 1 - z, u' = 1 + z
    const double phi = -std::atan2(yp, xp);
    const double r2 = 2.0 * u;
    const double x = std::sqrt(r2) * std::cos(phi);
    const double y = std::sqrt(r2) * std::sin(phi);

    Eigen::MatrixXd a(2, 2), c(2, 2); // d(X,Y)/d(u,phi) and d(u',phi')/d(X',Y')
    a << x / r2, -y, y / r2, x;
    c << xp, yp, -yp / rp2, xp / rp2;
    return a * (-Eigen::MatrixXd::Identity(2, 2)) * c;
}

SphereScenario make_sphere(double epsilon_hat, geom::JacobianMode mode) {
    if (!(epsilon_hat > 0.0 && epsilon_hat < kPi / 2))
        throw Error("epsilon_hat must lie in (0, pi/2)");

    SphereScenario sc;
    sc.epsilon_hat = epsilon_hat;
    const double z0 = -std::sin(epsilon_hat);

    sc.inputs.atlas = {make_chart_u(), make_chart_v()};

    geom::Chain chain;
    chain.source_chart = 1;
    chain.target_chart = 2;
    chain.params = {{"phi", 0.0, kTwoPi, true}};
    chain.orientation_sign = +1; // induced boundary orientation of U is +dphi
    chain.map = [z0](const geom::Point& p) {
        geom::Point m(2);
        m << p[0], z0;
        return m;
    };
    chain.membership = [](const geom::Point& m) { return std::abs(m[1]) < 1.0; };
    sc.inputs.chains = geom::build_overlap_chains(sc.inputs.atlas, {chain});

    const geom::Chart chart_u = sc.inputs.atlas[0];
    const geom::Chart chart_v = sc.inputs.atlas[1];
    geom::TransitionPhase phase;
    phase.source_chart = 1;
    phase.target_chart = 2;
    phase.eval = [chart_u, chart_v, mode](const geom::Point& m) {
        return geom::transition_phase_from_jacobian(chart_u, chart_v, m, mode,
                                                    sphere_r12_jacobian);
    };
    sc.inputs.phases = {phase};

    // Volume cells in (z, phi) order; omega = dphi ^ dz, so the plain coordinate
    // integral carries orientation sign +1.
    auto make_cell = [](int chart_id, double z_lo, double z_hi) {
        invariant::VolumeCell cell;
        cell.chart_id = chart_id;
        cell.region.n = 1;
        cell.region.bounds = {
            [z_lo, z_hi](const geom::Point&) { return std::make_pair(z_lo, z_hi); },
            [](const geom::Point&) { return std::make_pair(0.0, kTwoPi); }};
        cell.region.to_model = [](const geom::Point& c) {
            geom::Point m(2);
            m << c[1], c[0];
            return m;
        };
        return cell;
    };
    sc.inputs.volumes = {make_cell(1, z0, 1.0), make_cell(2, -1.0, z0)};

    sc.inputs.loop.flow = [](double t, const geom::Point& m) {
        geom::Point out(2);
        out << wrap_angle(m[0] + kTwoPi * t), m[1];
        return out;
    };
    sc.inputs.loop.inverse_flow = [](double t, const geom::Point& m) {
        geom::Point out(2);
        out << wrap_angle(m[0] - kTwoPi * t), m[1];
        return out;
    };
    sc.inputs.loop.hamiltonian = [](double, const geom::Point& m) { return -kTwoPi * m[1]; };
    sc.inputs.loop.linearization = [](int chart_id, double t, const geom::Point&) {
        return symp::SymplecticMatrix::rotation2(chart_id == 1 ? -kTwoPi * t : kTwoPi * t);
    };
    sc.inputs.loop.invariant_charts = {1, 2};
    sc.inputs.loop.autonomous = true;

    geom::Point pu(2), pv(2);
    pu << 0.3, 0.4;
    pv << 0.3, -0.4;
    sc.inputs.maslov_points = {{1, pu}, {2, pv}};

    sc.total_volume = 4.0 * kPi;
    sc.f_south_pole = kTwoPi; // f(0,0,-1) = 2 pi
    sc.expected = sphere_expected();

    // --- build-time certificates ---
    for (double z : {0.9, 0.1, -0.5}) {
        for (double phi : {0.0, 1.3, 4.0}) {
            geom::Point m(2);
            m << phi, z;
            const geom::Point back = sc.inputs.loop.flow(1.0, m);
            if (std::abs(wrap_angle(back[0] - m[0])) > 1e-9 &&
                std::abs(wrap_angle(back[0] - m[0]) - kTwoPi) > 1e-9)
                throw CertificateError("sphere loop fails to close");
            if (std::abs(back[1] - m[1]) > 1e-12)
                throw CertificateError("sphere loop does not preserve z (chart invariance)");
        }
    }
    const double expected_boundary = kTwoPi * std::sin(epsilon_hat);
    sc.boundary_constant =
        invariant::verify_boundary_constant(sc.inputs.chains[0].second, sc.inputs.loop);
    if (std::abs(sc.boundary_constant - expected_boundary) > 1e-9)
        throw CertificateError("sphere boundary constant differs from 2 pi sin(epsilon_hat)");
    // zero mean: int f omega = -2 pi int z dphi dz = 0 by oddness; cheap quadrature check
    {
        geom::Region whole;
        whole.n = 1;
        whole.bounds = {[](const geom::Point&) { return std::make_pair(-1.0, 1.0); },
                        [](const geom::Point&) { return std::make_pair(0.0, kTwoPi); }};
        whole.to_model = [](const geom::Point& c) {
            geom::Point m(2);
            m << c[1], c[0];
            return m;
        };
        const double mean = geom::integrate_volume(
            whole, [&](const geom::Point& m) { return sc.inputs.loop.hamiltonian(0.0, m); },
            geom::QuadratureSpec{});
        if (std::abs(mean) > 1e-8 * sc.total_volume)
            throw CertificateError("sphere Hamiltonian is not mean-zero");
    }
    return sc;
}

} // namespace hamloop::scenarios
