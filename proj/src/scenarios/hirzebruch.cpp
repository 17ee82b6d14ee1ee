#include "hamloop/scenarios/hirzebruch.hpp"

#include <algorithm>
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

struct Geometry {
    int k;
    double tau, mu, lambda;
    double u1_max() const { return mu / kTwoPi; }

    // rho_j from a model point (u_1, phi_1, u_2, phi_2); rho_3, rho_4 come from
    // the sphere constraints |z_3|^2 = mu/pi - rho_1^2,
    // |z_4|^2 = tau/pi - k rho_1^2 - rho_2^2.
    std::array<double, 4> radii_sq(const geom::Point& m) const {
        return {2.0 * m[0], 2.0 * m[2], mu / kPi - 2.0 * m[0],
                tau / kPi - 2.0 * k * m[0] - 2.0 * m[2]};
    }
};

geom::Chart make_chart0(const Geometry& g) {
    geom::Chart c;
    c.id = 0;
    c.n = 2;
    c.params = {{"u1", 0.0, g.u1_max(), false},
                {"phi1", 0.0, kTwoPi, true},
                {"u2", 0.0, g.tau / kTwoPi, false},
                {"phi2", 0.0, kTwoPi, true}};
    c.to_coords = [](const geom::Point& m) { return m; };
    c.from_coords = [](const geom::Point& x) { return x; };
    return c;
}

geom::Chart make_chart1(const Geometry& g, double eps) {
    geom::Chart c;
    c.id = 1;
    c.n = 2;
    c.params = {{"x1", -2 * eps, 2 * eps, false},
                {"y1", -2 * eps, 2 * eps, false},
                {"u2", 0.0, g.tau / kTwoPi, false},
                {"phi2", 0.0, kTwoPi, true}};
    c.to_coords = [](const geom::Point& m) {
        const double r = std::sqrt(2.0 * m[0]);
        geom::Point x(4);
        x << r * std::cos(m[1]), r * std::sin(m[1]), m[2], m[3];
        return x;
    };
    c.from_coords = [](const geom::Point& x) {
        geom::Point m(4);
        m << 0.5 * (x[0] * x[0] + x[1] * x[1]), wrap_angle(std::atan2(x[1], x[0])), x[2], x[3];
        return m;
    };
    return c;
}

geom::Chart make_chart2(const Geometry& g, double eps) {
    geom::Chart c;
    c.id = 2;
    c.n = 2;
    const double u3_cap = g.mu / kTwoPi;
    c.params = {{"a2", -2 * eps, 2 * eps, false},
                {"b2", -2 * eps, 2 * eps, false},
                {"u3", 0.0, u3_cap, false},
                {"xi3", 0.0, kTwoPi, true}};
    c.to_coords = [u3_cap](const geom::Point& m) {
        const double r = std::sqrt(2.0 * m[2]);
        geom::Point x(4);
        x << r * std::cos(m[3]), r * std::sin(m[3]), u3_cap - m[0], wrap_angle(-m[1]);
        return x;
    };
    c.from_coords = [u3_cap](const geom::Point& x) {
        geom::Point m(4);
        m << u3_cap - x[2], wrap_angle(-x[3]), 0.5 * (x[0] * x[0] + x[1] * x[1]),
            wrap_angle(std::atan2(x[1], x[0]));
        return m;
    };
    return c;
}

geom::Chart make_chart3(const Geometry& g, double eps) {
    geom::Chart c;
    c.id = 3;
    c.n = 2;
    const int k = g.k;
    const double u3_cap = g.mu / kTwoPi, u4_cap = g.tau / kTwoPi;
    c.params = {{"x3", -2 * eps, 2 * eps, false},
                {"y3", -2 * eps, 2 * eps, false},
                {"u4", 0.0, u4_cap, false},
                {"chi4", 0.0, kTwoPi, true}};
    c.to_coords = [k, u3_cap, u4_cap](const geom::Point& m) {
        const double u3 = u3_cap - m[0];
        const double chi3 = wrap_angle(-m[1] + k * m[3]);
        const double r = std::sqrt(2.0 * u3);
        geom::Point x(4);
        x << r * std::cos(chi3), r * std::sin(chi3), u4_cap - k * m[0] - m[2], wrap_angle(-m[3]);
        return x;
    };
    c.from_coords = [k, u3_cap, u4_cap](const geom::Point& x) {
        const double u3 = 0.5 * (x[0] * x[0] + x[1] * x[1]);
        const double u1 = u3_cap - u3;
        const double phi2 = wrap_angle(-x[3]);
        const double phi1 = wrap_angle(-std::atan2(x[1], x[0]) - k * x[3]);
        geom::Point m(4);
        m << u1, phi1, u4_cap - k * u1 - x[2], phi2;
        return m;
    };
    return c;
}

geom::Chart make_chart4(const Geometry& g, double eps) {
    geom::Chart c;
    c.id = 4;
    c.n = 2;
    const int k = g.k;
    const double u4_cap = g.tau / kTwoPi;
    c.params = {{"u1", 0.0, g.u1_max(), false},
                {"zeta1", 0.0, kTwoPi, true},
                {"a4", -2 * eps, 2 * eps, false},
                {"b4", -2 * eps, 2 * eps, false}};
    c.to_coords = [k, u4_cap](const geom::Point& m) {
        const double u4 = u4_cap - k * m[0] - m[2];
        const double zeta4 = wrap_angle(-m[3]);
        const double r = std::sqrt(2.0 * u4);
        geom::Point x(4);
        x << m[0], wrap_angle(m[1] - k * m[3]), r * std::cos(zeta4), r * std::sin(zeta4);
        return x;
    };
    c.from_coords = [k, u4_cap](const geom::Point& x) {
        const double phi2 = wrap_angle(-std::atan2(x[3], x[2]));
        geom::Point m(4);
        m << x[0], wrap_angle(x[1] + k * phi2),
            u4_cap - k * x[0] - 0.5 * (x[2] * x[2] + x[3] * x[3]), phi2;
        return m;
    };
    return c;
}

/// Chain A'_0j = {rho_j = eps, rho_r > eps for r != j}, oriented as a component
/// of the boundary of B_0 in the d(rho_1^2) ^ d(phi_1) ^ d(rho_2^2) ^ d(phi_2)
/// orientation.  The circle parameter is the angle whose transition phase winds.
geom::Chain make_chain(const Geometry& g, double eps, int j) {
    const double e2 = eps * eps;
    const int k = g.k;
    const double taup = g.tau / kPi, mup = g.mu / kPi, lamp = g.lambda / kPi;
    geom::Chain chain;
    chain.source_chart = 0;
    chain.target_chart = j;
    switch (j) {
        case 1:
            chain.params = {{"phi1", 0.0, kTwoPi, true},
                            {"u2", e2 / 2, (taup - (k + 1) * e2) / 2, false},
                            {"phi2", 0.0, kTwoPi, true}};
            chain.orientation_sign = -1; // inward-pointing du_1 at u_1 = eps^2/2
            chain.map = [e2](const geom::Point& p) {
                geom::Point m(4);
                m << e2 / 2, p[0], p[1], p[2];
                return m;
            };
            break;
        case 2:
            chain.params = {{"phi2", 0.0, kTwoPi, true},
                            {"u1", e2 / 2, std::min((mup - e2) / 2, (taup - 2 * e2) / (2 * k)),
                             false},
                            {"phi1", 0.0, kTwoPi, true}};
            chain.orientation_sign = -1;
            chain.map = [e2](const geom::Point& p) {
                geom::Point m(4);
                m << p[1], p[2], e2 / 2, p[0];
                return m;
            };
            break;
        case 3:
            chain.params = {{"phi1", 0.0, kTwoPi, true},
                            {"u2", e2 / 2, (lamp + (k - 1) * e2) / 2, false},
                            {"phi2", 0.0, kTwoPi, true}};
            chain.orientation_sign = +1; // outward du_1 at the u_1 ceiling
            chain.map = [e2, mup](const geom::Point& p) {
                geom::Point m(4);
                m << (mup - e2) / 2, p[0], p[1], p[2];
                return m;
            };
            break;
        case 4:
            chain.params = {{"phi2", 0.0, kTwoPi, true},
                            {"u1", e2 / 2, std::min((mup - e2) / 2, (taup - 2 * e2) / (2 * k)),
                             false},
                            {"phi1", 0.0, kTwoPi, true}};
            chain.orientation_sign = +1;
            chain.map = [e2, taup, k](const geom::Point& p) {
                geom::Point m(4);
                m << p[1], p[2], (taup - e2) / 2 - k * p[1], p[0];
                return m;
            };
            break;
        default:
            throw Error("invalid chain index");
    }
    chain.membership = [g, eps, j](const geom::Point& m) {
        const auto r2 = g.radii_sq(m);
        for (int r = 0; r < 4; ++r) {
            if (r + 1 == j) {
                if (std::abs(r2[r] - eps * eps) > 1e-7) return false;
            } else if (r2[r] <= eps * eps * (1.0 - 1e-9)) {
                return false;
            }
        }
        return true;
    };
    return chain;
}

std::vector<invariant::VolumeCell> make_volume_cells(const Geometry& g, double eps) {
    const double e2 = eps * eps;
    const int k = g.k;
    const double taup = g.tau / kPi, mup = g.mu / kPi, lamp = g.lambda / kPi;
    const double u3_cap = g.mu / kTwoPi, u4_cap = g.tau / kTwoPi;
    std::vector<invariant::VolumeCell> cells(5);
    auto circle = [](const geom::Point&) { return std::make_pair(0.0, kTwoPi); };

    // B_0 = {rho_j > eps for all j}, coordinates (u_1, phi_1, u_2, phi_2).
    cells[0].chart_id = 0;
    cells[0].region.n = 2;
    cells[0].region.bounds = {
        [e2, mup](const geom::Point&) { return std::make_pair(e2 / 2, (mup - e2) / 2); }, circle,
        [e2, taup, k](const geom::Point& prev) {
            return std::make_pair(e2 / 2, (taup - 2 * k * prev[0] - e2) / 2);
        },
        circle};
    cells[0].region.to_model = [](const geom::Point& c) { return c; };

    // B'_1 \ B_0 = {rho_1 <= eps} within B'_1; polar cell (r_1, theta_1, u_2, phi_2).
    cells[1].chart_id = 1;
    cells[1].region.n = 2;
    cells[1].region.bounds = {
        [eps](const geom::Point&) { return std::make_pair(0.0, eps); }, circle,
        [e2, taup, k](const geom::Point& prev) {
            return std::make_pair(e2 / 2, (taup - k * prev[0] * prev[0] - e2) / 2);
        },
        circle};
    cells[1].region.density = [](const geom::Point& c) { return c[0]; };
    cells[1].region.to_model = [](const geom::Point& c) {
        geom::Point m(4);
        m << 0.5 * c[0] * c[0], c[1], c[2], c[3];
        return m;
    };

    // B'_2 \ (B_0 u B'_1) = {rho_2 <= eps, rho_1 >= 2 eps, rho_3, rho_4 > eps}.
    cells[2].chart_id = 2;
    cells[2].region.n = 2;
    cells[2].region.bounds = {
        [eps](const geom::Point&) { return std::make_pair(0.0, eps); }, circle,
        [e2, mup, taup, k](const geom::Point& prev) {
            return std::make_pair(2 * e2,
                                  std::min((mup - e2) / 2,
                                           (taup - prev[0] * prev[0] - e2) / (2 * k)));
        },
        circle};
    cells[2].region.density = [](const geom::Point& c) { return c[0]; };
    cells[2].region.to_model = [](const geom::Point& c) {
        geom::Point m(4);
        m << c[2], c[3], 0.5 * c[0] * c[0], c[1];
        return m;
    };

    // B'_3 \ earlier = {rho_3 <= eps, rho_1, rho_2, rho_4 > eps};
    // cell (r_3, theta_3, u_4, chi_4).
    cells[3].chart_id = 3;
    cells[3].region.n = 2;
    cells[3].region.bounds = {
        [eps](const geom::Point&) { return std::make_pair(0.0, eps); }, circle,
        [e2, lamp, k](const geom::Point& prev) {
            return std::make_pair(e2 / 2, (lamp + k * prev[0] * prev[0] - e2) / 2);
        },
        circle};
    cells[3].region.density = [](const geom::Point& c) { return c[0]; };
    cells[3].region.to_model = [u3_cap, u4_cap, k](const geom::Point& c) {
        const double u1 = u3_cap - 0.5 * c[0] * c[0];
        geom::Point m(4);
        m << u1, wrap_angle(-c[1] - k * c[3]), u4_cap - k * u1 - c[2], wrap_angle(-c[3]);
        return m;
    };

    // B'_4 \ earlier = {rho_4 <= eps, rho_1, rho_2, rho_3 > eps};
    // cell (r_4, theta_4, u_1, zeta_1).
    cells[4].chart_id = 4;
    cells[4].region.n = 2;
    cells[4].region.bounds = {
        [eps](const geom::Point&) { return std::make_pair(0.0, eps); }, circle,
        [e2, mup, taup, k](const geom::Point& prev) {
            return std::make_pair(e2 / 2,
                                  std::min((mup - e2) / 2,
                                           (taup - prev[0] * prev[0] - e2) / (2 * k)));
        },
        circle};
    cells[4].region.density = [](const geom::Point& c) { return c[0]; };
    cells[4].region.to_model = [u4_cap, k](const geom::Point& c) {
        const double phi2 = wrap_angle(-c[1]);
        geom::Point m(4);
        m << c[2], wrap_angle(c[3] + k * phi2), u4_cap - k * c[2] - 0.5 * c[0] * c[0], phi2;
        return m;
    };
    return cells;
}

invariant::HamiltonianLoopModel make_loop(const Geometry& g, bool tilde, double kappa_d) {
    invariant::HamiltonianLoopModel loop;
    loop.autonomous = true;
    loop.invariant_charts = {0, 1, 2, 3, 4};
    const int angle_idx = tilde ? 3 : 1;
    const int action_idx = tilde ? 2 : 0;
    loop.flow = [angle_idx](double t, const geom::Point& m) {
        geom::Point out = m;
        out[angle_idx] = wrap_angle(out[angle_idx] + kTwoPi * t);
        return out;
    };
    loop.inverse_flow = [angle_idx](double t, const geom::Point& m) {
        geom::Point out = m;
        out[angle_idx] = wrap_angle(out[angle_idx] - kTwoPi * t);
        return out;
    };
    loop.hamiltonian = [action_idx, kappa_d](double, const geom::Point& m) {
        return kTwoPi * m[action_idx] - kappa_d;
    };
    const int k = g.k;
    loop.linearization = [tilde, k](int chart_id, double t, const geom::Point&) {
        using symp::SymplecticMatrix;
        const SymplecticMatrix id1 = SymplecticMatrix::identity(1);
        auto rot_first = [&](double theta) {
            return SymplecticMatrix::direct_sum(SymplecticMatrix::rotation2(theta), id1);
        };
        if (!tilde) {
            // psi rotates phi_1; it acts on the angular pair of B'_1 (phi_1) and
            // B'_3 (chi_3 = -phi_1 + k phi_2) and translates everything else.
            switch (chart_id) {
                case 1: return rot_first(-kTwoPi * t);
                case 3: return rot_first(kTwoPi * t);
                default: return SymplecticMatrix::identity(2);
            }
        }
        switch (chart_id) {
            case 2: return rot_first(-kTwoPi * t);
            case 3: return rot_first(-kTwoPi * k * t);
            case 4:
                return SymplecticMatrix::direct_sum(id1, SymplecticMatrix::rotation2(kTwoPi * t));
            default: return SymplecticMatrix::identity(2);
        }
    };
    return loop;
}

std::map<int, geom::Point> make_maslov_points(const Geometry& g, double eps) {
    const double e2 = eps * eps;
    const int k = g.k;
    const double taup = g.tau / kPi, mup = g.mu / kPi;
    auto mid_u2 = [&](double u1) { return 0.25 * (taup - 2 * k * u1); };
    const double u1_mid = mup / 4;

    std::map<int, geom::Point> pts;
    geom::Point m(4);
    m << u1_mid, 0.9, mid_u2(u1_mid), 2.1;
    pts[0] = m;
    m << e2 / 8, 0.4, mid_u2(0.0), 1.0;
    pts[1] = m;
    m << u1_mid, 0.4, e2 / 8, 1.0;
    pts[2] = m;
    {
        const double u1 = (mup - e2 / 4) / 2; // rho_3 = eps/2
        m << u1, 0.4, 0.5 * (e2 / 2 + (taup - 2 * k * u1 - e2) / 2), 1.0;
        pts[3] = m;
    }
    m << u1_mid, 0.4, (taup - e2 / 4) / 2 - k * u1_mid, 1.0; // rho_4 = eps/2
    pts[4] = m;
    return pts;
}

} // namespace

HirzebruchExpected hirzebruch_expected(const HirzebruchParams& params) {
    const toric::DelzantTrapezoid trap(params.k, params.tau, params.mu);
    HirzebruchExpected e;
    e.kappa = toric::kappa(trap);
    e.kappa_tilde = toric::kappa_tilde(trap);
    e.terms = toric::boundary_terms(trap);
    e.terms_tilde = toric::boundary_terms_tilde(trap);
    std::tie(e.i_psi, e.i_psi_tilde) = toric::closed_form_invariants(trap);
    e.ratio = toric::ExactValue(-params.k) / 2;
    e.chern = 2 * trap.lambda() + (params.k + 2) * params.mu;
    e.maslov_tilde[3] = params.k;
    return e;
}

Eigen::MatrixXd hirzebruch_r01_jacobian(const geom::Point& c) {
    const double x = c[0], y = c[1], r2 = x * x + y * y;
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(4, 4);
    j(0, 0) = x;
    j(0, 1) = y;
    j(1, 0) = -y / r2;
    j(1, 1) = x / r2;
    return j;
}

Eigen::MatrixXd hirzebruch_r02_jacobian(const geom::Point& c) {
    const double a = c[0], b = c[1], r2 = a * a + b * b;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
    j(0, 2) = -1.0; // u_1 = mu/2pi - u_3
    j(1, 3) = -1.0; // phi_1 = -xi_3
    j(2, 0) = a;    // u_2 = (a_2^2 + b_2^2)/2
    j(2, 1) = b;
    j(3, 0) = -b / r2; // phi_2 = atan2(b_2, a_2)
    j(3, 1) = a / r2;
    return j;
}

HirzebruchScenario make_hirzebruch(const HirzebruchParams& params, double epsilon,
                                   bool r01_finite_difference) {
    const toric::DelzantTrapezoid trap(params.k, params.tau, params.mu);
    Geometry g{params.k, toric::to_double(params.tau), toric::to_double(params.mu),
               toric::to_double(trap.lambda())};
    const double e2 = epsilon * epsilon;
    if (!(epsilon > 0) || (g.mu / kPi - e2) / 2 <= e2 / 2 ||
        (g.lambda / kPi + (g.k - 1) * e2) / 2 <= e2 / 2 ||
        (g.tau / kPi - (g.k + 1) * e2) / 2 <= e2 / 2)
        throw Error("epsilon too large for these Hirzebruch parameters");

    HirzebruchScenario sc;
    sc.params = params;
    sc.epsilon = epsilon;
    sc.expected = hirzebruch_expected(params);

    std::vector<geom::Chart> atlas = {make_chart0(g), make_chart1(g, epsilon),
                                      make_chart2(g, epsilon), make_chart3(g, epsilon),
                                      make_chart4(g, epsilon)};
    std::vector<geom::Chain> chains;
    for (int j = 1; j <= 4; ++j) chains.push_back(make_chain(g, epsilon, j));

    sc.psi.atlas = atlas;
    sc.psi.chains = geom::build_overlap_chains(atlas, chains);

    for (int j = 1; j <= 4; ++j) {
        geom::TransitionPhase phase;
        phase.source_chart = 0;
        phase.target_chart = j;
        const geom::Chart c0 = atlas[0], cj = atlas[j];
        if (j == 1 && !r01_finite_difference) {
            phase.eval = [c0, cj](const geom::Point& m) {
                return geom::transition_phase_from_jacobian(c0, cj, m,
                                                            geom::JacobianMode::ClosedForm,
                                                            hirzebruch_r01_jacobian);
            };
        } else {
            phase.eval = [c0, cj](const geom::Point& m) {
                return geom::transition_phase_from_jacobian(c0, cj, m,
                                                            geom::JacobianMode::FiniteDifference);
            };
        }
        sc.psi.phases.push_back(phase);
    }
    sc.psi.volumes = make_volume_cells(g, epsilon);
    sc.psi.maslov_points = make_maslov_points(g, epsilon);
    sc.psi.loop = make_loop(g, false, toric::to_double(sc.expected.kappa));

    sc.psi_tilde = sc.psi;
    sc.psi_tilde.loop = make_loop(g, true, toric::to_double(sc.expected.kappa_tilde));

    // --- build-time certificates ---
    if (toric::kappa(trap) != toric::kappa_from_moment_ratio(trap) ||
        toric::kappa_tilde(trap) != toric::kappa_tilde_from_moment_ratio(trap))
        throw CertificateError("normalization constants disagree with the moment-map means");
    for (const auto& [id, pt] : sc.psi.maslov_points) {
        for (const invariant::HamiltonianLoopModel* loop : {&sc.psi.loop, &sc.psi_tilde.loop}) {
            const geom::Point closed = loop->flow(1.0, pt);
            for (int d = 0; d < 4; ++d) {
                double diff = std::abs(closed[d] - pt[d]);
                if (d == 1 || d == 3) diff = std::min(diff, std::abs(diff - kTwoPi));
                if (diff > 1e-9) throw CertificateError("Hirzebruch loop fails to close");
            }
            // actions are preserved, so every chart is flow-invariant
            if (std::abs(loop->flow(0.37, pt)[0] - pt[0]) > 1e-12 ||
                std::abs(loop->flow(0.37, pt)[2] - pt[2]) > 1e-12)
                throw CertificateError("Hirzebruch loop does not preserve the actions");
        }
        // chart point round-trip
        const geom::Chart& chart = atlas[static_cast<size_t>(id)];
        const geom::Point rt = chart.from_coords(chart.to_coords(pt));
        for (int d = 0; d < 4; ++d) {
            double diff = std::abs(rt[d] - pt[d]);
            if (d == 1 || d == 3) diff = std::min(diff, std::abs(diff - kTwoPi));
            if (diff > 1e-9) throw CertificateError("Hirzebruch chart round-trip failed");
        }
    }
    return sc;
}

HirzebruchLadderRun run_hirzebruch_ladder(const HirzebruchParams& params,
                                          std::vector<double> ladder,
                                          const geom::QuadratureSpec& spec) {
    if (ladder.empty() || !std::is_sorted(ladder.rbegin(), ladder.rend()))
        throw Error("epsilon ladder must be non-empty and strictly decreasing");

    HirzebruchLadderRun run;
    run.params = params;
    run.epsilons = ladder;
    run.expected = hirzebruch_expected(params);

    for (double eps : ladder) {
        const HirzebruchScenario sc = make_hirzebruch(params, eps);
        run.psi_reports.push_back(invariant::compute_invariant(sc.psi, spec));
        run.psi_tilde_reports.push_back(invariant::compute_invariant(sc.psi_tilde, spec));
        if (eps == ladder.back())
            run.chern = invariant::chern_pairing(sc.psi.chains, sc.psi.phases, 2, spec);
    }

    // The tube contributions converge at measured order eps^2 (the boundary
    // chains sit at u = eps^2/2), so the ladder is fit linearly in eps^2.
    std::vector<double> eps_sq;
    for (double e : ladder) eps_sq.push_back(e * e);
    std::vector<double> totals, totals_tilde;
    for (const auto& r : run.psi_reports) totals.push_back(r.total);
    for (const auto& r : run.psi_tilde_reports) totals_tilde.push_back(r.total);
    run.i_psi = invariant::extrapolate_linear(eps_sq, totals);
    run.i_psi_tilde = invariant::extrapolate_linear(eps_sq, totals_tilde);
    for (int j = 0; j < 4; ++j) {
        std::vector<double> vals, vals_tilde;
        for (const auto& r : run.psi_reports) vals.push_back(r.pair_terms[j].value);
        for (const auto& r : run.psi_tilde_reports) vals_tilde.push_back(r.pair_terms[j].value);
        run.terms[j] = invariant::extrapolate_linear(eps_sq, vals);
        run.terms_tilde[j] = invariant::extrapolate_linear(eps_sq, vals_tilde);
    }
    return run;
}

} // namespace hamloop::scenarios
