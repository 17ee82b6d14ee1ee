#include "hamloop/scenarios/torus.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace hamloop::scenarios {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGridSteps = 512;

/// Mean-free trigonometric polynomial on the torus.
struct TrigPoly {
    std::vector<Eigen::VectorXd> modes; // frequency vectors (integer entries)
    std::vector<double> c, s;

    double value(const Eigen::VectorXd& x) const {
        double v = 0.0;
        for (size_t k = 0; k < modes.size(); ++k) {
            const double a = kTwoPi * modes[k].dot(x);
            v += c[k] * std::cos(a) + s[k] * std::sin(a);
        }
        return v;
    }
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
        for (size_t k = 0; k < modes.size(); ++k) {
            const double a = kTwoPi * modes[k].dot(x);
            g += kTwoPi * (-c[k] * std::sin(a) + s[k] * std::cos(a)) * modes[k];
        }
        return g;
    }
    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
        for (size_t k = 0; k < modes.size(); ++k) {
            const double a = kTwoPi * modes[k].dot(x);
            h += kTwoPi * kTwoPi * (-c[k] * std::cos(a) - s[k] * std::sin(a)) *
                 (modes[k] * modes[k].transpose());
        }
        return h;
    }
};

Eigen::MatrixXd standard_j_interleaved(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        j(2 * a, 2 * a + 1) = 1.0;
        j(2 * a + 1, 2 * a) = -1.0;
    }
    return j;
}

Eigen::MatrixXd interleave_to_block(int n) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        p(a, 2 * a) = 1.0;
        p(n + a, 2 * a + 1) = 1.0;
    }
    return p;
}

using OdeState = std::vector<double>;

/// Flow map of +-X_g for |s| time units.
Eigen::VectorXd flow_point(const TrigPoly& g, const Eigen::MatrixXd& j, Eigen::VectorXd x,
                           double s) {
    namespace ode = boost::numeric::odeint;
    if (std::abs(s) < 1e-15) return x;
    const double sign = s > 0 ? 1.0 : -1.0;
    OdeState state(x.data(), x.data() + x.size());
    auto rhs = [&](const OdeState& y, OdeState& dy, double) {
        const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), (long)y.size());
        Eigen::VectorXd d = sign * (j * g.gradient(yv));
        dy.assign(d.data(), d.data() + d.size());
    };
    ode::integrate_adaptive(
        ode::make_controlled(1e-10, 1e-10, ode::runge_kutta_dopri5<OdeState>()), rhs, state, 0.0,
        std::abs(s), std::abs(s) / 64);
    return Eigen::Map<const Eigen::VectorXd>(state.data(), (long)state.size());
}

/// Dense-grid backward variational path from base point x:
/// y(s) = Phi_{-s}(x), Y(s) = D Phi_{-s}(x); evaluated by cubic Hermite.
struct VariationalPath {
    int dim = 0;
    std::vector<OdeState> states; // kGridSteps + 1 entries of (y, Y flattened)
    std::vector<OdeState> derivs;

    VariationalPath(const TrigPoly& g, const Eigen::MatrixXd& j, const Eigen::VectorXd& x) {
        namespace ode = boost::numeric::odeint;
        dim = (int)x.size();
        const int total = dim + dim * dim;
        OdeState state(total, 0.0);
        for (int i = 0; i < dim; ++i) state[i] = x[i];
        for (int i = 0; i < dim; ++i) state[dim + i * dim + i] = 1.0; // identity, col-major

        auto rhs = [&](const OdeState& st, OdeState& dst, double) {
            const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(st.data(), dim);
            const Eigen::MatrixXd yy =
                Eigen::Map<const Eigen::MatrixXd>(st.data() + dim, dim, dim);
            const Eigen::VectorXd dy = -(j * g.gradient(y));
            const Eigen::MatrixXd dyy = -(j * g.hessian(y)) * yy;
            dst.resize(st.size());
            Eigen::Map<Eigen::VectorXd>(dst.data(), dim) = dy;
            Eigen::Map<Eigen::MatrixXd>(dst.data() + dim, dim, dim) = dyy;
        };

        states.reserve(kGridSteps + 1);
        auto stepper = ode::make_dense_output(1e-10, 1e-10, ode::runge_kutta_dopri5<OdeState>());
        ode::integrate_const(stepper, rhs, state, 0.0, 1.0, 1.0 / kGridSteps,
                             [&](const OdeState& st, double) { states.push_back(st); });
        if ((int)states.size() != kGridSteps + 1)
            throw Error("torus variational integration produced an unexpected grid");
        derivs.resize(states.size());
        for (size_t i = 0; i < states.size(); ++i) rhs(states[i], derivs[i], 0.0);
    }

    Eigen::MatrixXd matrix_at(double s) const {
        s = std::min(std::max(s, 0.0), 1.0);
        const double h = 1.0 / kGridSteps;
        int i = std::min((int)(s / h), kGridSteps - 1);
        const double u = (s - i * h) / h;
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
        Eigen::MatrixXd out(dim, dim);
        for (int col = 0; col < dim; ++col)
            for (int row = 0; row < dim; ++row) {
                const int idx = dim + col * dim + row;
                out(row, col) = h00 * states[i][idx] + h01 * states[i + 1][idx] +
                                h * (h10 * derivs[i][idx] + h11 * derivs[i + 1][idx]);
            }
        return out;
    }
};

struct PathCache {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<VariationalPath>> paths;
};

std::string point_key(const geom::Point& x) {
    return std::string(reinterpret_cast<const char*>(x.data()), x.size() * sizeof(double));
}

} // namespace

TorusExpected torus_expected() { return TorusExpected{}; }

double torus_reparameterization(double t) { return 0.5 * (1.0 - std::cos(kTwoPi * t)); }

TorusScenario make_torus(int n, unsigned seed) {
    if (n < 1 || n > 4) throw Error("torus half-dimension must be in [1, 4]");

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> entry(-1, 1);
    std::uniform_real_distribution<double> coeff(-0.25, 0.25);

    auto g = std::make_shared<TrigPoly>();
    while (g->modes.size() < 3) {
        Eigen::VectorXd m(2 * n);
        for (int i = 0; i < 2 * n; ++i) m[i] = entry(rng);
        if (m.cwiseAbs().sum() < 0.5) continue;
        g->modes.push_back(m);
        g->c.push_back(coeff(rng));
        g->s.push_back(coeff(rng));
    }
    const Eigen::MatrixXd j = standard_j_interleaved(n);

    TorusScenario sc;
    sc.n = n;
    sc.seed = seed;
    sc.g = [g](const geom::Point& x) { return g->value(x); };
    sc.expected = torus_expected();

    geom::Chart chart;
    chart.id = 1;
    chart.n = n;
    for (int a = 0; a < n; ++a) {
        chart.params.push_back({"q" + std::to_string(a + 1), 0.0, 1.0, false});
        chart.params.push_back({"p" + std::to_string(a + 1), 0.0, 1.0, false});
    }
    chart.to_coords = [](const geom::Point& m) { return m; };
    chart.from_coords = [](const geom::Point& c) { return c; };
    sc.inputs.atlas = {chart};

    invariant::VolumeCell cell;
    cell.chart_id = 1;
    cell.region.n = n;
    for (int d = 0; d < 2 * n; ++d)
        cell.region.bounds.push_back([](const geom::Point&) { return std::make_pair(0.0, 1.0); });
    sc.inputs.volumes = {cell};

    sc.inputs.loop.autonomous = false;
    sc.inputs.loop.invariant_charts = {1};
    sc.inputs.loop.flow = [g, j](double t, const geom::Point& x) {
        return geom::Point(flow_point(*g, j, x, torus_reparameterization(t)));
    };
    sc.inputs.loop.inverse_flow = [g, j](double t, const geom::Point& x) {
        return geom::Point(flow_point(*g, j, x, -torus_reparameterization(t)));
    };
    sc.inputs.loop.hamiltonian = [g](double t, const geom::Point& x) {
        return std::numbers::pi * std::sin(kTwoPi * t) * g->value(x); // A'(t) g
    };

    auto cache = std::make_shared<PathCache>();
    const int block_n = n;
    sc.inputs.loop.linearization = [g, j, cache, block_n](int, double t, const geom::Point& x) {
        std::shared_ptr<VariationalPath> path;
        {
            std::lock_guard<std::mutex> lock(cache->mutex);
            auto& slot = cache->paths[point_key(x)];
            if (!slot) slot = std::make_shared<VariationalPath>(*g, j, x);
            path = slot;
        }
        const Eigen::MatrixXd p = interleave_to_block(block_n);
        return symp::SymplecticMatrix(p * path->matrix_at(torus_reparameterization(t)) *
                                          p.transpose(),
                                      1e-6);
    };

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 5; ++s) {
        geom::Point x(2 * n);
        for (int d = 0; d < 2 * n; ++d) x[d] = unit(rng);
        sc.sample_points.push_back(x);
    }
    sc.inputs.maslov_points = {{1, sc.sample_points[0]}};

    // certificates: the loop closes (A(1) = 0) and the linearization loop is closed
    for (const geom::Point& x : sc.sample_points) {
        if ((sc.inputs.loop.flow(1.0, x) - x).cwiseAbs().maxCoeff() > 1e-8)
            throw CertificateError("torus loop fails to close at t = 1");
    }
    const Eigen::MatrixXd l0 =
        sc.inputs.loop.linearization(1, 0.0, sc.sample_points[0]).entries();
    const Eigen::MatrixXd l1 =
        sc.inputs.loop.linearization(1, 1.0, sc.sample_points[0]).entries();
    if ((l0 - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() > 1e-8 ||
        (l1 - l0).cwiseAbs().maxCoeff() > 1e-8)
        throw CertificateError("torus linearization loop is not closed");

    return sc;
}

} // namespace hamloop::scenarios
