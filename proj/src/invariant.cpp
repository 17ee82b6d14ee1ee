#include "hamloop/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hamloop::invariant {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXd interleave_to_block(int n) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        p(a, 2 * a) = 1.0;
        p(n + a, 2 * a + 1) = 1.0;
    }
    return p;
}

double wrap_angle_diff(double d) {
    while (d > std::numbers::pi) d -= kTwoPi;
    while (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

/// int_0^1 f_t(psi_t(x)) dt, collapsed for autonomous loops.
double time_averaged_hamiltonian(const HamiltonianLoopModel& loop, const Point& x, int t_order) {
    if (loop.autonomous) return loop.hamiltonian(0.0, x);
    std::vector<double> nodes, weights;
    geom::gauss_legendre(t_order, nodes, weights);
    double acc = 0.0;
    for (int q = 0; q < t_order; ++q) {
        const double t = 0.5 * (nodes[q] + 1.0);
        acc += 0.5 * weights[q] * loop.hamiltonian(t, loop.flow(t, x));
    }
    return acc;
}

} // namespace

double chern_pairing(const std::vector<std::pair<std::pair<int, int>, Chain>>& chains,
                     std::span<const TransitionPhase> phases, int n, const QuadratureSpec& spec) {
    if (chains.size() != phases.size())
        throw Error("chern_pairing: chains and phases are misaligned");
    double total = 0.0;
    for (size_t c = 0; c < chains.size(); ++c)
        total += geom::integrate_weighted_phase_form(
            chains[c].second, [](const Point&) { return 1.0; }, phases[c], n - 1, spec);
    return total / kTwoPi;
}

InvariantReport compute_invariant(const InvariantInputs& inputs, const QuadratureSpec& spec,
                                  int t_order, bool with_error_estimate) {
    if (inputs.chains.size() != inputs.phases.size())
        throw Error("compute_invariant: chains and phases are misaligned");

    InvariantReport report;
    report.n = inputs.atlas.empty() ? 1 : inputs.atlas.front().n;
    const int n = report.n;

    for (const Chart& chart : inputs.atlas) {
        if (std::find(inputs.loop.invariant_charts.begin(), inputs.loop.invariant_charts.end(),
                      chart.id) == inputs.loop.invariant_charts.end())
            throw MissingInvarianceCertificateError("chart " + std::to_string(chart.id) +
                                                    " lacks a flow-invariance certificate");

        const auto base_it = inputs.maslov_points.find(chart.id);
        if (base_it == inputs.maslov_points.end())
            throw Error("no Maslov base point for chart " + std::to_string(chart.id));
        const Point base = base_it->second;
        const auto& loop = inputs.loop;
        symp::MatrixLoop matrix_loop = [&loop, id = chart.id, base](double t) {
            return loop.linearization(id, t, base);
        };

        ChartTerm term;
        term.chart_id = chart.id;
        term.maslov = symp::maslov_index(matrix_loop, spec.circle_samples);

        const auto cell_it =
            std::find_if(inputs.volumes.begin(), inputs.volumes.end(),
                         [&](const VolumeCell& v) { return v.chart_id == chart.id; });
        if (cell_it == inputs.volumes.end())
            throw Error("no volume cell for chart " + std::to_string(chart.id));
        term.volume = geom::integrate_volume(cell_it->region, nullptr, spec);
        term.contribution = term.maslov.index * term.volume;
        report.chart_terms.push_back(std::move(term));
    }

    std::vector<double> t_nodes{0.0}, t_weights{1.0};
    if (!inputs.loop.autonomous) {
        geom::gauss_legendre(t_order, t_nodes, t_weights);
        for (int q = 0; q < t_order; ++q) {
            t_nodes[q] = 0.5 * (t_nodes[q] + 1.0);
            t_weights[q] *= 0.5;
        }
    }

    for (size_t c = 0; c < inputs.chains.size(); ++c) {
        const auto& [pair, chain] = inputs.chains[c];
        PairTerm term;
        term.i = pair.first;
        term.k = pair.second;
        double acc = 0.0;
        for (size_t q = 0; q < t_nodes.size(); ++q) {
            const double t = t_nodes[q];
            const auto& loop = inputs.loop;
            auto weight = [&loop, t](const Point& x) {
                return loop.hamiltonian(t, loop.flow(t, x));
            };
            acc += t_weights[q] *
                   geom::integrate_weighted_phase_form(chain, weight, inputs.phases[c], n - 1, spec);
        }
        term.value = -(n / kTwoPi) * acc;
        report.pair_terms.push_back(term);
    }

    report.total = 0.0;
    for (const ChartTerm& t : report.chart_terms) report.total += t.contribution;
    for (const PairTerm& t : report.pair_terms) report.total += t.value;

    if (with_error_estimate) {
        const InvariantReport coarse =
            compute_invariant(inputs, spec.halved(), std::max(2, t_order / 2), false);
        report.error_estimate = std::abs(report.total - coarse.total);
    }
    return report;
}

double corollary_two_charts(int j_u, int j_v, double vol_u, double vol_v_minus_u, int n,
                            double k_const, double chern) {
    return j_u * vol_u + j_v * vol_v_minus_u - n * k_const * chern;
}

double corollary_punctured(int j_u, double total_volume, int n, double f_at_q_integral,
                           double chern) {
    return j_u * total_volume - n * f_at_q_integral * chern;
}

double verify_boundary_constant(const Chain& chain, const HamiltonianLoopModel& loop, int samples,
                                int t_order, double rel_tol) {
    const int dim = static_cast<int>(chain.params.size());
    double lo = 0.0, hi = 0.0, mean = 0.0;
    for (int s = 0; s < samples; ++s) {
        Point params(dim);
        for (int d = 0; d < dim; ++d) {
            const double frac = (s + 0.5 + 0.37 * d) / samples;
            params[d] = chain.params[d].lo +
                        (chain.params[d].hi - chain.params[d].lo) * (frac - std::floor(frac));
        }
        const double v = time_averaged_hamiltonian(loop, chain.map(params), t_order);
        if (s == 0) {
            lo = hi = v;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        mean += v;
    }
    mean /= samples;
    const double scale = std::max(1.0, std::abs(mean));
    if ((hi - lo) / scale > rel_tol)
        throw NonConstantBoundaryHamiltonianError(
            "time-averaged Hamiltonian varies along the boundary chain: spread " +
            std::to_string(hi - lo));
    return mean;
}

IntegrableResult integrable_invariant(
    const std::vector<std::pair<Chain, TransitionPhase>>& tubular_chain_data,
    const std::function<double(const Point&)>& f, int n, const QuadratureSpec& spec) {
    IntegrableResult result;
    for (const auto& [chain, phase] : tubular_chain_data) {
        result.chern_sum += geom::integrate_weighted_phase_form(
                                chain, [](const Point&) { return 1.0; }, phase, n - 1, spec) /
                            kTwoPi;
        result.i_psi +=
            -(n / kTwoPi) * geom::integrate_weighted_phase_form(chain, f, phase, n - 1, spec);
    }
    return result;
}

symp::SymplecticMatrix fd_linearization(const Chart& chart, const HamiltonianLoopModel& loop,
                                        double t, const Point& model_point, double step) {
    const int dim = 2 * chart.n;
    const Point x = chart.to_coords(model_point);
    Eigen::MatrixXd jac(dim, dim);
    for (int c = 0; c < dim; ++c) {
        Point plus = x, minus = x;
        plus[c] += step;
        minus[c] -= step;
        const Point y_plus = chart.to_coords(loop.inverse_flow(t, chart.from_coords(plus)));
        const Point y_minus = chart.to_coords(loop.inverse_flow(t, chart.from_coords(minus)));
        for (int r = 0; r < dim; ++r) {
            double d = y_plus[r] - y_minus[r];
            if (chart.params[r].periodic) d = wrap_angle_diff(d);
            jac(r, c) = d / (2.0 * step);
        }
    }
    const Eigen::MatrixXd p = interleave_to_block(chart.n);
    return symp::SymplecticMatrix(p * jac * p.transpose(), 1e-5);
}

double extrapolate_linear(std::span<const double> epsilons, std::span<const double> values) {
    if (epsilons.size() != values.size() || epsilons.empty())
        throw Error("extrapolate_linear: need matching, non-empty samples");
    const size_t m = epsilons.size();
    if (m == 1) return values[0];
    double se = 0.0, sv = 0.0, see = 0.0, sev = 0.0;
    for (size_t i = 0; i < m; ++i) {
        se += epsilons[i];
        sv += values[i];
        see += epsilons[i] * epsilons[i];
        sev += epsilons[i] * values[i];
    }
    const double denom = m * see - se * se;
    const double slope = (m * sev - se * sv) / denom;
    return (sv - slope * se) / m;
}

} // namespace hamloop::invariant
