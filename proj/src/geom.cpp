#include "hamloop/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hamloop::geom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFdStep = 1e-6;
constexpr double kFdSymplecticTol = 1e-5;

double wrap_angle_diff(double d) {
    while (d > std::numbers::pi) d -= kTwoPi;
    while (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

double arg_increment(Complex a, Complex b) { return std::arg(b / a); }

/// Permutation from interleaved (q1,p1,q2,p2,...) coordinate order to the
/// (q1..qn, p1..pn) block order used by SymplecticMatrix.
Eigen::MatrixXd interleave_to_block(int n) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        p(a, 2 * a) = 1.0;
        p(n + a, 2 * a + 1) = 1.0;
    }
    return p;
}

struct CellGrid {
    std::vector<double> nodes;   // flattened: point index -> param values
    std::vector<double> weights; // product GL weights
    int dim = 0;
    size_t size = 0;

    double node(size_t pt, int d) const { return nodes[pt * dim + d]; }
};

/// Tensor-product Gauss-Legendre grid over fixed (non-dependent) parameter
/// intervals, each split into `cells` equal subintervals.
CellGrid tensor_grid(const std::vector<Param>& params, const QuadratureSpec& spec) {
    std::vector<double> gl_nodes, gl_weights;
    gauss_legendre(spec.gauss_order, gl_nodes, gl_weights);
    const int dim = static_cast<int>(params.size());
    const int per_dim = spec.cells * spec.gauss_order;

    std::vector<std::vector<double>> axis_nodes(dim), axis_weights(dim);
    for (int d = 0; d < dim; ++d) {
        const double lo = params[d].lo, hi = params[d].hi;
        const double cell_w = (hi - lo) / spec.cells;
        for (int c = 0; c < spec.cells; ++c) {
            const double a = lo + c * cell_w;
            for (int k = 0; k < spec.gauss_order; ++k) {
                axis_nodes[d].push_back(a + 0.5 * cell_w * (gl_nodes[k] + 1.0));
                axis_weights[d].push_back(0.5 * cell_w * gl_weights[k]);
            }
        }
    }

    CellGrid grid;
    grid.dim = dim;
    grid.size = 1;
    for (int d = 0; d < dim; ++d) grid.size *= static_cast<size_t>(per_dim);
    grid.nodes.resize(grid.size * std::max(dim, 1));
    grid.weights.assign(grid.size, 1.0);
    for (size_t pt = 0; pt < grid.size; ++pt) {
        size_t rem = pt;
        for (int d = dim - 1; d >= 0; --d) {
            const size_t idx = rem % per_dim;
            rem /= per_dim;
            grid.nodes[pt * dim + d] = axis_nodes[d][idx];
            grid.weights[pt] *= axis_weights[d][idx];
        }
    }
    return grid;
}

} // namespace

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 2) throw Error("Gauss-Legendre order must be >= 2");
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        t(k, k - 1) = b;
        t(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    nodes.resize(order);
    weights.resize(order);
    for (int k = 0; k < order; ++k) {
        nodes[k] = solver.eigenvalues()[k];
        const double v0 = solver.eigenvectors()(0, k);
        weights[k] = 2.0 * v0 * v0;
    }
}

void apply_thread_cap() {
#ifdef _OPENMP
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (const char* env = std::getenv("HAMLOOP_THREADS")) {
            const int cap = std::atoi(env);
            if (cap > 0) omp_set_num_threads(std::min(cap, omp_get_max_threads()));
        }
    });
#endif
}

Eigen::MatrixXd transition_jacobian_fd(const Chart& chart_i, const Chart& chart_j,
                                       const Point& model_point, double step) {
    const int dim = 2 * chart_j.n;
    const Point xj = chart_j.to_coords(model_point);
    Eigen::MatrixXd jac(dim, dim);
    for (int c = 0; c < dim; ++c) {
        Point plus = xj, minus = xj;
        plus[c] += step;
        minus[c] -= step;
        const Point yi_plus = chart_i.to_coords(chart_j.from_coords(plus));
        const Point yi_minus = chart_i.to_coords(chart_j.from_coords(minus));
        for (int r = 0; r < dim; ++r) {
            double d = yi_plus[r] - yi_minus[r];
            if (chart_i.params[r].periodic) d = wrap_angle_diff(d);
            jac(r, c) = d / (2.0 * step);
        }
    }
    return jac;
}

Complex transition_phase_from_jacobian(
    const Chart& chart_i, const Chart& chart_j, const Point& model_point, JacobianMode mode,
    const std::function<Eigen::MatrixXd(const Point& coords_j)>& closed_form_jacobian) {
    const int n = chart_i.n;
    Eigen::MatrixXd jac;
    double tol = symp::kSymplecticTol;
    if (mode == JacobianMode::ClosedForm) {
        if (!closed_form_jacobian)
            throw Error("closed-form mode requested without a closed-form Jacobian");
        jac = closed_form_jacobian(chart_j.to_coords(model_point));
    } else {
        jac = transition_jacobian_fd(chart_i, chart_j, model_point, kFdStep);
        tol = kFdSymplecticTol;
    }
    const Eigen::MatrixXd p = interleave_to_block(n);
    Eigen::MatrixXd block = p * jac * p.transpose();
    try {
        symp::SymplecticMatrix m(std::move(block), tol);
        return symp::rho(m);
    } catch (const NonSymplecticError& e) {
        throw NonSymplecticJacobianError(std::string("coordinate change is not symplectic: ") +
                                         e.what());
    }
}

double integrate_weighted_phase_form(const Chain& chain,
                                     const std::function<double(const Point&)>& weight,
                                     const TransitionPhase& phase, int /*power*/,
                                     const QuadratureSpec& spec) {
    apply_thread_cap();
    if (chain.params.empty()) throw Error("chain has no parameters");
    const Param circle = chain.params[0];
    const std::vector<Param> transverse(chain.params.begin() + 1, chain.params.end());
    const CellGrid grid =
        transverse.empty() ? CellGrid{{}, {1.0}, 0, 1} : tensor_grid(transverse, spec);

    const int dim = static_cast<int>(chain.params.size());

    auto eval_phase = [&](Point params) -> Complex {
        for (int attempt = 0;; ++attempt) {
            try {
                Complex v = phase.eval(chain.map(params));
                return v / std::abs(v);
            } catch (const DegenerateSpectrumError&) {
                if (attempt >= 3) throw;
                params[0] += 1e-9 * (circle.hi - circle.lo) * (attempt + 1);
            }
        }
    };

    std::vector<double> cell_values(grid.size, 0.0);
    bool failed = false;
    std::string failure;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long pt = 0; pt < static_cast<long long>(grid.size); ++pt) {
        if (failed) continue;
        try {
            Point params(dim);
            for (int d = 0; d < grid.dim; ++d) params[1 + d] = grid.node(pt, d);
            params[0] = circle.lo;

            const double density = chain.form_density ? chain.form_density(params) : 1.0;

            // Sample the phase along the circle direction, refining any interval
            // with a step >= pi/2.
            struct CSample {
                double c;
                Complex v;
            };
            std::vector<CSample> samples;
            samples.reserve(static_cast<size_t>(spec.circle_samples) + 1);
            for (int i = 0; i <= spec.circle_samples; ++i) {
                const double c =
                    circle.lo + (circle.hi - circle.lo) * static_cast<double>(i) / spec.circle_samples;
                params[0] = c;
                samples.push_back({c, eval_phase(params)});
            }
            for (int depth = 0; depth < spec.max_refine_depth; ++depth) {
                std::vector<CSample> refined;
                refined.reserve(samples.size());
                bool any = false;
                for (size_t i = 0; i + 1 < samples.size(); ++i) {
                    refined.push_back(samples[i]);
                    if (std::abs(arg_increment(samples[i].v, samples[i + 1].v)) >=
                        std::numbers::pi / 2) {
                        any = true;
                        const double cm = 0.5 * (samples[i].c + samples[i + 1].c);
                        params[0] = cm;
                        refined.push_back({cm, eval_phase(params)});
                    }
                }
                refined.push_back(samples.back());
                samples.swap(refined);
                if (!any) break;
            }
            double inner = 0.0;
            for (size_t i = 0; i + 1 < samples.size(); ++i) {
                const double step = arg_increment(samples[i].v, samples[i + 1].v);
                if (std::abs(step) >= std::numbers::pi / 2)
                    throw InsufficientResolutionError("phase step >= pi/2 on chain circle");
                params[0] = 0.5 * (samples[i].c + samples[i + 1].c);
                inner += weight(chain.map(params)) * step;
            }
            cell_values[pt] = grid.weights[pt] * density * inner;
        } catch (const Error& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw InsufficientResolutionError(failure);

    // fixed reduction order: deterministic for any thread count
    double total = 0.0;
    for (size_t pt = 0; pt < grid.size; ++pt) total += cell_values[pt];
    return chain.orientation_sign * total;
}

namespace {

double volume_recurse(const Region& region, const std::function<double(const Point&)>& weight,
                      const std::vector<double>& gl_nodes, const std::vector<double>& gl_weights,
                      int cells, Point& coords, int level) {
    const int dim = static_cast<int>(region.bounds.size());
    const Point prev = coords.head(level);
    const auto [lo, hi] = region.bounds[level](prev);
    if (!(hi > lo)) return 0.0;
    const double cell_w = (hi - lo) / cells;
    double total = 0.0;
    for (int c = 0; c < cells; ++c) {
        const double a = lo + c * cell_w;
        for (size_t k = 0; k < gl_nodes.size(); ++k) {
            coords[level] = a + 0.5 * cell_w * (gl_nodes[k] + 1.0);
            const double w = 0.5 * cell_w * gl_weights[k];
            if (level + 1 == dim) {
                double f = region.density ? region.density(coords) : 1.0;
                if (weight) {
                    const Point mp = region.to_model ? region.to_model(coords) : coords;
                    f *= weight(mp);
                }
                total += w * f;
            } else {
                total += w * volume_recurse(region, weight, gl_nodes, gl_weights, cells, coords,
                                            level + 1);
            }
        }
    }
    return total;
}

} // namespace

double integrate_volume(const Region& region, const std::function<double(const Point&)>& weight,
                        const QuadratureSpec& spec) {
    apply_thread_cap();
    const int dim = static_cast<int>(region.bounds.size());
    if (dim == 0) throw Error("region has no parameters");
    std::vector<double> gl_nodes, gl_weights;
    gauss_legendre(spec.gauss_order, gl_nodes, gl_weights);

    // parallel over the outermost parameter's nodes, reduced in index order
    const auto [lo, hi] = region.bounds[0](Point(0));
    const int per_dim = spec.cells * spec.gauss_order;
    std::vector<double> outer_nodes(per_dim), outer_weights(per_dim);
    const double cell_w = (hi - lo) / spec.cells;
    for (int c = 0; c < spec.cells; ++c)
        for (int k = 0; k < spec.gauss_order; ++k) {
            outer_nodes[c * spec.gauss_order + k] =
                lo + c * cell_w + 0.5 * cell_w * (gl_nodes[k] + 1.0);
            outer_weights[c * spec.gauss_order + k] = 0.5 * cell_w * gl_weights[k];
        }

    std::vector<double> slice(per_dim, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < per_dim; ++i) {
        Point coords(dim);
        coords[0] = outer_nodes[i];
        if (dim == 1) {
            double f = region.density ? region.density(coords) : 1.0;
            if (weight) {
                const Point mp = region.to_model ? region.to_model(coords) : coords;
                f *= weight(mp);
            }
            slice[i] = outer_weights[i] * f;
        } else {
            slice[i] = outer_weights[i] * volume_recurse(region, weight, gl_nodes, gl_weights,
                                                         spec.cells, coords, 1);
        }
    }
    double total = 0.0;
    for (int i = 0; i < per_dim; ++i) total += slice[i];

    double factorial = 1.0;
    for (int k = 2; k <= region.n; ++k) factorial *= k; // omega^n = n! dq dp
    const int sign = region.chart ? region.chart->orientation_sign : +1;
    return sign * factorial * total;
}

std::vector<std::pair<std::pair<int, int>, Chain>> build_overlap_chains(
    const std::vector<Chart>& atlas, std::vector<Chain> declared_chains, int validation_samples,
    unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::pair<std::pair<int, int>, Chain>> out;
    for (auto& chain : declared_chains) {
        const int i = chain.source_chart, k = chain.target_chart;
        if (i >= k) throw ValidationError("overlap chain must have source ordinal < target");
        const bool ids_exist =
            std::any_of(atlas.begin(), atlas.end(), [i](const Chart& c) { return c.id == i; }) &&
            std::any_of(atlas.begin(), atlas.end(), [k](const Chart& c) { return c.id == k; });
        if (!ids_exist) throw ValidationError("overlap chain references unknown chart ids");
        if (chain.membership) {
            for (int s = 0; s < validation_samples; ++s) {
                Point params(chain.params.size());
                for (size_t d = 0; d < chain.params.size(); ++d)
                    params[d] = chain.params[d].lo +
                                (chain.params[d].hi - chain.params[d].lo) * unit(rng);
                if (!chain.membership(chain.map(params)))
                    throw ValidationError("sampled chain point fails the membership predicate");
            }
        }
        out.emplace_back(std::make_pair(i, k), std::move(chain));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

} // namespace hamloop::geom
