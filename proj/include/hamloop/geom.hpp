#ifndef HAMLOOP_GEOM_HPP
#define HAMLOOP_GEOM_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hamloop/errors.hpp"
#include "hamloop/symp.hpp"

namespace hamloop::geom {

using Point = Eigen::VectorXd;
using Complex = std::complex<double>;

struct Param {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
};

/// Oriented Darboux chart.  Coordinates are listed in interleaved pair order
/// (q_1, p_1, q_2, p_2, ...) and the symplectic form is assumed standard in them.
struct Chart {
    int id = 0;
    int n = 1; // half-dimension
    std::vector<Param> params;
    int orientation_sign = +1; // relative to the parameter order
    std::function<Point(const Point& model_point)> to_coords;
    std::function<Point(const Point& coords)> from_coords; // coords -> model point
};

/// (2n-1)-dimensional oriented chain.  The first parameter is the designated
/// circle direction along which transition phases wind; the remaining parameters
/// are the transverse directions.  form_density gives the scalar F with
///   w d(log phase)/i ^ omega^{n-1} = w (d gamma/dc) F dc ^ ds_1 ^ ... ^ ds_{2n-2}
/// in the parameter order, and orientation_sign relates that order to the chain's
/// declared (induced-boundary) orientation.
struct Chain {
    int source_chart = 0; // the chart whose boundary carries the chain (index i)
    int target_chart = 0; // the overlapping chart (index k)
    std::vector<Param> params; // params[0] is the circle direction
    int orientation_sign = +1;
    std::function<Point(const Point& chain_params)> map; // -> model point
    std::function<double(const Point& chain_params)> form_density; // default 1 if null
    std::function<bool(const Point& model_point)> membership; // optional validation predicate
};

struct TransitionPhase {
    int source_chart = 0;
    int target_chart = 0;
    std::function<Complex(const Point& model_point)> eval;
};

struct QuadratureSpec {
    int gauss_order = 16;      // tensor-product Gauss-Legendre order per non-circle parameter
    int circle_samples = 2048; // initial circle samples, refined adaptively
    int max_refine_depth = 12;
    int cells = 1;             // subdivision count per non-circle parameter

    QuadratureSpec doubled() const {
        QuadratureSpec s = *this;
        s.gauss_order *= 2;
        s.circle_samples *= 2;
        return s;
    }
    QuadratureSpec halved() const {
        QuadratureSpec s = *this;
        s.gauss_order = std::max(2, s.gauss_order / 2);
        s.circle_samples = std::max(16, s.circle_samples / 2);
        return s;
    }
};

/// Integration region inside a chart: sequential parameter bounds, where each
/// bound may depend on the previously fixed parameters (in chart order).  The
/// optional density covers non-Darboux parameterizations (e.g. polar cells).
struct Region {
    const Chart* chart = nullptr;
    int n = 1;
    std::vector<std::function<std::pair<double, double>(const Point& prev)>> bounds;
    std::function<double(const Point& coords)> density;       // default 1
    std::function<Point(const Point& coords)> to_model;        // needed when weight != 1
};

enum class JacobianMode { ClosedForm, FiniteDifference };

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Caps OpenMP parallelism from the HAMLOOP_THREADS environment variable; called
/// lazily by the integrators.  Results are reduced in a fixed order and are
/// bit-identical for any thread count.
void apply_thread_cap();

/// rho of the Jacobian of the coordinate change from chart_j coordinates to
/// chart_i coordinates, evaluated at a model point in both domains.  In
/// finite-difference mode the Jacobian is built from central differences with
/// step 1e-6 and validated to be symplectic within 1e-5.
Complex transition_phase_from_jacobian(
    const Chart& chart_i, const Chart& chart_j, const Point& model_point,
    JacobianMode mode,
    const std::function<Eigen::MatrixXd(const Point& coords_j)>& closed_form_jacobian = nullptr);

/// The finite-difference Jacobian itself (chart_j coords -> chart_i coords).
Eigen::MatrixXd transition_jacobian_fd(const Chart& chart_i, const Chart& chart_j,
                                       const Point& model_point, double step = 1e-6);

/// Integral of weight * d(log phase)/i ^ omega^{power} over the chain:
/// quadrature over the transverse parameters times unwrapped phase increments
/// (weighted at interval midpoints) along the circle direction.
double integrate_weighted_phase_form(const Chain& chain,
                                     const std::function<double(const Point&)>& weight,
                                     const TransitionPhase& phase, int power,
                                     const QuadratureSpec& spec);

/// Integral of weight * omega^n over the region (n! times the Darboux coordinate
/// volume).
double integrate_volume(const Region& region, const std::function<double(const Point&)>& weight,
                        const QuadratureSpec& spec);

/// Validates scenario-declared overlap chains against the atlas ordering and
/// membership predicates, and returns them ordered by (i, k), i < k.
std::vector<std::pair<std::pair<int, int>, Chain>> build_overlap_chains(
    const std::vector<Chart>& atlas, std::vector<Chain> declared_chains,
    int validation_samples = 64, unsigned seed = 20260826);

} // namespace hamloop::geom

#endif
