#ifndef HAMLOOP_INVARIANT_HPP
#define HAMLOOP_INVARIANT_HPP

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hamloop/geom.hpp"
#include "hamloop/symp.hpp"

namespace hamloop::invariant {

using geom::Chain;
using geom::Chart;
using geom::Point;
using geom::QuadratureSpec;
using geom::Region;
using geom::TransitionPhase;

/// A Hamiltonian loop given by closed-form flow, normalized Hamiltonian, and
/// per-chart linearization (the matrix of psi_{t*}^{-1} in the chart frame).
struct HamiltonianLoopModel {
    std::function<Point(double t, const Point&)> flow;
    std::function<Point(double t, const Point&)> inverse_flow;
    std::function<double(double t, const Point&)> hamiltonian; // omega^n-mean zero
    std::function<symp::SymplecticMatrix(int chart_id, double t, const Point&)> linearization;
    std::vector<int> invariant_charts; // chart ids with psi_t(B) = B certified
    bool autonomous = true;            // f_t and f_t o psi_t independent of t
};

/// Volume term domain for one chart: B_i minus the union of earlier charts.
struct VolumeCell {
    int chart_id = 0;
    Region region;
};

/// Fully wired input set for compute_invariant.
struct InvariantInputs {
    std::vector<Chart> atlas; // ordered; ordinals are the chart ids
    std::vector<std::pair<std::pair<int, int>, Chain>> chains;
    std::vector<TransitionPhase> phases; // aligned with chains
    std::vector<VolumeCell> volumes;     // one per chart, atlas order
    HamiltonianLoopModel loop;
    std::map<int, Point> maslov_points; // representative point per chart
};

struct ChartTerm {
    int chart_id = 0;
    symp::MaslovResult maslov;
    double volume = 0.0;
    double contribution = 0.0; // maslov.index * volume
};

struct PairTerm {
    int i = 0;
    int k = 0;
    double value = 0.0; // N_{ik}
};

struct InvariantReport {
    int n = 1;
    std::vector<ChartTerm> chart_terms;
    std::vector<PairTerm> pair_terms;
    double total = 0.0; // sum of all contributions and pair terms, exactly
    std::optional<double> error_estimate;
};

/// (-i/2pi) sum_{i<k} int_{A_ik} d log s_ik ^ omega^{n-1}; the accumulator is a
/// sum of unwrapped phase increments, hence real by construction.
double chern_pairing(const std::vector<std::pair<std::pair<int, int>, Chain>>& chains,
                     std::span<const TransitionPhase> phases, int n, const QuadratureSpec& spec);

/// Chart decomposition
///   I_psi = sum_i J_i int_{B_i \ union_{j<i} B_j} omega^n + sum_{i<k} N_{ik},
///   N_{ik} = (n i / 2pi) int_0^1 dt int_{A_ik} (f_t o psi_t) d log r_ik ^ omega^{n-1}.
/// The t-integral is Gauss-Legendre of order t_order; for autonomous loops it
/// collapses to a single weight evaluation.
InvariantReport compute_invariant(const InvariantInputs& inputs, const QuadratureSpec& spec,
                                  int t_order = 16, bool with_error_estimate = false);

/// Two-chart corollary: J_U vol_U + J_V vol_{V\U} - n k_const chern.
double corollary_two_charts(int j_u, int j_v, double vol_u, double vol_v_minus_u, int n,
                            double k_const, double chern);

/// Punctured corollary: J_U vol_M - n (int f_t(q) dt) chern.
double corollary_punctured(int j_u, double total_volume, int n, double f_at_q_integral,
                           double chern);

/// Samples int_0^1 (f_t o psi_t) dt along a chain and returns the common value;
/// throws NonConstantBoundaryHamiltonianError if the relative spread exceeds rel_tol.
double verify_boundary_constant(const Chain& chain, const HamiltonianLoopModel& loop,
                                int samples = 64, int t_order = 16, double rel_tol = 1e-6);

struct IntegrableResult {
    double i_psi = 0.0;    // sum_j z'_j (with the -n f factor inserted)
    double chern_sum = 0.0; // sum_j z_j, for cross-checking against chern_pairing
};

/// Integrable-system route: z_j over the supplied tubular boundary chains.
IntegrableResult integrable_invariant(
    const std::vector<std::pair<Chain, TransitionPhase>>& tubular_chain_data,
    const std::function<double(const Point&)>& f, int n, const QuadratureSpec& spec);

/// Finite-difference matrix of psi_{t*}^{-1} in the chart frame (validator for
/// closed-form linearizations).
symp::SymplecticMatrix fd_linearization(const Chart& chart, const HamiltonianLoopModel& loop,
                                        double t, const Point& model_point, double step = 1e-6);

/// Least-squares linear fit in epsilon, evaluated at epsilon = 0.
double extrapolate_linear(std::span<const double> epsilons, std::span<const double> values);

} // namespace hamloop::invariant

#endif
