#ifndef HAMLOOP_SCENARIOS_HIRZEBRUCH_HPP
#define HAMLOOP_SCENARIOS_HIRZEBRUCH_HPP

#include <array>
#include <vector>

#include "hamloop/invariant.hpp"
#include "hamloop/toric.hpp"

namespace hamloop::scenarios {

struct HirzebruchParams {
    int k = 1;
    toric::ExactValue tau = 3;
    toric::ExactValue mu = 1;
};

struct HirzebruchExpected {
    toric::ExactValue kappa, kappa_tilde;
    toric::BoundaryTerms terms, terms_tilde;
    toric::ExactValue i_psi, i_psi_tilde;
    toric::ExactValue ratio; // i_psi_tilde / i_psi = -k/2
    toric::ExactValue chern; // 2 lambda + (k + 2) mu
    std::array<int, 5> maslov{0, +1, 0, -1, 0};        // J_0..J_4 for psi
    std::array<int, 5> maslov_tilde{0, 0, +1, 0, -1};  // J_3 tilde is +k, filled at build
};

/// Hirzebruch surface M_{k,tau,mu} with the five-chart atlas: B_0 in action-angle
/// coordinates (u_1, phi_1, u_2, phi_2) with u_i = rho_i^2/2, and tube charts
/// B'_1..B'_4 around the divisors {z_j = 0} in tube Darboux coordinates.
/// Model points are (u_1, phi_1, u_2, phi_2).
struct HirzebruchScenario {
    HirzebruchParams params;
    double epsilon = 0.05;
    invariant::InvariantInputs psi;       // phi_1-translation loop, f = 2 pi u_1 - kappa
    invariant::InvariantInputs psi_tilde; // phi_2-translation loop, f = 2 pi u_2 - kappa_tilde
    HirzebruchExpected expected;
};

HirzebruchExpected hirzebruch_expected(const HirzebruchParams& params);

HirzebruchScenario make_hirzebruch(const HirzebruchParams& params, double epsilon,
                                   bool r01_finite_difference = false);

/// Closed-form Jacobians of the B'_j -> B_0 coordinate changes (j = 1, 2), used
/// for the r_01 phase and as validators for the finite-difference route.
Eigen::MatrixXd hirzebruch_r01_jacobian(const geom::Point& coords_1);
Eigen::MatrixXd hirzebruch_r02_jacobian(const geom::Point& coords_2);

/// Full epsilon-ladder run: per-epsilon reports for both loops, plus linearly
/// extrapolated totals, boundary terms, and the Chern pairing.
struct HirzebruchLadderRun {
    HirzebruchParams params;
    std::vector<double> epsilons;
    std::vector<invariant::InvariantReport> psi_reports, psi_tilde_reports;
    double i_psi = 0.0, i_psi_tilde = 0.0;                 // extrapolated
    std::array<double, 4> terms{}, terms_tilde{};          // extrapolated N'_0j
    double chern = 0.0;                                    // at the finest epsilon
    HirzebruchExpected expected;
};

HirzebruchLadderRun run_hirzebruch_ladder(const HirzebruchParams& params,
                                          std::vector<double> ladder = {0.05, 0.025, 0.0125},
                                          const geom::QuadratureSpec& spec = {8, 1024, 12, 1});

} // namespace hamloop::scenarios

#endif
