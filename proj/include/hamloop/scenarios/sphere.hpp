#ifndef HAMLOOP_SCENARIOS_SPHERE_HPP
#define HAMLOOP_SCENARIOS_SPHERE_HPP

#include "hamloop/invariant.hpp"

namespace hamloop::scenarios {

/// Golden record for the rotation loop on S^2 with f = -2 pi z.
struct SphereExpected {
    int j_u = +1;
    int j_v = -1;
    double invariant = 0.0;
    double chern = 2.0;
};

/// Model points are (phi, z) on the unit sphere of area 4 pi, omega = dphi ^ dz.
/// Chart U (id 1) is the cap {z > -sin(epsilon_hat)}, chart V (id 2) the cap
/// {z < sin(epsilon_hat)}; both carry Darboux coordinates sqrt(2(1 -+ z)) e^{+-i phi}.
struct SphereScenario {
    double epsilon_hat = 0.2;
    invariant::InvariantInputs inputs;
    double boundary_constant = 0.0; // int_0^1 f(psi_t x) dt on the overlap circle
    double total_volume = 0.0;      // 4 pi
    double f_south_pole = 0.0;      // f at the puncture point for the punctured corollary
    SphereExpected expected;
};

SphereExpected sphere_expected();

/// Builds the wired scenario and machine-checks its certificates (loop closure,
/// chart invariance, zero mean, boundary constancy). `mode` selects how the
/// transition phase r_12 is evaluated.
SphereScenario make_sphere(double epsilon_hat = 0.2,
                           geom::JacobianMode mode = geom::JacobianMode::ClosedForm);

/// Closed-form Jacobian of the V -> U coordinate change at the given V
/// coordinates (validator for the finite-difference route).
Eigen::MatrixXd sphere_r12_jacobian(const geom::Point& coords_v);

} // namespace hamloop::scenarios

#endif
