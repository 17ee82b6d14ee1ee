#ifndef HAMLOOP_SCENARIOS_TORUS_HPP
#define HAMLOOP_SCENARIOS_TORUS_HPP

#include <vector>

#include "hamloop/invariant.hpp"

namespace hamloop::scenarios {

struct TorusExpected {
    int maslov = 0;
    double invariant = 0.0;
};

/// Loops on T^{2n} = R^{2n}/Z^{2n} generated as reparameterized autonomous
/// flows psi_t = Phi_{A(t)} of a seeded trigonometric Hamiltonian g, with
/// A(0) = A(1) = 0 so the loop closes by construction.  Single chart, standard
/// Darboux coordinates (interleaved q_1, p_1, ...).
struct TorusScenario {
    int n = 1;
    unsigned seed = 0;
    invariant::InvariantInputs inputs;
    std::function<double(const geom::Point&)> g;
    std::vector<geom::Point> sample_points; // for point-independence checks
    TorusExpected expected;
};

TorusExpected torus_expected();

/// A(t) = (1 - cos 2 pi t)/2.
double torus_reparameterization(double t);

TorusScenario make_torus(int n, unsigned seed);

} // namespace hamloop::scenarios

#endif
