#ifndef HAMLOOP_VERIFY_HPP
#define HAMLOOP_VERIFY_HPP

#include <string>
#include <vector>

namespace hamloop::verify {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

CriterionResult criterion_closed_forms();     // exact Hirzebruch invariants and ratio
CriterionResult criterion_numeric_pipeline(); // epsilon-ladder quadrature vs closed forms
CriterionResult criterion_exact_identities(); // random-parameter rational identity suite
CriterionResult criterion_sphere();           // Maslov indices, corollaries, Chern pairing
CriterionResult criterion_torus();            // seeded loops: Maslov 0, invariant 0
CriterionResult criterion_rho_properties();   // determinant/multiplicativity/hyperbolic suite
CriterionResult criterion_robustness();       // quadrature doubling + Jacobian cross-checks

std::vector<CriterionResult> run_all();

} // namespace hamloop::verify

#endif
