#ifndef HAMLOOP_TORIC_HPP
#define HAMLOOP_TORIC_HPP

#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "hamloop/errors.hpp"

namespace hamloop::toric {

/// Exact rational value; canonical reduced form maintained by the backend.
using ExactValue = boost::multiprecision::cpp_rational;

/// Factor relating the manifold integral to the moment-polytope integral:
/// int_M P omega^n = n! * int_Delta P dvol, with n = 2 here.
inline constexpr int kManifoldPolytopeFactor = 2;

ExactValue parse_rational(const std::string& text); // "p/q" or "p"
double to_double(const ExactValue& v);

/// Moment polytope of the Hirzebruch surface M_{k,tau,mu}:
/// {(x, y) : 0 <= y <= mu, 0 <= x <= tau - k y}, with lambda = tau - k mu.
struct DelzantTrapezoid {
    int k;
    ExactValue tau;
    ExactValue mu;

    DelzantTrapezoid(int k_, ExactValue tau_, ExactValue mu_);

    ExactValue lambda() const { return tau - k * mu; }
};

/// Exact int int_Delta x^a y^b dx dy via the closed-form y-slice integral.
ExactValue integrate_monomial(const DelzantTrapezoid& trap, int a, int b);

/// Normalization constant for f = pi rho_1^2 - kappa:
/// kappa = mu (3 lambda + k mu) / (3 (2 lambda + k mu)), cross-checked against
/// the moment-coordinate mean.
ExactValue kappa(const DelzantTrapezoid& trap);
/// kappa computed as the moment ratio int y dA / int dA (must equal kappa exactly).
ExactValue kappa_from_moment_ratio(const DelzantTrapezoid& trap);
/// kappa_tilde = (3 lambda^2 + 3 k lambda mu + k^2 mu^2) / (3 (2 lambda + k mu)).
ExactValue kappa_tilde(const DelzantTrapezoid& trap);
ExactValue kappa_tilde_from_moment_ratio(const DelzantTrapezoid& trap);

/// I_psi = (2 k mu^2 / 3)(1 - mu/(2 lambda + k mu)) and
/// I_psi_tilde = (-k^2 mu^2 / 3)(1 - mu/(2 lambda + k mu)); ratio exactly -k/2.
std::pair<ExactValue, ExactValue> closed_form_invariants(const DelzantTrapezoid& trap);

struct BoundaryTerms {
    ExactValue n01, n02, n03, n04;
    ExactValue sum() const { return n01 + n02 + n03 + n04; }
};

/// N'_0j for the phi_1-translation loop: 2 tau kappa, 2 mu kappa - mu^2,
/// 2 lambda (kappa - mu), mu (2 kappa - mu).
BoundaryTerms boundary_terms(const DelzantTrapezoid& trap);
/// The tilde analogues for the phi_2-translation loop.
BoundaryTerms boundary_terms_tilde(const DelzantTrapezoid& trap);

} // namespace hamloop::toric

#endif
