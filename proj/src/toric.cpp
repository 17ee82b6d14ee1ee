#include "hamloop/toric.hpp"

namespace hamloop::toric {

namespace mp = boost::multiprecision;

ExactValue parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return ExactValue(mp::cpp_int(text));
        const mp::cpp_int num(text.substr(0, slash));
        const mp::cpp_int den(text.substr(slash + 1));
        if (den == 0) throw Error("zero denominator in rational " + text);
        return ExactValue(num, den);
    } catch (const std::runtime_error&) {
        throw Error("cannot parse rational '" + text + "'");
    }
}

double to_double(const ExactValue& v) { return v.convert_to<double>(); }

DelzantTrapezoid::DelzantTrapezoid(int k_, ExactValue tau_, ExactValue mu_)
    : k(k_), tau(std::move(tau_)), mu(std::move(mu_)) {
    if (k < 1) throw Error("Hirzebruch datum requires k >= 1");
    if (tau <= 0 || mu <= 0) throw Error("Hirzebruch datum requires tau, mu > 0");
    if (!(k * mu < tau)) throw Error("Hirzebruch datum requires k mu < tau");
}

namespace {

ExactValue binomial(int n, int j) {
    mp::cpp_int num = 1, den = 1;
    for (int i = 0; i < j; ++i) {
        num *= n - i;
        den *= i + 1;
    }
    return ExactValue(num, den);
}

ExactValue pow_exact(const ExactValue& x, int e) {
    ExactValue r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

} // namespace

ExactValue integrate_monomial(const DelzantTrapezoid& trap, int a, int b) {
    if (a < 0 || b < 0) throw Error("monomial exponents must be nonnegative");
    // int_0^mu y^b (tau - k y)^{a+1} / (a+1) dy, expanded binomially
    ExactValue total = 0;
    for (int j = 0; j <= a + 1; ++j) {
        // term: C(a+1, j) tau^{a+1-j} (-k)^j y^{b+j}
        const ExactValue coeff =
            binomial(a + 1, j) * pow_exact(trap.tau, a + 1 - j) * pow_exact(ExactValue(-trap.k), j);
        total += coeff * pow_exact(trap.mu, b + j + 1) / (b + j + 1);
    }
    return total / (a + 1);
}

ExactValue kappa(const DelzantTrapezoid& trap) {
    const ExactValue l = trap.lambda();
    const ExactValue value = trap.mu * (3 * l + trap.k * trap.mu) / (3 * (2 * l + trap.k * trap.mu));
    const ExactValue ratio = kappa_from_moment_ratio(trap);
    if (value != ratio) throw Error("kappa formula disagrees with exact moment ratio");
    return value;
}

ExactValue kappa_from_moment_ratio(const DelzantTrapezoid& trap) {
    // f = pi rho_1^2 - kappa has zero omega^2-mean; pi rho_1^2 is the moment
    // coordinate y, so kappa is the y-mean over the trapezoid.
    return integrate_monomial(trap, 0, 1) / integrate_monomial(trap, 0, 0);
}

ExactValue kappa_tilde(const DelzantTrapezoid& trap) {
    const ExactValue l = trap.lambda();
    const ExactValue km = ExactValue(trap.k) * trap.mu;
    const ExactValue value = (3 * l * l + 3 * km * l + km * km) / (3 * (2 * l + km));
    if (value != kappa_tilde_from_moment_ratio(trap))
        throw Error("kappa_tilde formula disagrees with exact moment ratio");
    return value;
}

ExactValue kappa_tilde_from_moment_ratio(const DelzantTrapezoid& trap) {
    // pi rho_2^2 is the x moment coordinate
    return integrate_monomial(trap, 1, 0) / integrate_monomial(trap, 0, 0);
}

std::pair<ExactValue, ExactValue> closed_form_invariants(const DelzantTrapezoid& trap) {
    const ExactValue l = trap.lambda();
    const ExactValue common = 1 - trap.mu / (2 * l + trap.k * trap.mu);
    const ExactValue i_psi = ExactValue(2 * trap.k) * trap.mu * trap.mu / 3 * common;
    const ExactValue i_psi_tilde =
        ExactValue(-trap.k * trap.k) * trap.mu * trap.mu / 3 * common;
    return {i_psi, i_psi_tilde};
}

BoundaryTerms boundary_terms(const DelzantTrapezoid& trap) {
    const ExactValue l = trap.lambda();
    const ExactValue kap = kappa(trap);
    BoundaryTerms t;
    t.n01 = 2 * trap.tau * kap;
    t.n02 = 2 * trap.mu * kap - trap.mu * trap.mu;
    t.n03 = 2 * l * (kap - trap.mu);
    t.n04 = trap.mu * (2 * kap - trap.mu);
    return t;
}

BoundaryTerms boundary_terms_tilde(const DelzantTrapezoid& trap) {
    const ExactValue l = trap.lambda();
    const ExactValue kap = kappa_tilde(trap);
    BoundaryTerms t;
    t.n01 = trap.tau * (2 * kap - trap.tau);
    t.n02 = 2 * trap.mu * kap;
    t.n03 = l * (2 * kap - l);
    t.n04 = trap.mu * (2 * kap - trap.k * trap.mu - 2 * l);
    return t;
}

} // namespace hamloop::toric
