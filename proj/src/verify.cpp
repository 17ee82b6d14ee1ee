#include "hamloop/verify.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "hamloop/scenarios/hirzebruch.hpp"
#include "hamloop/scenarios/sphere.hpp"
#include "hamloop/scenarios/torus.hpp"

namespace hamloop::verify {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CriterionResult fail(std::string name, std::string detail) {
    return {std::move(name), false, std::move(detail)};
}
CriterionResult pass(std::string name, std::string detail) {
    return {std::move(name), true, std::move(detail)};
}

double rel_err(double value, double target) {
    return std::abs(value - target) / std::max(1e-300, std::abs(target));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Eigen::MatrixXcd random_unitary(std::mt19937& rng, int n) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = std::complex<double>(gauss(rng), gauss(rng));
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
}

symp::SymplecticMatrix random_hyperbolic(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> mag(1.2, 3.0);
    std::uniform_int_distribution<int> flip(0, 1);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        const double lam = (flip(rng) ? -1.0 : 1.0) * mag(rng);
        m(a, a) = lam;
        m(n + a, n + a) = 1.0 / lam;
    }
    // conjugate by a unitary-symplectic matrix to mix the blocks
    const Eigen::MatrixXd s = symp::SymplecticMatrix::from_unitary(random_unitary(rng, n)).entries();
    return symp::SymplecticMatrix(s * m * s.inverse());
}

symp::SymplecticMatrix random_elliptic(std::mt19937& rng, int n) {
    return symp::SymplecticMatrix::from_unitary(random_unitary(rng, n));
}

} // namespace

CriterionResult criterion_closed_forms() {
    const std::string name = "hirzebruch closed forms";
    using toric::ExactValue;
    struct Case {
        scenarios::HirzebruchParams p;
        ExactValue i_psi, i_psi_tilde;
    };
    const std::vector<Case> cases = {{{1, 3, 1}, ExactValue(8) / 15, ExactValue(-4) / 15},
                                     {{2, 5, 1}, ExactValue(7) / 6, ExactValue(-7) / 6}};
    for (const Case& c : cases) {
        const auto e = scenarios::hirzebruch_expected(c.p);
        if (e.i_psi != c.i_psi || e.i_psi_tilde != c.i_psi_tilde)
            return fail(name, "invariants differ for k=" + std::to_string(c.p.k));
        if (e.i_psi_tilde * 2 != e.i_psi * ExactValue(-c.p.k))
            return fail(name, "ratio is not -k/2 for k=" + std::to_string(c.p.k));
    }
    return pass(name, "I = 8/15, 7/6 and -4/15, -7/6; ratio -k/2 exactly");
}

CriterionResult criterion_numeric_pipeline() {
    const std::string name = "hirzebruch numeric pipeline";
    for (const scenarios::HirzebruchParams& p :
         {scenarios::HirzebruchParams{1, 3, 1}, scenarios::HirzebruchParams{2, 5, 1}}) {
        const auto run = scenarios::run_hirzebruch_ladder(p);
        const auto& e = run.expected;
        if (rel_err(run.i_psi, toric::to_double(e.i_psi)) > 0.01)
            return fail(name, "extrapolated first invariant off for k=" + std::to_string(p.k) +
                                  ": " + fmt(run.i_psi));
        if (rel_err(run.i_psi_tilde, toric::to_double(e.i_psi_tilde)) > 0.01)
            return fail(name, "extrapolated second invariant off for k=" + std::to_string(p.k) +
                                  ": " + fmt(run.i_psi_tilde));
        const double targets[4] = {toric::to_double(e.terms.n01), toric::to_double(e.terms.n02),
                                   toric::to_double(e.terms.n03), toric::to_double(e.terms.n04)};
        const double targets_t[4] = {
            toric::to_double(e.terms_tilde.n01), toric::to_double(e.terms_tilde.n02),
            toric::to_double(e.terms_tilde.n03), toric::to_double(e.terms_tilde.n04)};
        for (int j = 0; j < 4; ++j) {
            if (rel_err(run.terms[j], targets[j]) > 0.02 ||
                rel_err(run.terms_tilde[j], targets_t[j]) > 0.02)
                return fail(name, "boundary term " + std::to_string(j + 1) + " off for k=" +
                                      std::to_string(p.k));
        }
    }
    return pass(name, "ladder-extrapolated invariants within 1%, boundary terms within 2%");
}

CriterionResult criterion_exact_identities() {
    const std::string name = "exact rational identities";
    std::mt19937 rng(20260826);
    std::uniform_int_distribution<int> kd(1, 4), num(1, 40), den(1, 7);
    int tested = 0;
    while (tested < 20) {
        const int k = kd(rng);
        const toric::ExactValue mu(num(rng), den(rng)), extra(num(rng), den(rng));
        const toric::ExactValue tau = k * mu + extra; // guarantees lambda > 0
        const toric::DelzantTrapezoid trap(k, tau, mu);
        const auto [i_psi, i_psi_tilde] = toric::closed_form_invariants(trap);
        if (toric::boundary_terms(trap).sum() != i_psi)
            return fail(name, "first boundary sum differs at k=" + std::to_string(k));
        if (toric::boundary_terms_tilde(trap).sum() != i_psi_tilde)
            return fail(name, "second boundary sum differs at k=" + std::to_string(k));
        if (toric::kappa(trap) != toric::kappa_from_moment_ratio(trap))
            return fail(name, "kappa disagrees with its moment ratio");
        if (toric::kappa_tilde(trap) != toric::kappa_tilde_from_moment_ratio(trap))
            return fail(name, "kappa_tilde disagrees with its moment ratio");
        ++tested;
    }
    return pass(name, "20 random parameter sets: boundary sums and kappa identities exact");
}

CriterionResult criterion_sphere() {
    const std::string name = "sphere";
    const geom::QuadratureSpec spec;
    for (double eps_hat : {0.1, 0.2, 0.35, 0.6, 1.0}) {
        const auto sc = scenarios::make_sphere(eps_hat);
        const auto rep = invariant::compute_invariant(sc.inputs, spec);
        if (rep.chart_terms[0].maslov.index != 1 || rep.chart_terms[1].maslov.index != -1)
            return fail(name, "Maslov indices differ from +1/-1 at eps_hat=" + fmt(eps_hat));
        if (rep.chart_terms[0].maslov.residual > symp::kMaslovResidualTol ||
            rep.chart_terms[1].maslov.residual > symp::kMaslovResidualTol)
            return fail(name, "Maslov residual too large");
        if (std::abs(rep.total) > 1e-6)
            return fail(name, "invariant " + fmt(rep.total) + " at eps_hat=" + fmt(eps_hat));
        const double chern = invariant::chern_pairing(sc.inputs.chains, sc.inputs.phases, 1, spec);
        if (std::abs(chern - 2.0) > 1e-4) return fail(name, "chern pairing " + fmt(chern));
        const double two_charts = invariant::corollary_two_charts(
            1, -1, rep.chart_terms[0].volume, rep.chart_terms[1].volume, 1, sc.boundary_constant,
            chern);
        if (std::abs(two_charts) > 1e-6)
            return fail(name, "two-chart corollary " + fmt(two_charts));
        const double punctured =
            invariant::corollary_punctured(1, sc.total_volume, 1, sc.f_south_pole, chern);
        if (std::abs(punctured) > 1e-6)
            return fail(name, "punctured corollary " + fmt(punctured));
    }
    return pass(name, "J = +1/-1, invariant and both corollaries 0, chern 2 (5 overlap widths)");
}

CriterionResult criterion_torus() {
    const std::string name = "torus";
    const geom::QuadratureSpec spec;
    for (int n : {1, 2}) {
        for (unsigned seed = 1; seed <= 5; ++seed) {
            const auto sc = scenarios::make_torus(n, seed);
            std::vector<symp::MatrixLoop> loops;
            for (const auto& x : sc.sample_points)
                loops.push_back(
                    [&sc, x](double t) { return sc.inputs.loop.linearization(1, t, x); });
            int common = -1;
            if (!symp::point_independence_check(loops, spec.circle_samples, &common) ||
                common != 0)
                return fail(name, "Maslov index nonzero or point-dependent at n=" +
                                      std::to_string(n) + " seed=" + std::to_string(seed));
            const auto rep = invariant::compute_invariant(sc.inputs, spec);
            if (std::abs(rep.total) > 1e-6)
                return fail(name, "invariant " + fmt(rep.total) + " at n=" + std::to_string(n));
        }
    }
    return pass(name, "10 seeded loops (n = 1, 2): Maslov 0 at 5 points each, invariant 0");
}

CriterionResult criterion_rho_properties() {
    const std::string name = "rho map properties";
    std::mt19937 rng(7031);
    std::uniform_int_distribution<int> nd(1, 4);

    for (int trial = 0; trial < 200; ++trial) {
        const int n = nd(rng);
        const Eigen::MatrixXcd u = random_unitary(rng, n);
        const symp::Complex det = u.determinant();
        const symp::Complex r = symp::rho(symp::SymplecticMatrix::from_unitary(u));
        if (std::abs(r - det) > 1e-9)
            return fail(name, "rho differs from det on a unitary matrix: " + fmt(std::abs(r - det)));
    }
    for (int trial = 0; trial < 200; ++trial) {
        const symp::SymplecticMatrix m = random_hyperbolic(rng, nd(rng));
        const symp::Complex r = symp::rho(m);
        if (std::min(std::abs(r - 1.0), std::abs(r + 1.0)) > 1e-9)
            return fail(name, "rho is not +-1 on a hyperbolic matrix");
    }
    for (int trial = 0; trial < 200; ++trial) {
        const int na = nd(rng), nb = nd(rng);
        const symp::SymplecticMatrix a =
            trial % 2 ? random_elliptic(rng, na) : random_hyperbolic(rng, na);
        const symp::SymplecticMatrix b =
            trial % 3 ? random_elliptic(rng, nb) : random_hyperbolic(rng, nb);
        const symp::Complex lhs = symp::rho(symp::SymplecticMatrix::direct_sum(a, b));
        const symp::Complex rhs = symp::rho(a) * symp::rho(b);
        if (std::abs(lhs - rhs) > 1e-9)
            return fail(name, "rho is not multiplicative on a direct sum");
    }

    // 2x2 convention: in the tube-chart Jacobian block with y_1 > 0, rho picks
    // the eigenvalue with negative imaginary part.
    {
        const double eps = 0.05, phi1 = kTwoPi / 4 + 0.02; // elliptic window, y_1 > 0
        geom::Point c1(4);
        c1 << eps * std::cos(phi1), eps * std::sin(phi1), 0.3, 1.0;
        const Eigen::MatrixXd block = scenarios::hirzebruch_r01_jacobian(c1).topLeftCorner(2, 2);
        const symp::Complex r = symp::rho(symp::SymplecticMatrix(block));
        const Eigen::VectorXcd eig = block.eigenvalues();
        symp::Complex lam_minus = eig[0].imag() < 0 ? eig[0] : eig[1];
        lam_minus /= std::abs(lam_minus);
        if (std::abs(r - lam_minus) > 1e-9)
            return fail(name, "2x2 block convention: rho took the wrong eigenvalue");
    }

    // winding of the r_01 phase around the first boundary circle is -1
    {
        const auto sc = scenarios::make_hirzebruch({1, 3, 1}, 0.05);
        const auto& chain = sc.psi.chains[0].second;
        const auto& phase = sc.psi.phases[0];
        const auto path = symp::PhasePath::adaptive(
            [&](double t) {
                geom::Point params(3);
                params << kTwoPi * t, 0.2, 1.0;
                const symp::Complex v = phase.eval(chain.map(params));
                return v / std::abs(v);
            },
            2048);
        if (symp::winding_number(path) != -1)
            return fail(name, "r_01 winding is not -1");
    }
    return pass(name, "det agreement, multiplicativity, hyperbolic signs, block convention, winding -1");
}

CriterionResult criterion_robustness() {
    const std::string name = "numerical robustness";
    // totals stable under doubling of quadrature orders
    {
        const geom::QuadratureSpec spec;
        const auto sc = scenarios::make_sphere(0.3);
        const auto base = invariant::compute_invariant(sc.inputs, spec, 16, true);
        const auto fine = invariant::compute_invariant(sc.inputs, spec.doubled());
        if (std::abs(fine.total - base.total) > std::max(*base.error_estimate, 1e-8))
            return fail(name, "sphere total unstable under quadrature doubling");
    }
    {
        const geom::QuadratureSpec spec{6, 512, 12, 1};
        const auto sc = scenarios::make_hirzebruch({1, 3, 1}, 0.025);
        for (const invariant::InvariantInputs* inputs : {&sc.psi, &sc.psi_tilde}) {
            const auto base = invariant::compute_invariant(*inputs, spec, 16, true);
            const auto fine = invariant::compute_invariant(*inputs, spec.doubled());
            if (std::abs(fine.total - base.total) >
                std::max(*base.error_estimate, 1e-6 + 1e-3 * std::abs(base.total)))
                return fail(name, "hirzebruch total unstable under quadrature doubling");
        }
    }

    // closed-form vs finite-difference transition phases at 100 random overlap points
    std::mt19937 rng(515);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    {
        const auto sc = scenarios::make_sphere(0.4);
        const auto& u = sc.inputs.atlas[0];
        const auto& v = sc.inputs.atlas[1];
        for (int s = 0; s < 100; ++s) {
            geom::Point m(2);
            m << kTwoPi * unit(rng), 0.7 * (2.0 * unit(rng) - 1.0);
            const symp::Complex a = geom::transition_phase_from_jacobian(
                u, v, m, geom::JacobianMode::ClosedForm, scenarios::sphere_r12_jacobian);
            const symp::Complex b = geom::transition_phase_from_jacobian(
                u, v, m, geom::JacobianMode::FiniteDifference);
            if (std::abs(a - b) > 1e-5)
                return fail(name, "sphere transition phase: closed-form vs FD gap " +
                                      fmt(std::abs(a - b)));
        }
    }
    {
        const double eps = 0.05;
        const auto sc = scenarios::make_hirzebruch({2, 5, 1}, eps);
        const auto& c0 = sc.psi.atlas[0];
        for (int s = 0; s < 100; ++s) {
            // points in the B_0 overlap with the first and second tube charts
            geom::Point m(4);
            const double rho1 = eps * (1.0 + unit(rng));
            m << 0.5 * rho1 * rho1, kTwoPi * unit(rng), 0.2 + 0.1 * unit(rng), kTwoPi * unit(rng);
            const symp::Complex a1 = geom::transition_phase_from_jacobian(
                c0, sc.psi.atlas[1], m, geom::JacobianMode::ClosedForm,
                scenarios::hirzebruch_r01_jacobian);
            const symp::Complex b1 = geom::transition_phase_from_jacobian(
                c0, sc.psi.atlas[1], m, geom::JacobianMode::FiniteDifference);
            if (std::abs(a1 - b1) > 1e-5)
                return fail(name, "first tube phase: closed-form vs FD gap " +
                                      fmt(std::abs(a1 - b1)));
            const double rho2 = eps * (1.0 + unit(rng));
            m << 0.1 + 0.05 * unit(rng), kTwoPi * unit(rng), 0.5 * rho2 * rho2,
                kTwoPi * unit(rng);
            const symp::Complex a2 = geom::transition_phase_from_jacobian(
                c0, sc.psi.atlas[2], m, geom::JacobianMode::ClosedForm,
                scenarios::hirzebruch_r02_jacobian);
            const symp::Complex b2 = geom::transition_phase_from_jacobian(
                c0, sc.psi.atlas[2], m, geom::JacobianMode::FiniteDifference);
            if (std::abs(a2 - b2) > 1e-5)
                return fail(name, "second tube phase: closed-form vs FD gap " +
                                      fmt(std::abs(a2 - b2)));
        }
    }
    return pass(name, "totals stable under doubling; Jacobian phase routes agree to 1e-5");
}

std::vector<CriterionResult> run_all() {
    return {criterion_closed_forms(), criterion_numeric_pipeline(), criterion_exact_identities(),
            criterion_sphere(),       criterion_torus(),            criterion_rho_properties(),
            criterion_robustness()};
}

} // namespace hamloop::verify
