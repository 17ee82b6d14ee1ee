#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hamloop/symp.hpp"

using namespace hamloop::symp;
using Complex = std::complex<double>;
namespace {
constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd diag2(double a, double b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
}
} // namespace

TEST_CASE("rho of the identity is 1 in every dimension") {
    for (int n = 1; n <= 3; ++n) {
        CHECK(std::abs(rho(SymplecticMatrix::identity(n)) - 1.0) < 1e-12);
    }
}

TEST_CASE("rho restricts to the determinant on rotations") {
    for (double theta : {0.3, 1.1, -2.0, 2.9}) {
        Complex r = rho(SymplecticMatrix::rotation2(theta));
        CHECK(std::abs(r - std::polar(1.0, theta)) < 1e-10);
    }
}

TEST_CASE("rho is a sign on matrices with no unit-circle spectrum") {
    CHECK(rho(SymplecticMatrix(diag2(2.0, 0.5))) == Complex(1.0));
    CHECK(rho(SymplecticMatrix(diag2(-2.0, -0.5))) == Complex(-1.0));
    auto spec = krein_classify(SymplecticMatrix(diag2(3.0, 1.0 / 3.0)));
    CHECK(spec.m_minus == 0);
    for (const auto& e : spec.entries) CHECK(e.kind == KreinKind::OffCircle);
}

TEST_CASE("elliptic 2x2 block picks the eigenvalue with negative imaginary part") {
    // Block [[x, y], [-y/r^2, x/r^2]] with r = 0.1 and y > 0: rho must be the
    // unit eigenvalue below the real axis.
    const double eps = 0.1;
    const double phi = kPi / 2 + 0.02;
    const double x = eps * std::cos(phi), y = eps * std::sin(phi);
    Eigen::MatrixXd m(2, 2);
    m << x, y, -y / (eps * eps), x / (eps * eps);
    const double tr = x * (1.0 + 1.0 / (eps * eps));
    REQUIRE(std::abs(tr) < 2.0);
    Complex lam_minus(tr / 2.0, -std::sqrt(4.0 - tr * tr) / 2.0);
    CHECK(std::abs(rho(SymplecticMatrix(m)) - lam_minus) < 1e-9);
}

TEST_CASE("krein classification of a quarter rotation") {
    auto spec = krein_classify(SymplecticMatrix::rotation2(kPi / 2));
    REQUIRE(spec.entries.size() == 2);
    int first_kind = 0;
    for (const auto& e : spec.entries) {
        CHECK(std::abs(std::abs(e.value) - 1.0) < 1e-10);
        if (e.kind == KreinKind::FirstKind) {
            ++first_kind;
            CHECK(e.value.imag() > 0.0); // +i carries the determinant value
        }
    }
    CHECK(first_kind == 1);
    CHECK(std::abs(rho_from_spectrum(spec) - Complex(0.0, 1.0)) < 1e-10);
}

TEST_CASE("krein kinds of conjugate pairs are opposite") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.1, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = SymplecticMatrix::direct_sum(SymplecticMatrix::rotation2(angle(rng)),
                                              SymplecticMatrix::rotation2(-angle(rng)));
        auto spec = krein_classify(m);
        for (const auto& a : spec.entries) {
            if (a.kind != KreinKind::FirstKind && a.kind != KreinKind::SecondKind) continue;
            for (const auto& b : spec.entries) {
                if (std::abs(b.value - std::conj(a.value)) < 1e-9 && &a != &b) {
                    CHECK(a.kind != b.kind);
                }
            }
        }
    }
}

TEST_CASE("direct sums of elliptic and hyperbolic blocks multiply under rho") {
    auto m = SymplecticMatrix::direct_sum(SymplecticMatrix::rotation2(0.7),
                                          SymplecticMatrix(diag2(2.0, 0.5)));
    CHECK(std::abs(rho(m) - std::polar(1.0, 0.7)) < 1e-9);
    auto spec = krein_classify(m);
    int on_circle = 0, off_circle = 0;
    for (const auto& e : spec.entries) {
        (std::abs(std::abs(e.value) - 1.0) < 1e-9 ? on_circle : off_circle) += e.multiplicity;
    }
    CHECK(on_circle == 2);
    CHECK(off_circle == 2);
}

TEST_CASE("rho agrees with the unitary determinant on random U(n)") {
    std::mt19937 rng(12345);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::MatrixXcd u = random_unitary(n, rng);
            CHECK(std::abs(rho(SymplecticMatrix::from_unitary(u)) - u.determinant()) < 1e-9);
        }
    }
}

TEST_CASE("non-symplectic input is rejected") {
    CHECK_THROWS_AS(SymplecticMatrix(diag2(2.0, 1.0)), hamloop::NonSymplecticError);
    CHECK_THROWS_AS(SymplecticMatrix(Eigen::MatrixXd::Identity(3, 3)),
                    hamloop::NonSymplecticError);
}

TEST_CASE("winding numbers of explicit circle maps") {
    auto constant = PhasePath::adaptive([](double) { return Complex(1.0, 0.0); }, 64);
    CHECK(winding_number(constant) == 0);
    auto plus_one =
        PhasePath::adaptive([](double t) { return std::polar(1.0, 2 * kPi * t); }, 64);
    CHECK(winding_number(plus_one) == 1);
    auto minus_two =
        PhasePath::adaptive([](double t) { return std::polar(1.0, -4 * kPi * t); }, 64);
    CHECK(winding_number(minus_two) == -2);
}

TEST_CASE("winding is additive under concatenation and negates under reversal") {
    auto one = PhasePath::adaptive([](double t) { return std::polar(1.0, 2 * kPi * t); }, 64);
    auto two = PhasePath::adaptive([](double t) { return std::polar(1.0, 4 * kPi * t); }, 64);
    CHECK(winding_number(one.concatenated(two)) == 3);
    CHECK(winding_number(one.reversed()) == -1);
    CHECK(winding_number(two.reversed()) == -2);
}

TEST_CASE("open paths are rejected as not closed") {
    CHECK_THROWS_AS(PhasePath::adaptive([](double t) { return std::polar(1.0, kPi * t); }, 64),
                    hamloop::NotClosedError);
}

TEST_CASE("maslov index of rotation loops") {
    auto north = [](double t) { return SymplecticMatrix::rotation2(-2 * kPi * t); };
    auto south = [](double t) { return SymplecticMatrix::rotation2(+2 * kPi * t); };
    auto flat = [](double) { return SymplecticMatrix::identity(1); };
    CHECK(maslov_index(north).index == +1);
    CHECK(maslov_index(south).index == -1);
    CHECK(maslov_index(flat).index == 0);
    CHECK(maslov_index(north).residual <= 0.05);
}

TEST_CASE("maslov index is stable under sample refinement") {
    auto loop = [](double t) { return SymplecticMatrix::rotation2(-2 * kPi * t); };
    auto coarse = maslov_index(loop, 256);
    auto fine = maslov_index(loop, 512);
    CHECK(coarse.index == fine.index);
}

TEST_CASE("constant loops agree at every point") {
    std::vector<MatrixLoop> loops(3, [](double) { return SymplecticMatrix::identity(2); });
    int common = 99;
    CHECK(point_independence_check(loops, 256, &common));
    CHECK(common == 0);
}
