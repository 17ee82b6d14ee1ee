#include "hamloop/symp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace hamloop::symp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal_arg_increment(Complex a, Complex b) {
    // arg(b/a) in (-pi, pi]
    return std::arg(b / a);
}

} // namespace

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd entries, double tol) : m_(std::move(entries)) {
    const auto rows = m_.rows();
    if (rows == 0 || rows % 2 != 0 || rows != m_.cols())
        throw NonSymplecticError("matrix must be square of even dimension");
    n_ = static_cast<int>(rows / 2);
    const double defect = symplectic_defect();
    if (defect > tol)
        throw NonSymplecticError("symplecticity defect " + std::to_string(defect) +
                                 " exceeds tolerance");
    const double det = m_.determinant();
    if (std::abs(det - 1.0) > std::max(kDetTol, tol))
        throw NonSymplecticError("determinant " + std::to_string(det) + " != 1");
}

Eigen::MatrixXd SymplecticMatrix::standard_form(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return j;
}

double SymplecticMatrix::symplectic_defect() const {
    const Eigen::MatrixXd j = standard_form(n_);
    return (m_.transpose() * j * m_ - j).cwiseAbs().maxCoeff();
}

SymplecticMatrix SymplecticMatrix::identity(int n) {
    return SymplecticMatrix(Eigen::MatrixXd::Identity(2 * n, 2 * n));
}

SymplecticMatrix SymplecticMatrix::rotation2(double theta) {
    Eigen::MatrixXd m(2, 2);
    m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return SymplecticMatrix(std::move(m));
}

SymplecticMatrix SymplecticMatrix::direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b) {
    const int na = a.n(), nb = b.n(), n = na + nb;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    const auto& ma = a.entries();
    const auto& mb = b.entries();
    // interleave the (q,p) blocks of both summands
    m.block(0, 0, na, na) = ma.block(0, 0, na, na);
    m.block(0, n, na, na) = ma.block(0, na, na, na);
    m.block(n, 0, na, na) = ma.block(na, 0, na, na);
    m.block(n, n, na, na) = ma.block(na, na, na, na);
    m.block(na, na, nb, nb) = mb.block(0, 0, nb, nb);
    m.block(na, n + na, nb, nb) = mb.block(0, nb, nb, nb);
    m.block(n + na, na, nb, nb) = mb.block(nb, 0, nb, nb);
    m.block(n + na, n + na, nb, nb) = mb.block(nb, nb, nb, nb);
    return SymplecticMatrix(std::move(m));
}

SymplecticMatrix SymplecticMatrix::from_unitary(const Eigen::MatrixXcd& u) {
    const int n = static_cast<int>(u.rows());
    Eigen::MatrixXd m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = u.real();
    m.topRightCorner(n, n) = -u.imag();
    m.bottomLeftCorner(n, n) = u.imag();
    m.bottomRightCorner(n, n) = u.real();
    return SymplecticMatrix(std::move(m));
}

namespace {

struct Cluster {
    Complex value;                       // representative (multiplicity-weighted mean)
    std::vector<int> indices;            // column indices into the eigenvector matrix
};

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXcd& vals, double tol) {
    std::vector<Cluster> clusters;
    std::vector<bool> used(vals.size(), false);
    for (int i = 0; i < vals.size(); ++i) {
        if (used[i]) continue;
        Cluster c;
        c.indices.push_back(i);
        used[i] = true;
        for (int j = i + 1; j < vals.size(); ++j) {
            if (!used[j] && std::abs(vals[j] - vals[i]) <= tol) {
                c.indices.push_back(j);
                used[j] = true;
            }
        }
        Complex sum = 0;
        for (int idx : c.indices) sum += vals[idx];
        c.value = sum / static_cast<double>(c.indices.size());
        clusters.push_back(std::move(c));
    }
    return clusters;
}

} // namespace

KreinSpectrum krein_classify(const SymplecticMatrix& m) {
    const int dim = m.dim();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.entries());
    if (solver.info() != Eigen::Success)
        throw DegenerateSpectrumError("eigenvalue computation failed");
    const Eigen::VectorXcd vals = solver.eigenvalues();
    const Eigen::MatrixXcd vecs = solver.eigenvectors();

    // Cluster coarsely so a multiple eigenvalue is treated as one entry; the
    // cluster tolerance is looser than kEigClusterTol to absorb the solver's own
    // splitting of exact multiplicities.
    const double cluster_tol = 1e3 * kEigClusterTol;
    auto clusters = cluster_eigenvalues(vals, cluster_tol);

    // Reject near-collisions that are not exact multiplicities: two clusters
    // closer than the cluster tolerance would have merged, so the remaining
    // ambiguity is a non-real eigenvalue sitting essentially on the real axis or
    // on top of the unit circle boundary without being classifiable.
    const Eigen::MatrixXd j = SymplecticMatrix::standard_form(m.n());

    KreinSpectrum out;
    for (const auto& c : clusters) {
        const double im = c.value.imag();
        const double abs_val = std::abs(c.value);
        const bool real = std::abs(im) <= kEigTol * std::max(1.0, abs_val);
        const bool on_circle = std::abs(abs_val - 1.0) <= 1e3 * kEigTol;
        const int mult = static_cast<int>(c.indices.size());

        if (real) {
            const double re = c.value.real();
            if (re < 0) out.m_minus += mult;
            KreinEntry e;
            e.value = Complex(re, 0.0);
            e.multiplicity = mult;
            e.kind = on_circle ? KreinKind::RealUnit : KreinKind::OffCircle;
            out.entries.push_back(e);
            continue;
        }
        if (!on_circle) {
            KreinEntry e;
            e.value = c.value;
            e.multiplicity = mult;
            e.kind = KreinKind::OffCircle;
            out.entries.push_back(e);
            continue;
        }
        // Non-real unit-circle cluster: split multiplicities by the signature of
        // the Krein form G = (1/2i) Z^* J Z on the eigenspace.  The overall sign
        // convention is pinned by the 2x2 polar-block test: first kind <=> G < 0.
        Eigen::MatrixXcd z(dim, mult);
        for (int col = 0; col < mult; ++col) z.col(col) = vecs.col(c.indices[col]);
        const Eigen::MatrixXcd g_raw = z.adjoint() * j.cast<Complex>() * z;
        Eigen::MatrixXcd g = (g_raw - g_raw.adjoint()) / Complex(0.0, 2.0); // hermitian part of (1/2i) G
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gs(g);
        int n_neg = 0, n_pos = 0;
        const double g_scale = std::max(1.0, g.cwiseAbs().maxCoeff());
        for (int a = 0; a < mult; ++a) {
            const double gv = gs.eigenvalues()[a];
            if (std::abs(gv) < 1e-10 * g_scale)
                throw DegenerateSpectrumError("Krein form nearly degenerate on eigenspace");
            (gv < 0 ? n_neg : n_pos)++;
        }
        if (n_neg > 0) {
            KreinEntry e;
            e.value = c.value;
            e.multiplicity = n_neg;
            e.kind = KreinKind::FirstKind;
            out.entries.push_back(e);
        }
        if (n_pos > 0) {
            KreinEntry e;
            e.value = c.value;
            e.multiplicity = n_pos;
            e.kind = KreinKind::SecondKind;
            out.entries.push_back(e);
        }
    }

    if (out.m_minus % 2 != 0)
        throw DegenerateSpectrumError("odd multiplicity of negative real eigenvalues");
    return out;
}

Complex rho_from_spectrum(const KreinSpectrum& spec) {
    Complex result = (spec.m_minus / 2) % 2 == 0 ? 1.0 : -1.0;
    for (const auto& e : spec.entries) {
        if (e.kind != KreinKind::FirstKind) continue;
        const Complex unit = e.value / std::abs(e.value);
        for (int i = 0; i < e.multiplicity; ++i) result *= unit;
    }
    return result / std::abs(result);
}

Complex rho(const SymplecticMatrix& m) {
    return rho_from_spectrum(krein_classify(m));
}

PhasePath::PhasePath(std::vector<Sample> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
    if (samples_.size() < 2)
        throw Error("PhasePath needs at least two samples");
    for (const auto& s : samples_) {
        if (std::abs(std::abs(s.value) - 1.0) > kPhaseTol)
            throw Error("PhasePath sample off the unit circle");
    }
    if (closed_ && std::abs(samples_.front().value - samples_.back().value) > 1e-8)
        throw NotClosedError("PhasePath endpoints differ");
}

PhasePath PhasePath::adaptive(const std::function<Complex(double)>& value, int n_initial,
                              int max_depth, bool require_closed) {
    std::vector<Sample> samples;
    samples.reserve(static_cast<size_t>(n_initial) + 1);
    for (int i = 0; i <= n_initial; ++i) {
        const double t = static_cast<double>(i) / n_initial;
        Complex v = value(t);
        v /= std::abs(v);
        samples.push_back({t, v});
    }
    for (int depth = 0; depth < max_depth; ++depth) {
        std::vector<Sample> refined;
        refined.reserve(samples.size());
        bool any_large = false;
        for (size_t i = 0; i + 1 < samples.size(); ++i) {
            refined.push_back(samples[i]);
            const double step = principal_arg_increment(samples[i].value, samples[i + 1].value);
            if (std::abs(step) >= std::numbers::pi / 2) {
                any_large = true;
                const double tm = 0.5 * (samples[i].t + samples[i + 1].t);
                Complex v = value(tm);
                v /= std::abs(v);
                refined.push_back({tm, v});
            }
        }
        refined.push_back(samples.back());
        samples.swap(refined);
        if (!any_large) break;
    }
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        if (std::abs(principal_arg_increment(samples[i].value, samples[i + 1].value)) >=
            std::numbers::pi / 2)
            throw InsufficientResolutionError(
                "phase step >= pi/2 survives maximum refinement depth");
    }
    const bool closed = std::abs(samples.front().value - samples.back().value) <= 1e-8;
    if (require_closed && !closed)
        throw NotClosedError("sampled phase path is not closed");
    return PhasePath(std::move(samples), closed);
}

double PhasePath::total_phase() const {
    double total = 0.0;
    for (size_t i = 0; i + 1 < samples_.size(); ++i)
        total += principal_arg_increment(samples_[i].value, samples_[i + 1].value);
    return total;
}

PhasePath PhasePath::reversed() const {
    std::vector<Sample> rev(samples_.rbegin(), samples_.rend());
    for (auto& s : rev) s.t = 1.0 - s.t;
    return PhasePath(std::move(rev), closed_);
}

PhasePath PhasePath::concatenated(const PhasePath& other) const {
    if (std::abs(samples_.back().value - other.samples().front().value) > 1e-8)
        throw Error("concatenation endpoints do not match");
    std::vector<Sample> joined;
    joined.reserve(samples_.size() + other.samples().size());
    for (const auto& s : samples_) joined.push_back({s.t / 2.0, s.value});
    for (size_t i = 1; i < other.samples().size(); ++i) {
        const auto& s = other.samples()[i];
        joined.push_back({0.5 + s.t / 2.0, s.value});
    }
    const bool closed = std::abs(joined.front().value - joined.back().value) <= 1e-8;
    return PhasePath(std::move(joined), closed);
}

int winding_number(const PhasePath& p) {
    if (!p.closed()) throw NotClosedError("winding number of an open path");
    for (size_t i = 0; i + 1 < p.samples().size(); ++i) {
        const double step =
            principal_arg_increment(p.samples()[i].value, p.samples()[i + 1].value);
        if (std::abs(step) >= std::numbers::pi / 2)
            throw InsufficientResolutionError("phase step >= pi/2 in winding_number");
    }
    return static_cast<int>(std::lround(p.total_phase() / kTwoPi));
}

MaslovResult maslov_index(const MatrixLoop& loop, int samples) {
    {
        const auto m0 = loop(0.0).entries();
        const auto m1 = loop(1.0).entries();
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m0.rows(), m0.cols());
        if ((m0 - id).cwiseAbs().maxCoeff() > 1e-7 || (m1 - id).cwiseAbs().maxCoeff() > 1e-7)
            throw NotClosedError("matrix loop does not start and end at the identity");
    }
    auto value = [&loop](double t) -> Complex {
        // On a degenerate sample nudge t; the underlying path is continuous.
        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                return std::conj(rho(loop(t)));
            } catch (const DegenerateSpectrumError&) {
                t += (t < 0.5 ? 1.0 : -1.0) * 1e-9 * (attempt + 1);
            }
        }
        return std::conj(rho(loop(t)));
    };
    const PhasePath path = PhasePath::adaptive(value, samples, kMaxRefineDepth);
    MaslovResult res;
    res.raw_winding = path.total_phase() / kTwoPi;
    res.index = static_cast<int>(std::lround(res.raw_winding));
    res.residual = std::abs(res.raw_winding - res.index);
    if (res.residual > kMaslovResidualTol)
        throw InsufficientResolutionError("Maslov winding residual " +
                                          std::to_string(res.residual) + " exceeds 0.05");
    return res;
}

bool point_independence_check(std::span<const MatrixLoop> loops, int samples, int* common_value) {
    if (loops.size() < 2) throw Error("point_independence_check needs at least 2 loops");
    bool first = true;
    int value = 0;
    for (const auto& loop : loops) {
        const int idx = maslov_index(loop, samples).index;
        if (first) {
            value = idx;
            first = false;
        } else if (idx != value) {
            return false;
        }
    }
    if (common_value) *common_value = value;
    return true;
}

} // namespace hamloop::symp
