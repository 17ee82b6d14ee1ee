#ifndef HAMLOOP_SYMP_HPP
#define HAMLOOP_SYMP_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hamloop/errors.hpp"

namespace hamloop::symp {

using Complex = std::complex<double>;

inline constexpr double kSymplecticTol = 1e-9;
inline constexpr double kDetTol = 1e-8;
inline constexpr double kEigTol = 1e-9;
inline constexpr double kEigClusterTol = 1e-9;
inline constexpr double kPhaseTol = 1e-10;
inline constexpr double kMaslovResidualTol = 0.05;
inline constexpr int kDefaultCircleSamples = 2048;
inline constexpr int kMaxRefineDepth = 12;

/// Real 2n x 2n matrix M with M^T J M = J, basis ordered (q_1..q_n, p_1..p_n),
/// J = [[0, I], [-I, 0]].
class SymplecticMatrix {
public:
    explicit SymplecticMatrix(Eigen::MatrixXd entries, double tol = kSymplecticTol);

    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    const Eigen::MatrixXd& entries() const { return m_; }

    static SymplecticMatrix identity(int n);
    /// Standard symplectic structure matrix for half-dimension n.
    static Eigen::MatrixXd standard_form(int n);
    /// Planar rotation by theta as an element of U(1) in Sp(2,R).
    static SymplecticMatrix rotation2(double theta);
    /// Block direct sum in the (q..,p..) ordering.
    static SymplecticMatrix direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b);
    /// Embedding of a unitary X + iY as [[X, -Y], [Y, X]].
    static SymplecticMatrix from_unitary(const Eigen::MatrixXcd& u);

    /// Max-norm symplecticity defect ||M^T J M - J||.
    double symplectic_defect() const;

private:
    int n_;
    Eigen::MatrixXd m_;
};

enum class KreinKind {
    FirstKind,
    SecondKind,
    OffCircle,
    RealUnit,
};

struct KreinEntry {
    Complex value;
    int multiplicity = 0;
    KreinKind kind = KreinKind::OffCircle;
};

struct KreinSpectrum {
    std::vector<KreinEntry> entries;
    int m_minus = 0; // total multiplicity of negative real eigenvalues
};

/// Full paired spectrum with Krein kinds. Throws DegenerateSpectrumError when the
/// classification is ambiguous at tolerance.
KreinSpectrum krein_classify(const SymplecticMatrix& m);

/// rho recomputed from an already classified spectrum.
Complex rho_from_spectrum(const KreinSpectrum& spec);

/// The circle-valued map on Sp(2n,R) restricting to det on U(n):
/// (-1)^(m_minus/2) times the product of first-kind non-real unit-circle
/// eigenvalues with multiplicity.
Complex rho(const SymplecticMatrix& m);

/// Sampled circle-valued path on [0,1].
class PhasePath {
public:
    struct Sample {
        double t;
        Complex value; // |value| = 1 within kPhaseTol
    };

    PhasePath(std::vector<Sample> samples, bool closed);

    /// Adaptive construction: start from n_initial uniform samples on [0,1] and
    /// bisect any interval whose phase increment has magnitude >= pi/2, down to
    /// max_depth levels. Throws InsufficientResolutionError if a large step survives.
    static PhasePath adaptive(const std::function<Complex(double)>& value,
                              int n_initial = kDefaultCircleSamples,
                              int max_depth = kMaxRefineDepth,
                              bool require_closed = true);

    const std::vector<Sample>& samples() const { return samples_; }
    bool closed() const { return closed_; }
    /// Total unwrapped phase over the path (radians).
    double total_phase() const;

    PhasePath reversed() const;
    /// Concatenation: this on [0,1/2], other on [1/2,1]; endpoints must match.
    PhasePath concatenated(const PhasePath& other) const;

private:
    std::vector<Sample> samples_;
    bool closed_;
};

/// round(total unwrapped phase / 2pi); t -> e^{2 pi i t} has winding +1.
int winding_number(const PhasePath& p);

struct MaslovResult {
    int index = 0;
    double raw_winding = 0.0; // total unwrapped phase / 2pi before rounding
    double residual = 0.0;    // |raw_winding - index|
};

using MatrixLoop = std::function<SymplecticMatrix(double)>;

/// Maslov index of a closed loop of symplectic matrices: the winding number of
/// t -> rho(loop(t))^{-1}.  The loop argument is the matrix of psi_{t*}^{-1} in a
/// flow-invariant trivialization.
MaslovResult maslov_index(const MatrixLoop& loop, int samples = kDefaultCircleSamples);

/// True iff the Maslov indices of all supplied loops agree; the common value is
/// written to *common_value when non-null.
bool point_independence_check(std::span<const MatrixLoop> loops,
                              int samples = kDefaultCircleSamples,
                              int* common_value = nullptr);

} // namespace hamloop::symp

#endif
