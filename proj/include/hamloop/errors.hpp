#ifndef HAMLOOP_ERRORS_HPP
#define HAMLOOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hamloop {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Matrix fails M^T J M = J within tolerance.
struct NonSymplecticError : Error {
    using Error::Error;
};

// Clustered or defective spectrum below tolerance; caller should perturb or refine.
struct DegenerateSpectrumError : Error {
    using Error::Error;
};

struct NotClosedError : Error {
    using Error::Error;
};

// A phase step >= pi/2 survives the maximum refinement depth.
struct InsufficientResolutionError : Error {
    using Error::Error;
};

// A coordinate change turned out not to be Darboux-to-Darboux.
struct NonSymplecticJacobianError : Error {
    using Error::Error;
};

// Sampled chain points fail a declared set-membership predicate.
struct ValidationError : Error {
    using Error::Error;
};

// A scenario certificate (chart invariance, normalization, closure) failed.
struct CertificateError : Error {
    using Error::Error;
};

struct MissingInvarianceCertificateError : Error {
    using Error::Error;
};

struct NonConstantBoundaryHamiltonianError : Error {
    using Error::Error;
};

} // namespace hamloop

#endif
