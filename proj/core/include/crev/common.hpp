#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crev {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class ErrorKind {
    InvalidInput,
    SolverFailure,
    SpectralAmbiguity,
    IllConditionedJordan,
    AmbiguousPairing,
    NotReversible,
    AssemblyFailure,
    TheoremPreconditionViolated,
    NumericalInconsistency,
    ParseError,
    NotSpecialLinear,
    Inconsistency,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; the kind drives the
// CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Tolerance bundle shared by every stage. Defaults are the library defaults
// that the CLI surfaces; nothing below reads a literal tolerance.
struct Tolerances {
    double det = 1e-8;       // |det A - 1| for SL membership
    double cluster = 1e-7;   // root clustering (and spread budget for multiple roots)
    double solver = 1e-13;   // relative backward error accepted by the root finder
    double rank = 1e-9;      // singular values below rank * scale count as zero
    double unit = 1e-8;      // ||lambda| - 1| below this is unit modulus
    double match = 1e-6;     // pairing distance to conj(lambda)^-1, relative
    double chain = 1e-7;     // relative Jordan basis residual
    double witness = 1e-8;   // witness acceptance, scaled by 1 + cond(P)^2
    double res = 1e-10;      // resultant dead band, relative to the Hadamard bound
    double coeff = 1e-9;     // coefficient comparisons, relative to 1 + max|c_k|
    int max_iterations = 200;

    // Every default multiplied by `factor` (iteration cap untouched).
    Tolerances scaled(double factor) const;

    static const std::vector<std::string_view>& names();
    double get(std::string_view name) const;
    // Throws Error(InvalidInput) for unknown names or non-positive values.
    void set(std::string_view name, double value);
};

bool is_finite(const ComplexMatrix& m);
bool is_finite(Complex z);

// Frobenius norm, spelled out where the residual definitions use it.
inline double frobenius(const ComplexMatrix& m) { return m.norm(); }

}  // namespace crev
