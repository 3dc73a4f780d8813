#pragma once

#include "crev/common.hpp"
#include "crev/spectral.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crev::reversibility {

struct ClusterPair {
    int first = 0;   // cluster index, the member listed first in the reverser layout
    int second = 0;  // its conj(lambda)^-1 partner
    std::vector<int> blocks;
};

struct PairingResult {
    bool verdict = false;
    std::vector<ClusterPair> pairs;
    std::vector<int> singletons;   // clusters on the unit circle
    std::vector<int> unmatched;    // non-unit clusters without a partner
    std::vector<std::pair<int, int>> mismatched;  // partners whose block multisets differ
    std::optional<std::string> obstruction;  // first unpairable block, human readable
};

// Jordan blocks of an invertible A must split into unit-circle singletons and
// pairs {J(lambda, m), J(conj(lambda)^-1, m)} for A to be conjugate to
// conj(A)^-1. Greedy over clusters; two candidate partners is an error.
PairingResult pairing_check(const spectral::SpectralData& s, double unit_tol, double match_tol);
PairingResult pairing_check(const spectral::SpectralData& s, const Tolerances& tols = {});

// Upper triangular B with B conj(B) = I and B J(lambda,n) B^-1 = conj(J(lambda,n))^-1
// for |lambda| = 1:
//   b_11 = b,  b_1j = 0 (j >= 2),
//   b_ij = (-1)^{j+1} C(j-2, i-2) b / lambda^{i+j-2}  (2 <= i <= j).
ComplexMatrix build_unit_symmetry(Complex lambda, int n, Complex b, double unit_tol = Tolerances{}.unit);

// B(lambda, n): same support, b_ij = (-1)^{j+1} C(j-2, i-2) b conj(lambda)^{i+j-2}.
ComplexMatrix build_pair_block(Complex lambda, int n, Complex b);

// C = [[0, B], [conj(B)^-1, 0]] with B = B(lambda, n); reverses J(lambda,n) (+) J(conj(lambda)^-1, n).
ComplexMatrix build_pair_symmetry(Complex lambda, int n, Complex b, double unit_tol = Tolerances{}.unit);

enum class PhaseMode { UnitBlock, PairBlock };

// Unit-modulus b making det B = 1 (unit block) or det C = 1 (pair block).
// Unit block: b = principal n-th root of s(n) lambda^{n(n-1)}, s(n) = +1 iff n mod 4 in {0, 1}.
// Pair block: b^n conj(lambda)^{n(n-1)} lands on the positive real axis (n even)
// or the positive imaginary axis (n odd).
Complex choose_phase(PhaseMode mode, Complex lambda, int n);

struct SymmetryWitness {
    ComplexMatrix h;
    double residual_conjugation = 0.0;  // ||h A h^-1 - conj(A)^-1||_F
    double residual_involution = 0.0;   // ||h conj(h) - I||_F
    double residual_det = 0.0;          // |det h - 1|
    double basis_condition = 1.0;
    double witness_tol = 0.0;           // tolerance the witness was judged against (0: not judged)
    bool accepted = false;

    double acceptance_threshold() const { return witness_tol * (1.0 + basis_condition * basis_condition); }
};

class AssemblyFailure : public Error {
public:
    AssemblyFailure(const std::string& message, SymmetryWitness w)
        : Error(ErrorKind::AssemblyFailure, message), witness(std::move(w)) {}
    SymmetryWitness witness;
};

// Residuals only; the caller decides acceptance.
SymmetryWitness verify_reverser(const ComplexMatrix& a, const ComplexMatrix& h);

// Block reverser over the Jordan basis in S, transported back as
// h = conj(P) H P^-1. Throws NotReversible when pairing.verdict is false and
// AssemblyFailure when a residual exceeds witness_tol * (1 + cond(P)^2).
SymmetryWitness assemble_reverser(const ComplexMatrix& a, const spectral::SpectralData& s,
                                  const PairingResult& pairing, const Tolerances& tols = {});

// A = h^-1 * (conj(A)^-1 h), both factors involutory c-symmetries.
std::pair<ComplexMatrix, ComplexMatrix> factor_involutory(const ComplexMatrix& a, const SymmetryWitness& w);

enum class Relation { Centralizes, Reverses, Neither };

Relation reverser_relation(const ComplexMatrix& g, const ComplexMatrix& h, double tol);

std::string_view to_string(Relation r);

}  // namespace crev::reversibility
