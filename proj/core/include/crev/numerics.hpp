#pragma once

#include "crev/common.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <utility>
#include <vector>

namespace crev::numerics {

// Complex-coefficient polynomial, p(x) = sum_k coeffs[k] x^k.
//
// Coefficients are stored plainly. The alternating convention used when
// stating characteristic polynomials of group elements,
//     x^n - c_{n-1} x^{n-1} + c_{n-2} x^{n-2} - ... ,
// i.e. c_k = (-1)^{n-k} a_k, is converted where it is needed (classification).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs);

    static Polynomial monomial_one() { return Polynomial({Complex{1.0, 0.0}}); }
    // prod (x - r) over the given roots
    static Polynomial from_roots(std::span<const Complex> roots);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex coeff(int k) const;
    Complex leading() const { return coeffs_.back(); }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == Complex{1.0, 0.0}; }

    Complex operator()(Complex x) const;
    Polynomial derivative() const;
    Polynomial operator*(const Polynomial& rhs) const;

    // Matrix polynomial p(A) by Horner's rule.
    ComplexMatrix evaluate(const ComplexMatrix& a) const;

    double max_abs_coeff() const;
    double distance(const Polynomial& other) const;  // max coefficientwise |.|

    bool operator==(const Polynomial&) const = default;

private:
    std::vector<Complex> coeffs_;
};

struct RootCluster {
    Complex value;
    int multiplicity = 0;
    double radius = 0.0;
};

// Raised by poly_roots when the iteration cap is hit; carries the iterate.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& message, std::vector<Complex> best)
        : Error(ErrorKind::SolverFailure, message), best_iterate(std::move(best)) {}
    std::vector<Complex> best_iterate;
};

// det(xI - A) from Newton's identities on the power sums tr(A^k).
Polynomial char_poly(const ComplexMatrix& a);

// Aberth-Ehrlich simultaneous iteration. Returns the n raw roots.
std::vector<Complex> aberth_roots(const Polynomial& p, double solver_tol, int max_iterations);

// Single-linkage clustering of `roots` at cluster_tol (scaled by max(1, |z|)).
// Clusters whose representatives end up within 2 * cluster_tol are merged.
// Single-linkage merge tree over the roots. Nodes below roots.size() are
// leaves; every other node lists its two children and all its members.
struct RootHierarchy {
    std::vector<std::pair<int, int>> children;
    std::vector<std::vector<std::size_t>> members;
    int root = 0;
};
RootHierarchy single_linkage(std::span<const Complex> roots);

// Top-down over the merge tree: a node of m roots is one cluster when its
// spread fits cluster_tol^(1/m) (relative, floored at 1), the perturbation
// size of an m-fold root.
std::vector<RootCluster> cluster_roots(std::span<const Complex> roots, double cluster_tol);

std::vector<RootCluster> poly_roots(const Polynomial& p, double cluster_tol,
                                    double solver_tol = Tolerances{}.solver,
                                    int max_iterations = Tolerances{}.max_iterations);

ComplexMatrix sylvester_matrix(const Polynomial& p, const Polynomial& q);
Complex resultant(const Polynomial& p, const Polynomial& q);
// Product of the Sylvester row norms; |resultant| never exceeds it.
double hadamard_bound(const Polynomial& p, const Polynomial& q);

// Monic polynomial whose roots are conj(lambda)^-1 for every root lambda.
Polynomial c_dual(const Polynomial& p);
bool is_c_reciprocal(const Polynomial& p, double tol);

enum class BinomialIdentity { BL1, BL2 };

// Exact value of the alternating binomial sums
//   BL1: C(n-1,r) - C(n,r+1) + C(n,r+2) - ... + (-1)^{n-r} C(n,n)
//   BL2: sum_{j=k}^{n} (-1)^{j-k} C(j,k) C(n,j)
// Both vanish for every valid argument.
boost::multiprecision::cpp_int binomial_identity_check(BinomialIdentity kind, int n, int r_or_k);
boost::multiprecision::cpp_int binomial(int n, int k);

// Singular values in descending order (Jacobi SVD, deterministic).
Eigen::VectorXd singular_values(const ComplexMatrix& m);
// Count of singular values above rank_tol * sigma_max.
int numeric_rank(const ComplexMatrix& m, double rank_tol);
// Count of singular values above rank_tol * scale.
int numeric_rank(const ComplexMatrix& m, double rank_tol, double scale);
double condition_number(const ComplexMatrix& m);

// Orthonormal basis of the numerical null space: right singular vectors for
// singular values <= threshold.
ComplexMatrix null_space(const ComplexMatrix& m, double threshold);

// Principal n-th root.
Complex principal_root(Complex z, int n);

}  // namespace crev::numerics
