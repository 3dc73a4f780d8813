#pragma once

#include "crev/common.hpp"
#include "crev/numerics.hpp"

#include <optional>
#include <vector>

namespace crev::spectral {

struct JordanBlockSpec {
    Complex eigenvalue;
    int size = 1;
};

// One eigenvalue with its Segre characteristic (block sizes, descending) and
// the Weyr sequence it was derived from: weyr[k-1] = dim ker (A - lambda I)^k.
struct EigenCluster {
    Complex eigenvalue;
    std::vector<int> blocks;
    std::vector<int> weyr;
    double radius = 0.0;  // spread of the raw roots that formed the cluster

    int multiplicity() const;
    int max_block() const;
};

struct BlockPlacement {
    int cluster = 0;  // index into SpectralData::clusters
    int size = 0;
    int offset = 0;   // first column of the block in P
};

// A = P J P^-1 with det P = 1. Columns of each block form a Jordan chain
// (A - lambda I) p_{k+1} = p_k, ordered eigenvector first.
struct JordanBasis {
    ComplexMatrix p;
    ComplexMatrix j;
    std::vector<BlockPlacement> blocks;
    double condition = 1.0;
    double residual = 0.0;  // ||A P - P J||_F / (||A||_2 ||P||_F)
};

struct SpectralData {
    int dimension = 0;
    std::vector<EigenCluster> clusters;  // canonical order
    std::optional<JordanBasis> basis;

    bool semisimple() const;
    int total_size() const;
    Complex determinant() const;  // prod lambda^{multiplicity}
    std::vector<JordanBlockSpec> block_list() const;  // canonical Jordan order
};

// Clusters sorted by |lambda| descending then arg ascending (args in (-pi, pi]);
// moduli within `unit_tol` of each other count as equal. Blocks sorted
// descending inside each cluster.
void canonicalize(std::vector<EigenCluster>& clusters, double unit_tol);

// Eigenvalue clusters of A with their Jordan block structure. Raw eigenvalue
// estimates are the roots of char_poly(A); the multiplicity of each cluster is
// confirmed against dim ker (A - lambda I)^k.
SpectralData eigen_structure(const ComplexMatrix& a, const Tolerances& tols = {});

numerics::Polynomial minimal_polynomial(const SpectralData& s);

JordanBasis jordan_basis(const ComplexMatrix& a, const SpectralData& s, const Tolerances& tols = {});

// eigen_structure followed by jordan_basis, with the basis attached.
SpectralData eigen_structure_with_basis(const ComplexMatrix& a, const Tolerances& tols = {});

ComplexMatrix jordan_block(Complex lambda, int size);
ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks);
ComplexMatrix jordan_form(const std::vector<JordanBlockSpec>& blocks);

// Segre characteristic <-> Weyr sequence (cumulative nullities).
std::vector<int> weyr_from_segre(std::vector<int> blocks);
std::vector<int> segre_from_weyr(const std::vector<int>& weyr);

}  // namespace crev::spectral
