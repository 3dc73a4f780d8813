#include "crev/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

namespace crev::spectral {

using numerics::Polynomial;

int EigenCluster::multiplicity() const { return std::accumulate(blocks.begin(), blocks.end(), 0); }

int EigenCluster::max_block() const {
    return blocks.empty() ? 0 : *std::max_element(blocks.begin(), blocks.end());
}

bool SpectralData::semisimple() const {
    return std::all_of(clusters.begin(), clusters.end(), [](const EigenCluster& c) { return c.max_block() == 1; });
}

int SpectralData::total_size() const {
    int total = 0;
    for (const auto& c : clusters) total += c.multiplicity();
    return total;
}

Complex SpectralData::determinant() const {
    Complex d{1.0, 0.0};
    for (const auto& c : clusters) d *= std::pow(c.eigenvalue, c.multiplicity());
    return d;
}

std::vector<JordanBlockSpec> SpectralData::block_list() const {
    std::vector<JordanBlockSpec> out;
    for (const auto& c : clusters)
        for (int size : c.blocks) out.push_back({c.eigenvalue, size});
    return out;
}

namespace {

double canonical_arg(Complex z) {
    const double a = std::arg(z);
    return a <= -std::numbers::pi ? std::numbers::pi : a;
}

}  // namespace

void canonicalize(std::vector<EigenCluster>& clusters, double unit_tol) {
    for (auto& c : clusters) std::sort(c.blocks.begin(), c.blocks.end(), std::greater<>());
    std::stable_sort(clusters.begin(), clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
        return std::abs(a.eigenvalue) > std::abs(b.eigenvalue);
    });
    // Runs of equal modulus are ordered by argument.
    std::size_t start = 0;
    while (start < clusters.size()) {
        const double lead = std::abs(clusters[start].eigenvalue);
        std::size_t end = start + 1;
        while (end < clusters.size() &&
               lead - std::abs(clusters[end].eigenvalue) <= unit_tol * std::max(1.0, lead))
            ++end;
        std::stable_sort(clusters.begin() + static_cast<std::ptrdiff_t>(start),
                         clusters.begin() + static_cast<std::ptrdiff_t>(end),
                         [](const EigenCluster& a, const EigenCluster& b) {
                             return canonical_arg(a.eigenvalue) < canonical_arg(b.eigenvalue);
                         });
        start = end;
    }
}

std::vector<int> weyr_from_segre(std::vector<int> blocks) {
    std::sort(blocks.begin(), blocks.end(), std::greater<>());
    const int longest = blocks.empty() ? 0 : blocks.front();
    std::vector<int> weyr;
    int cumulative = 0;
    for (int k = 1; k <= longest; ++k) {
        cumulative += static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [k](int b) { return b >= k; }));
        weyr.push_back(cumulative);
    }
    return weyr;
}

std::vector<int> segre_from_weyr(const std::vector<int>& weyr) {
    // increments[k] = number of blocks of size > k; the block sizes are the
    // conjugate partition of the increments.
    std::vector<int> increments;
    int previous = 0;
    for (int w : weyr) {
        increments.push_back(w - previous);
        previous = w;
    }
    std::vector<int> blocks;
    const int count = increments.empty() ? 0 : increments.front();
    for (int b = 0; b < count; ++b) {
        const int size = static_cast<int>(
            std::count_if(increments.begin(), increments.end(), [b](int inc) { return inc > b; }));
        blocks.push_back(size);
    }
    return blocks;
}

namespace {

struct KernelChain {
    std::vector<ComplexMatrix> bases;  // orthonormal bases of ker (A - cI)^k, k = 1..
    std::vector<int> weyr;
};

ComplexMatrix orthonormal_range(const ComplexMatrix& m, double rel_tol) {
    if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
    const Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

// Nested kernels of M = A - cI, each step computed as ker (I - Q Q*) M with Q
// the previous kernel, so only first powers of M enter a rank decision.
std::optional<KernelChain> kernel_chain(const ComplexMatrix& a, Complex c, int multiplicity, double rank_tol,
                                        double scale) {
    const auto n = a.rows();
    ComplexMatrix m = a;
    m.diagonal().array() -= c;

    KernelChain chain;
    ComplexMatrix q(n, 0);
    int previous = 0;
    int previous_increment = static_cast<int>(n) + 1;
    for (int k = 1; k <= multiplicity; ++k) {
        const ComplexMatrix x = m - q * (q.adjoint() * m);
        ComplexMatrix kernel = numerics::null_space(x, rank_tol * scale);
        const int w = static_cast<int>(kernel.cols());
        const int increment = w - previous;
        if (increment <= 0 || increment > previous_increment || w > multiplicity) return std::nullopt;
        chain.bases.push_back(kernel);
        chain.weyr.push_back(w);
        if (w == multiplicity) return chain;
        q = std::move(kernel);
        previous = w;
        previous_increment = increment;
    }
    return std::nullopt;
}

// Mean eigenvalue of the m-dimensional subspace that (A - cI)^m nearly
// annihilates. Root-finder centroids of an m-fold root are only accurate to
// about solver_tol^(1/m); a few sweeps bring c to working precision.
// Mean of the m Schur eigenvalues nearest c. A cluster mean is well
// conditioned even when its members are not.
Complex refine_centroid(const Eigen::VectorXcd& schur_values, Complex c, int m) {
    std::vector<Complex> v(schur_values.data(), schur_values.data() + schur_values.size());
    std::partial_sort(v.begin(), v.begin() + m, v.end(),
                      [c](Complex x, Complex y) { return std::abs(x - c) < std::abs(y - c); });
    Complex sum{};
    for (int k = 0; k < m; ++k) sum += v[static_cast<std::size_t>(k)];
    return sum / static_cast<double>(m);
}

struct Candidate {
    std::vector<std::size_t> members;
    Complex centroid;
    double radius = 0.0;
};

Candidate make_candidate(std::span<const Complex> roots, std::vector<std::size_t> members) {
    Candidate c;
    Complex sum{};
    for (auto i : members) sum += roots[i];
    c.centroid = sum / static_cast<double>(members.size());
    for (auto i : members) c.radius = std::max(c.radius, std::abs(roots[i] - c.centroid));
    c.members = std::move(members);
    return c;
}

std::string describe(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
    return os.str();
}

}  // namespace

SpectralData eigen_structure(const ComplexMatrix& a, const Tolerances& tols) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw Error(ErrorKind::InvalidInput, "eigen_structure needs a non-empty square matrix");
    }
    if (!is_finite(a)) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    const Complex det = Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
    if (std::abs(det) <= tols.det) {
        throw Error(ErrorKind::InvalidInput, "matrix is not invertible (|det| <= det tolerance)");
    }

    const int n = static_cast<int>(a.rows());
    const Polynomial chi = numerics::char_poly(a);
    const std::vector<Complex> roots = numerics::aberth_roots(chi, tols.solver, tols.max_iterations);
    const double scale = numerics::singular_values(a)(0);
    const Eigen::VectorXcd schur_values = Eigen::ComplexSchur<ComplexMatrix>(a, false).matrixT().diagonal();

    // Top-down over the single-linkage hierarchy: a node becomes one eigenvalue
    // when its spread fits the budget for an m-fold root, cluster^(1/m), and the
    // kernel chain of A at its centroid reaches dimension m.
    const numerics::RootHierarchy tree = numerics::single_linkage(roots);
    std::vector<EigenCluster> clusters;
    std::function<void(int)> visit = [&](int node) {
        const Candidate cand = make_candidate(roots, tree.members[node]);
        const int m = static_cast<int>(cand.members.size());
        const double budget = std::pow(tols.cluster, 1.0 / m) * std::max(1.0, std::abs(cand.centroid));
        if (m == 1 || cand.radius <= budget) {
            const Complex start = refine_centroid(schur_values, cand.centroid, m);
            if (auto chain = kernel_chain(a, start, m, tols.rank, scale)) {
                clusters.push_back(EigenCluster{start, segre_from_weyr(chain->weyr), chain->weyr, cand.radius});
                return;
            }
            if (m == 1) {
                throw Error(ErrorKind::SpectralAmbiguity,
                            "eigenvalue " + describe(cand.centroid) +
                                ": rank sequence of (A - lambda I)^k inconsistent with multiplicity 1");
            }
        }
        const auto [left, right] = tree.children[node];
        visit(left);
        visit(right);
    };
    visit(tree.root);

    canonicalize(clusters, tols.unit);

    SpectralData s;
    s.dimension = n;
    s.clusters = std::move(clusters);
    if (s.total_size() != n) {
        throw Error(ErrorKind::SpectralAmbiguity, "block sizes do not add up to the dimension");
    }
    return s;
}

Polynomial minimal_polynomial(const SpectralData& s) {
    Polynomial m = Polynomial::monomial_one();
    for (const auto& c : s.clusters) {
        const Polynomial factor({-c.eigenvalue, Complex{1.0, 0.0}});
        for (int k = 0; k < c.max_block(); ++k) m = m * factor;
    }
    return m;
}

ComplexMatrix jordan_block(Complex lambda, int size) {
    ComplexMatrix j = ComplexMatrix::Zero(size, size);
    for (int i = 0; i < size; ++i) {
        j(i, i) = lambda;
        if (i + 1 < size) j(i, i + 1) = 1.0;
    }
    return j;
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

ComplexMatrix jordan_form(const std::vector<JordanBlockSpec>& blocks) {
    std::vector<ComplexMatrix> mats;
    for (const auto& b : blocks) mats.push_back(jordan_block(b.eigenvalue, b.size));
    return block_diagonal(mats);
}

JordanBasis jordan_basis(const ComplexMatrix& a, const SpectralData& s, const Tolerances& tols) {
    const auto n = a.rows();
    if (n != s.dimension || s.total_size() != n) {
        throw Error(ErrorKind::InvalidInput, "spectral data does not match the matrix");
    }
    const double scale = numerics::singular_values(a)(0);

    JordanBasis out;
    out.p = ComplexMatrix::Zero(n, n);
    Eigen::Index column = 0;

    for (std::size_t ci = 0; ci < s.clusters.size(); ++ci) {
        const auto& cluster = s.clusters[ci];
        const int m = cluster.multiplicity();
        const auto chain = kernel_chain(a, cluster.eigenvalue, m, tols.rank, scale);
        if (!chain || segre_from_weyr(chain->weyr) != cluster.blocks) {
            throw Error(ErrorKind::SpectralAmbiguity,
                        "eigenvalue " + describe(cluster.eigenvalue) + ": kernel chain no longer matches its blocks");
        }
        ComplexMatrix shifted = a;
        shifted.diagonal().array() -= cluster.eigenvalue;

        const int longest = cluster.max_block();
        struct Chain {
            ComplexVector top;
            int length;
        };
        std::vector<Chain> chains;
        for (int level = longest; level >= 1; --level) {
            const int needed = static_cast<int>(std::count(cluster.blocks.begin(), cluster.blocks.end(), level));
            if (needed == 0) continue;
            // Vectors that already occupy this level: lower kernel plus the
            // images of longer chains.
            ComplexMatrix occupied(n, 0);
            if (level >= 2) occupied = chain->bases[level - 2];
            for (const auto& c : chains) {
                ComplexVector v = c.top;
                for (int k = 0; k < c.length - level; ++k) v = shifted * v;
                occupied.conservativeResize(Eigen::NoChange, occupied.cols() + 1);
                occupied.col(occupied.cols() - 1) = v;
            }
            const ComplexMatrix w = orthonormal_range(occupied, tols.rank);
            const ComplexMatrix& kernel = chain->bases[level - 1];
            const ComplexMatrix residue = kernel - w * (w.adjoint() * kernel);
            const Eigen::JacobiSVD<ComplexMatrix> svd(residue, Eigen::ComputeThinV);
            if (svd.singularValues().size() < needed || svd.singularValues()(needed - 1) <= tols.rank) {
                throw Error(ErrorKind::IllConditionedJordan,
                            "eigenvalue " + describe(cluster.eigenvalue) + ": no independent chain top at level " +
                                std::to_string(level));
            }
            for (int t = 0; t < needed; ++t) {
                ComplexVector top = kernel * svd.matrixV().col(t);
                chains.push_back({top.normalized(), level});
            }
        }

        for (const auto& c : chains) {
            // Columns: (A - cI)^{L-1} v, ..., (A - cI) v, v.
            std::vector<ComplexVector> cols(static_cast<std::size_t>(c.length));
            cols[c.length - 1] = c.top;
            for (int k = c.length - 2; k >= 0; --k) cols[k] = shifted * cols[k + 1];
            double largest = 0.0;
            for (const auto& v : cols) largest = std::max(largest, v.norm());
            out.blocks.push_back({static_cast<int>(ci), c.length, static_cast<int>(column)});
            for (const auto& v : cols) out.p.col(column++) = v / largest;
        }
    }

    std::vector<JordanBlockSpec> specs;
    for (const auto& b : out.blocks) specs.push_back({s.clusters[b.cluster].eigenvalue, b.size});
    out.j = jordan_form(specs);

    // Uniform rescale keeps every chain relation and makes det P = 1.
    const Complex det = Eigen::PartialPivLU<ComplexMatrix>(out.p).determinant();
    if (det == Complex{} || !is_finite(det)) {
        throw Error(ErrorKind::IllConditionedJordan, "Jordan basis is singular");
    }
    out.p /= numerics::principal_root(det, static_cast<int>(n));

    out.condition = numerics::condition_number(out.p);
    out.residual = frobenius(a * out.p - out.p * out.j) / (scale * frobenius(out.p));
    if (!(out.residual <= tols.chain) || !std::isfinite(out.condition)) {
        std::ostringstream os;
        os << "Jordan basis residual " << out.residual << " exceeds chain tolerance " << tols.chain
           << " (basis condition " << out.condition << ")";
        throw Error(ErrorKind::IllConditionedJordan, os.str());
    }
    return out;
}

SpectralData eigen_structure_with_basis(const ComplexMatrix& a, const Tolerances& tols) {
    SpectralData s = eigen_structure(a, tols);
    s.basis = jordan_basis(a, s, tols);
    return s;
}

}  // namespace crev::spectral
