#include "crev/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

namespace crev::numerics {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw Error(ErrorKind::InvalidInput, "polynomial needs at least one coefficient");
    }
    for (const auto& c : coeffs_) {
        if (!is_finite(c)) {
            throw Error(ErrorKind::InvalidInput, "polynomial coefficient is not finite");
        }
    }
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
    std::vector<Complex> c{Complex{1.0, 0.0}};
    for (const auto& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex{});
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

Complex Polynomial::coeff(int k) const {
    if (k < 0 || k > degree()) return {};
    return coeffs_[static_cast<std::size_t>(k)];
}

Complex Polynomial::operator()(Complex x) const {
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) return Polynomial({Complex{}});
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    std::vector<Complex> out(coeffs_.size() + rhs.coeffs_.size() - 1, Complex{});
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(out));
}

ComplexMatrix Polynomial::evaluate(const ComplexMatrix& a) const {
    const auto n = a.rows();
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * a;
        acc.diagonal().array() += *it;
    }
    return acc;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Polynomial::distance(const Polynomial& other) const {
    const int deg = std::max(degree(), other.degree());
    double d = 0.0;
    for (int k = 0; k <= deg; ++k) d = std::max(d, std::abs(coeff(k) - other.coeff(k)));
    return d;
}

Polynomial char_poly(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw Error(ErrorKind::InvalidInput, "char_poly needs a non-empty square matrix");
    }
    if (!is_finite(a)) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");

    const int n = static_cast<int>(a.rows());
    std::vector<Complex> power_sums(static_cast<std::size_t>(n) + 1);
    ComplexMatrix power = a;
    for (int k = 1; k <= n; ++k) {
        power_sums[k] = power.trace();
        if (k < n) power = power * a;
    }

    // e[k]: elementary symmetric functions of the eigenvalues.
    std::vector<Complex> e(static_cast<std::size_t>(n) + 1);
    e[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        Complex acc{};
        for (int i = 1; i <= k; ++i) {
            const double sign = (i % 2 == 1) ? 1.0 : -1.0;
            acc += sign * e[k - i] * power_sums[i];
        }
        e[k] = acc / static_cast<double>(k);
    }

    std::vector<Complex> coeffs(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coeffs[n - k] = sign * e[k];
    }
    coeffs[n] = 1.0;
    return Polynomial(std::move(coeffs));
}

namespace {

double backward_scale(const Polynomial& p, Complex z) {
    const double az = std::abs(z);
    double acc = 0.0;
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * az + std::abs(*it);
    return acc;
}

}  // namespace

std::vector<Complex> aberth_roots(const Polynomial& p, double solver_tol, int max_iterations) {
    const int n = p.degree();
    if (n < 1) throw Error(ErrorKind::InvalidInput, "root finding needs degree >= 1");
    if (!p.is_monic()) throw Error(ErrorKind::InvalidInput, "root finding expects a monic polynomial");

    if (n == 1) return {-p.coeff(0)};

    double radius = 0.0;
    for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(p.coeff(k)));
    radius += 1.0;

    // Offset angle breaks the symmetry with real-coefficient polynomials.
    constexpr double offset = 0.4;
    std::vector<Complex> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n + offset;
        z[k] = std::polar(radius, angle);
    }

    const Polynomial dp = p.derivative();
    std::vector<bool> done(static_cast<std::size_t>(n), false);
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < max_iterations; ++iter) {
        bool all_done = true;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            const Complex pv = p(z[i]);
            if (std::abs(pv) <= solver_tol * backward_scale(p, z[i])) {
                done[i] = true;
                continue;
            }
            all_done = false;
            const Complex dv = dp(z[i]);
            Complex repulsion{};
            for (int j = 0; j < n; ++j) {
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            }
            Complex step;
            if (dv == Complex{}) {
                step = Complex{1e-3 * (1.0 + std::abs(z[i])), 0.0};
            } else {
                const Complex newton = pv / dv;
                step = newton / (1.0 - newton * repulsion);
            }
            z[i] -= step;
            if (std::abs(step) <= 4.0 * eps * std::abs(z[i])) done[i] = true;
        }
        if (all_done) return z;
    }

    for (int i = 0; i < n; ++i) {
        if (!done[i] && std::abs(p(z[i])) > solver_tol * backward_scale(p, z[i])) {
            throw SolverFailure("Aberth iteration did not converge in " + std::to_string(max_iterations) +
                                    " iterations",
                                z);
        }
    }
    return z;
}

RootHierarchy single_linkage(std::span<const Complex> roots) {
    const std::size_t n = roots.size();
    RootHierarchy d;
    for (std::size_t i = 0; i < n; ++i) {
        d.children.emplace_back(-1, -1);
        d.members.push_back({i});
    }
    struct Edge {
        double length;
        std::size_t a, b;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({std::abs(roots[i] - roots[j]), i, j});
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.length < y.length; });

    std::vector<int> node_of(n);
    std::iota(node_of.begin(), node_of.end(), 0);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    d.root = 0;
    for (const auto& e : edges) {
        const auto ra = find(e.a);
        const auto rb = find(e.b);
        if (ra == rb) continue;
        const int na = node_of[ra];
        const int nb = node_of[rb];
        std::vector<std::size_t> merged = d.members[na];
        merged.insert(merged.end(), d.members[nb].begin(), d.members[nb].end());
        std::sort(merged.begin(), merged.end());
        d.children.emplace_back(na, nb);
        d.members.push_back(std::move(merged));
        parent[ra] = rb;
        node_of[rb] = static_cast<int>(d.children.size()) - 1;
        d.root = node_of[rb];
    }
    return d;
}

std::vector<RootCluster> cluster_roots(std::span<const Complex> roots, double cluster_tol) {
    std::vector<RootCluster> out;
    if (roots.empty()) return out;
    const RootHierarchy tree = single_linkage(roots);
    std::function<void(int)> visit = [&](int node) {
        const auto& members = tree.members[static_cast<std::size_t>(node)];
        const int m = static_cast<int>(members.size());
        Complex sum{};
        for (auto i : members) sum += roots[i];
        RootCluster c;
        c.value = sum / static_cast<double>(m);
        c.multiplicity = m;
        for (auto i : members) c.radius = std::max(c.radius, std::abs(roots[i] - c.value));
        if (m == 1 || c.radius <= std::pow(cluster_tol, 1.0 / m) * std::max(1.0, std::abs(c.value))) {
            out.push_back(c);
            return;
        }
        const auto [left, right] = tree.children[static_cast<std::size_t>(node)];
        visit(left);
        visit(right);
    };
    visit(tree.root);
    return out;
}

std::vector<RootCluster> poly_roots(const Polynomial& p, double cluster_tol, double solver_tol,
                                    int max_iterations) {
    const auto roots = aberth_roots(p, solver_tol, max_iterations);
    auto clusters = cluster_roots(roots, cluster_tol);
    // An m-fold cluster centre is a simple root of p^(m-1); Newton there beats the mean.
    for (auto& c : clusters) {
        if (c.multiplicity == 1) continue;
        Polynomial q = p;
        for (int k = 1; k < c.multiplicity; ++k) q = q.derivative();
        const Polynomial dq = q.derivative();
        Complex z = c.value;
        for (int iter = 0; iter < 8; ++iter) {
            const Complex dv = dq(z);
            if (dv == Complex{}) break;
            const Complex step = q(z) / dv;
            z -= step;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z)) break;
        }
        if (is_finite(z) && std::abs(z - c.value) <= c.radius && std::abs(q(z)) <= std::abs(q(c.value))) c.value = z;
    }
    return clusters;
}

ComplexMatrix sylvester_matrix(const Polynomial& p, const Polynomial& q) {
    const int m = p.degree();
    const int n = q.degree();
    if (m < 1 || n < 1) throw Error(ErrorKind::InvalidInput, "resultant needs degrees >= 1");
    const int size = m + n;
    ComplexMatrix s = ComplexMatrix::Zero(size, size);
    // Row i of the p-block holds p's coefficients, highest first, shifted by i.
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) s(i, i + k) = p.coeff(m - k);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) s(n + i, i + k) = q.coeff(n - k);
    return s;
}

Complex resultant(const Polynomial& p, const Polynomial& q) {
    const ComplexMatrix s = sylvester_matrix(p, q);
    const Eigen::PartialPivLU<ComplexMatrix> lu(s);
    const Complex r = lu.determinant();
    if (!is_finite(r)) throw Error(ErrorKind::NumericalInconsistency, "resultant overflowed");
    return r;
}

double hadamard_bound(const Polynomial& p, const Polynomial& q) {
    const ComplexMatrix s = sylvester_matrix(p, q);
    double bound = 1.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) bound *= s.row(i).norm();
    return bound;
}

Polynomial c_dual(const Polynomial& p) {
    if (!p.is_monic()) throw Error(ErrorKind::InvalidInput, "c_dual expects a monic polynomial");
    const Complex a0 = p.coeff(0);
    if (a0 == Complex{}) {
        throw Error(ErrorKind::InvalidInput, "c_dual: zero constant term (root at 0 has no dual)");
    }
    const int n = p.degree();
    std::vector<Complex> out(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out[k] = std::conj(p.coeff(n - k)) / std::conj(a0);
    out[n] = 1.0;
    return Polynomial(std::move(out));
}

bool is_c_reciprocal(const Polynomial& p, double tol) {
    return p.distance(c_dual(p)) <= tol;
}

}  // namespace crev::numerics
