#include "crev/reversibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace crev::reversibility {

namespace {

std::string format_blocks(const std::vector<int>& blocks) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < blocks.size(); ++i) os << (i ? "," : "") << blocks[i];
    os << "}";
    return os.str();
}

std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

bool on_unit_circle(Complex z, double unit_tol) { return std::abs(std::abs(z) - 1.0) <= unit_tol; }

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

// Angle reduced to (-pi, pi].
double principal_angle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

// Shared support of B and B(lambda, n); `power(k)` supplies the k-th power
// factor (1/lambda^k or conj(lambda)^k).
template <typename PowerFn>
ComplexMatrix triangular_symmetry(int n, Complex b, PowerFn power) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(0, 0) = b;
    for (int i = 2; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
            const double sign = ((j + 1) % 2 == 0) ? 1.0 : -1.0;
            m(i - 1, j - 1) = sign * binomial(j - 2, i - 2) * b * power(i + j - 2);
        }
    }
    return m;
}

std::vector<Complex> powers(Complex base, int count) {
    std::vector<Complex> out(static_cast<std::size_t>(count) + 1);
    out[0] = 1.0;
    for (int k = 1; k <= count; ++k) out[k] = out[k - 1] * base;
    return out;
}

}  // namespace

PairingResult pairing_check(const spectral::SpectralData& s, double unit_tol, double match_tol) {
    PairingResult result;
    const int count = static_cast<int>(s.clusters.size());
    std::vector<bool> assigned(static_cast<std::size_t>(count), false);

    for (int i = 0; i < count; ++i) {
        if (on_unit_circle(s.clusters[i].eigenvalue, unit_tol)) {
            result.singletons.push_back(i);
            assigned[i] = true;
        }
    }

    for (int i = 0; i < count; ++i) {
        if (assigned[i]) continue;
        const auto& ci = s.clusters[i];
        const Complex target = 1.0 / std::conj(ci.eigenvalue);
        const double radius = match_tol * std::max(1.0, std::abs(target));

        std::vector<int> candidates;
        for (int j = 0; j < count; ++j) {
            if (j == i || on_unit_circle(s.clusters[j].eigenvalue, unit_tol)) continue;
            if (std::abs(s.clusters[j].eigenvalue - target) <= radius) candidates.push_back(j);
        }
        if (candidates.size() > 1) {
            throw Error(ErrorKind::AmbiguousPairing,
                        "eigenvalue " + format_complex(ci.eigenvalue) + " has " + std::to_string(candidates.size()) +
                            " candidate partners within the match tolerance; tighten the tolerances");
        }
        assigned[i] = true;
        if (candidates.empty()) {
            result.unmatched.push_back(i);
            if (!result.obstruction) {
                result.obstruction = "unmatched eigenvalue " + format_complex(ci.eigenvalue) +
                                     ": no cluster near conj(lambda)^-1 = " + format_complex(target);
            }
            continue;
        }
        const int j = candidates.front();
        if (assigned[j]) {
            throw Error(ErrorKind::AmbiguousPairing,
                        "eigenvalue " + format_complex(s.clusters[j].eigenvalue) + " claimed by two partners");
        }
        assigned[j] = true;
        const auto& cj = s.clusters[j];
        if (ci.blocks == cj.blocks) {
            result.pairs.push_back({i, j, ci.blocks});
        } else {
            result.mismatched.emplace_back(i, j);
            if (!result.obstruction) {
                result.obstruction = "block-size multiset mismatch " + format_blocks(ci.blocks) + " vs " +
                                     format_blocks(cj.blocks) + " (eigenvalues " + format_complex(ci.eigenvalue) +
                                     " and " + format_complex(cj.eigenvalue) + ")";
            }
        }
    }

    result.verdict = result.unmatched.empty() && result.mismatched.empty();
    return result;
}

PairingResult pairing_check(const spectral::SpectralData& s, const Tolerances& tols) {
    return pairing_check(s, tols.unit, tols.match);
}

ComplexMatrix build_unit_symmetry(Complex lambda, int n, Complex b, double unit_tol) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "block size must be positive");
    if (!on_unit_circle(lambda, unit_tol) || !on_unit_circle(b, unit_tol)) {
        throw Error(ErrorKind::InvalidInput, "unit-block symmetry needs |lambda| = |b| = 1");
    }
    const Complex unit_b = b / std::abs(b);
    const auto inv = powers(std::abs(lambda) / lambda, 2 * n);
    return triangular_symmetry(n, unit_b, [&](int k) { return inv[k]; });
}

ComplexMatrix build_pair_block(Complex lambda, int n, Complex b) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "block size must be positive");
    const auto pw = powers(std::conj(lambda), 2 * n);
    return triangular_symmetry(n, b, [&](int k) { return pw[k]; });
}

ComplexMatrix build_pair_symmetry(Complex lambda, int n, Complex b, double unit_tol) {
    if (lambda == Complex{} || on_unit_circle(lambda, unit_tol)) {
        throw Error(ErrorKind::InvalidInput,
                    "pair symmetry needs |lambda| not in {0, 1}; unit-modulus blocks use build_unit_symmetry");
    }
    if (!on_unit_circle(b, unit_tol)) throw Error(ErrorKind::InvalidInput, "pair symmetry needs |b| = 1");
    const ComplexMatrix block = build_pair_block(lambda, n, b);
    // The signed binomial core squares to I, so conj(B)^-1 has the same shape
    // with 1/conj(b) and powers of 1/lambda. Exact, unlike a triangular solve
    // whose error grows like |lambda|^(2n).
    const auto inv = powers(1.0 / lambda, 2 * n);
    const ComplexMatrix conj_inverse = triangular_symmetry(n, 1.0 / std::conj(b), [&](int k) { return inv[k]; });

    ComplexMatrix c = ComplexMatrix::Zero(2 * n, 2 * n);
    c.topRightCorner(n, n) = block;
    c.bottomLeftCorner(n, n) = conj_inverse;
    return c;
}

Complex choose_phase(PhaseMode mode, Complex lambda, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "block size must be positive");
    if (lambda == Complex{}) throw Error(ErrorKind::InvalidInput, "phase choice needs lambda != 0");
    const double theta = std::arg(lambda);
    const double turns = static_cast<double>(n) * (n - 1);
    double angle = 0.0;
    if (mode == PhaseMode::UnitBlock) {
        // det B = s(n) b^n / lambda^{n(n-1)}
        const bool positive = (n % 4 == 0) || (n % 4 == 1);
        angle = principal_angle((positive ? 0.0 : std::numbers::pi) + turns * theta);
    } else {
        // det C = (-1)^n w / conj(w) with w = b^n conj(lambda)^{n(n-1)}
        const double target = (n % 2 == 0) ? 0.0 : std::numbers::pi / 2.0;
        angle = principal_angle(target + turns * theta);
    }
    return std::polar(1.0, angle / n);
}

// Only exact singularity or overflow is rejected here: block reversers for
// |lambda| far from 1 are legitimately ill-conditioned, and the residuals
// decide whether they are usable.
static Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& m, const std::string& what) {
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    const Complex det = lu.determinant();
    if (!std::isfinite(det.real()) || !std::isfinite(det.imag()) || det == Complex{} ||
        !lu.inverse().allFinite()) {
        throw Error(ErrorKind::InvalidInput, what + " is singular");
    }
    return lu;
}

SymmetryWitness verify_reverser(const ComplexMatrix& a, const ComplexMatrix& h) {
    if (a.rows() != a.cols() || h.rows() != h.cols() || a.rows() != h.rows()) {
        throw Error(ErrorKind::InvalidInput, "verify_reverser: dimension mismatch");
    }
    checked_lu(h, "verify_reverser: h");
    checked_lu(a, "verify_reverser: A");

    // Residuals in extended precision: block reversers for |lambda| far from
    // 1 have condition numbers near 1/eps, and inverting them in double would
    // swamp the quantity being measured.
    using WideMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
    const WideMatrix wh = h.cast<std::complex<long double>>();
    const WideMatrix wa = a.cast<std::complex<long double>>();
    const Eigen::PartialPivLU<WideMatrix> hlu(wh);
    const Eigen::PartialPivLU<WideMatrix> alu(wa.conjugate());
    const auto n = a.rows();
    const WideMatrix identity = WideMatrix::Identity(n, n);

    SymmetryWitness w;
    w.h = h;
    w.residual_conjugation = static_cast<double>((wh * wa * hlu.inverse() - alu.inverse()).norm());
    w.residual_involution = static_cast<double>((wh * wh.conjugate() - identity).norm());
    w.residual_det = static_cast<double>(std::abs(hlu.determinant() - std::complex<long double>(1.0L)));
    return w;
}

SymmetryWitness assemble_reverser(const ComplexMatrix& a, const spectral::SpectralData& s,
                                  const PairingResult& pairing, const Tolerances& tols) {
    if (!pairing.verdict) {
        throw Error(ErrorKind::NotReversible,
                    "not c-reversible: " + pairing.obstruction.value_or("Jordan blocks do not pair"));
    }
    const spectral::JordanBasis basis = s.basis ? *s.basis : spectral::jordan_basis(a, s, tols);
    const auto n = a.rows();

    std::vector<std::vector<spectral::BlockPlacement>> by_cluster(s.clusters.size());
    for (const auto& b : basis.blocks) by_cluster[static_cast<std::size_t>(b.cluster)].push_back(b);

    std::vector<Eigen::Index> order;
    std::vector<ComplexMatrix> symmetry_blocks;
    auto take = [&](const spectral::BlockPlacement& b) {
        for (int k = 0; k < b.size; ++k) order.push_back(b.offset + k);
    };

    for (int ci : pairing.singletons) {
        const Complex mu = s.clusters[ci].eigenvalue;
        const Complex unit_mu = mu / std::abs(mu);
        for (const auto& b : by_cluster[ci]) {
            take(b);
            const Complex phase = choose_phase(PhaseMode::UnitBlock, unit_mu, b.size);
            symmetry_blocks.push_back(build_unit_symmetry(unit_mu, b.size, phase, tols.unit));
        }
    }
    for (const auto& pair : pairing.pairs) {
        const auto& first = by_cluster[pair.first];
        const auto& second = by_cluster[pair.second];
        if (first.size() != second.size()) {
            throw Error(ErrorKind::Inconsistency, "paired clusters carry different block counts in the basis");
        }
        const Complex lambda = s.clusters[pair.first].eigenvalue;
        for (std::size_t k = 0; k < first.size(); ++k) {
            if (first[k].size != second[k].size) {
                throw Error(ErrorKind::Inconsistency, "paired blocks differ in size in the basis");
            }
            take(first[k]);
            take(second[k]);
            const Complex phase = choose_phase(PhaseMode::PairBlock, lambda, first[k].size);
            symmetry_blocks.push_back(build_pair_symmetry(lambda, first[k].size, phase, tols.unit));
        }
    }
    if (static_cast<Eigen::Index>(order.size()) != n) {
        throw Error(ErrorKind::Inconsistency, "pairing does not cover every Jordan block");
    }

    ComplexMatrix p(n, n);
    for (Eigen::Index k = 0; k < n; ++k) p.col(k) = basis.p.col(order[static_cast<std::size_t>(k)]);
    // The column permutation may flip the sign of det P.
    const Complex det = Eigen::PartialPivLU<ComplexMatrix>(p).determinant();
    p /= numerics::principal_root(det, static_cast<int>(n));

    const ComplexMatrix big_h = spectral::block_diagonal(symmetry_blocks);
    const ComplexMatrix h = p.conjugate() * big_h * Eigen::PartialPivLU<ComplexMatrix>(p).inverse();

    SymmetryWitness w = verify_reverser(a, h);
    w.basis_condition = basis.condition;
    w.witness_tol = tols.witness;
    const double limit = w.acceptance_threshold();
    w.accepted = w.residual_conjugation <= limit && w.residual_involution <= limit && w.residual_det <= limit;
    if (!w.accepted) {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << "witness residuals exceed tolerance " << limit
           << ": conjugation " << w.residual_conjugation << ", involution " << w.residual_involution
           << ", det " << w.residual_det << " (basis condition " << w.basis_condition << ")";
        throw AssemblyFailure(os.str(), w);
    }
    return w;
}

std::pair<ComplexMatrix, ComplexMatrix> factor_involutory(const ComplexMatrix& a, const SymmetryWitness& w) {
    if (a.rows() != w.h.rows() || a.cols() != w.h.cols()) {
        throw Error(ErrorKind::InvalidInput, "factor_involutory: dimension mismatch");
    }
    const auto hlu = checked_lu(w.h, "factor_involutory: h");
    checked_lu(a, "factor_involutory: A");
    // conj(A)^-1 h = h A for a reverser; the right side avoids an inverse.
    return {hlu.inverse(), w.h * a};
}

Relation reverser_relation(const ComplexMatrix& g, const ComplexMatrix& h, double tol) {
    if (g.rows() != h.rows() || g.cols() != h.cols() || g.rows() != g.cols()) {
        throw Error(ErrorKind::InvalidInput, "reverser_relation: dimension mismatch");
    }
    const auto hlu = checked_lu(h, "reverser_relation: h");
    const auto glu = checked_lu(g.conjugate(), "reverser_relation: g");
    const ComplexMatrix conjugated = h * g * hlu.inverse();
    const double scale = tol * frobenius(g);
    if (frobenius(conjugated - g) <= scale) return Relation::Centralizes;
    if (frobenius(conjugated - glu.inverse()) <= scale) return Relation::Reverses;
    return Relation::Neither;
}

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::Centralizes: return "centralizes";
        case Relation::Reverses: return "reverses";
        case Relation::Neither: return "neither";
    }
    return "neither";
}

}  // namespace crev::reversibility
