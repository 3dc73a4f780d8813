#include "crev/numerics.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace crev {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::SolverFailure: return "solver-failure";
        case ErrorKind::SpectralAmbiguity: return "spectral-ambiguity";
        case ErrorKind::IllConditionedJordan: return "ill-conditioned-jordan";
        case ErrorKind::AmbiguousPairing: return "ambiguous-pairing";
        case ErrorKind::NotReversible: return "not-reversible";
        case ErrorKind::AssemblyFailure: return "assembly-failure";
        case ErrorKind::TheoremPreconditionViolated: return "theorem-precondition-violated";
        case ErrorKind::NumericalInconsistency: return "numerical-inconsistency";
        case ErrorKind::ParseError: return "parse-error";
        case ErrorKind::NotSpecialLinear: return "not-special-linear";
        case ErrorKind::Inconsistency: return "inconsistency";
    }
    return "unknown";
}

namespace {

struct Field {
    std::string_view name;
    double Tolerances::*member;
};

constexpr std::array<Field, 10> kFields{{
    {"det", &Tolerances::det},
    {"cluster", &Tolerances::cluster},
    {"solver", &Tolerances::solver},
    {"rank", &Tolerances::rank},
    {"unit", &Tolerances::unit},
    {"match", &Tolerances::match},
    {"chain", &Tolerances::chain},
    {"witness", &Tolerances::witness},
    {"res", &Tolerances::res},
    {"coeff", &Tolerances::coeff},
}};

}  // namespace

Tolerances Tolerances::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw Error(ErrorKind::InvalidInput, "tolerance scale must be a positive finite number");
    }
    Tolerances t = *this;
    for (const auto& f : kFields) t.*(f.member) *= factor;
    return t;
}

const std::vector<std::string_view>& Tolerances::names() {
    static const std::vector<std::string_view> n = [] {
        std::vector<std::string_view> out;
        for (const auto& f : kFields) out.push_back(f.name);
        return out;
    }();
    return n;
}

double Tolerances::get(std::string_view name) const {
    for (const auto& f : kFields)
        if (f.name == name) return this->*(f.member);
    throw Error(ErrorKind::InvalidInput, "unknown tolerance '" + std::string(name) + "'");
}

void Tolerances::set(std::string_view name, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::InvalidInput,
                    "tolerance '" + std::string(name) + "' must be a positive finite number");
    }
    for (const auto& f : kFields) {
        if (f.name == name) {
            this->*(f.member) = value;
            return;
        }
    }
    throw Error(ErrorKind::InvalidInput, "unknown tolerance '" + std::string(name) + "'");
}

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool is_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!is_finite(m(i, j))) return false;
    return true;
}

}  // namespace crev

namespace crev::numerics {

using boost::multiprecision::cpp_int;

cpp_int binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    cpp_int out = 1;
    for (int i = 1; i <= k; ++i) {
        out *= (n - k + i);
        out /= i;
    }
    return out;
}

cpp_int binomial_identity_check(BinomialIdentity kind, int n, int r_or_k) {
    if (n < 1 || r_or_k < 0 || r_or_k >= n) {
        throw Error(ErrorKind::InvalidInput, "binomial identity needs 0 <= r < n");
    }
    cpp_int sum = 0;
    if (kind == BinomialIdentity::BL1) {
        if (n < 2) throw Error(ErrorKind::InvalidInput, "BL1 needs n > 1");
        const int r = r_or_k;
        sum = binomial(n - 1, r);
        for (int t = 1; t <= n - r; ++t) {
            if (t % 2 == 1) sum -= binomial(n, r + t);
            else sum += binomial(n, r + t);
        }
    } else {
        const int k = r_or_k;
        for (int j = k; j <= n; ++j) {
            const cpp_int term = binomial(j, k) * binomial(n, j);
            if ((j - k) % 2 == 0) sum += term;
            else sum -= term;
        }
    }
    return sum;
}

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
    if (m.size() == 0) return Eigen::VectorXd{};
    const Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

int numeric_rank(const ComplexMatrix& m, double rank_tol) {
    const auto s = singular_values(m);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    return numeric_rank(m, rank_tol, s(0));
}

int numeric_rank(const ComplexMatrix& m, double rank_tol, double scale) {
    const auto s = singular_values(m);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rank_tol * scale) ++rank;
    return rank;
}

double condition_number(const ComplexMatrix& m) {
    const auto s = singular_values(m);
    if (s.size() == 0) return 1.0;
    const double smallest = s(s.size() - 1);
    if (smallest == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smallest;
}

ComplexMatrix null_space(const ComplexMatrix& m, double threshold) {
    const Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index cols = m.cols();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

Complex principal_root(Complex z, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "root order must be positive");
    if (z == Complex{}) return {};
    return std::polar(std::pow(std::abs(z), 1.0 / n), std::arg(z) / n);
}

}  // namespace crev::numerics
