#include "crev/classification.hpp"

#include <algorithm>
#include <cmath>

namespace crev::classification {

std::string_view to_string(DynamicalType t) {
    switch (t) {
        case DynamicalType::Elliptic: return "elliptic";
        case DynamicalType::Parabolic: return "parabolic";
        case DynamicalType::Loxodromic: return "loxodromic";
        case DynamicalType::Loxoparabolic: return "loxoparabolic";
    }
    return "elliptic";
}

std::string_view to_string(ResultantSign s) {
    switch (s) {
        case ResultantSign::Positive: return "positive";
        case ResultantSign::Negative: return "negative";
        case ResultantSign::Zero: return "zero";
    }
    return "zero";
}

std::string_view to_string(ResultantClass c) {
    switch (c) {
        case ResultantClass::RegularEvenLoxodromic: return "regular-even-loxodromic";
        case ResultantClass::RegularOddLoxodromic: return "regular-odd-loxodromic";
        case ResultantClass::NotRegular: return "not-regular";
    }
    return "not-regular";
}

namespace {

bool is_unit(Complex z, double unit_tol) { return std::abs(std::abs(z) - 1.0) <= unit_tol; }

}  // namespace

DynamicalType classify_type(const spectral::SpectralData& s, double unit_tol) {
    const bool all_unit = std::all_of(s.clusters.begin(), s.clusters.end(),
                                      [&](const spectral::EigenCluster& c) { return is_unit(c.eigenvalue, unit_tol); });
    if (s.semisimple()) return all_unit ? DynamicalType::Elliptic : DynamicalType::Loxodromic;
    return all_unit ? DynamicalType::Parabolic : DynamicalType::Loxoparabolic;
}

LoxodromyProfile loxodromy_profile(const spectral::SpectralData& s, double unit_tol, double match_tol) {
    LoxodromyProfile out;
    out.regular = std::all_of(s.clusters.begin(), s.clusters.end(),
                              [](const spectral::EigenCluster& c) { return c.multiplicity() == 1; });

    const auto count = s.clusters.size();
    std::vector<int> left(count);
    for (std::size_t i = 0; i < count; ++i) left[i] = s.clusters[i].multiplicity();

    for (std::size_t i = 0; i < count; ++i) {
        const Complex z = s.clusters[i].eigenvalue;
        if (is_unit(z, unit_tol)) {
            out.s += left[i];
            for (int k = 0; k < left[i]; ++k) out.unit_arguments.push_back(std::arg(z));
            left[i] = 0;
        }
    }
    // Pairs are anchored at the member outside the unit disc.
    for (std::size_t i = 0; i < count; ++i) {
        const Complex z = s.clusters[i].eigenvalue;
        if (left[i] == 0 || std::abs(z) < 1.0) continue;
        const Complex target = 1.0 / std::conj(z);
        for (std::size_t j = 0; j < count && left[i] > 0; ++j) {
            if (j == i || left[j] == 0) continue;
            if (std::abs(s.clusters[j].eigenvalue - target) > match_tol * std::max(1.0, std::abs(target))) continue;
            const int matched = std::min(left[i], left[j]);
            for (int k = 0; k < matched; ++k) out.pairs.push_back({std::log(std::abs(z)), std::arg(z)});
            out.r += matched;
            left[i] -= matched;
            left[j] -= matched;
        }
    }
    out.complete = std::all_of(left.begin(), left.end(), [](int v) { return v == 0; });
    return out;
}

ResultantReading resultant_reading(const numerics::Polynomial& chi, double res_tol) {
    const numerics::Polynomial d = chi.derivative();
    ResultantReading out;
    if (chi.degree() == 1) {
        // chi' is the constant lc(chi); Res(p, c) = c^deg p
        out.value = d.coeff(0);
        out.hadamard = std::abs(d.coeff(0));
    } else {
        out.value = numerics::resultant(chi, d);
        out.hadamard = numerics::hadamard_bound(chi, d);
    }
    if (std::abs(out.value.real()) <= res_tol) {
        out.sign = ResultantSign::Zero;
    } else {
        out.sign = out.value.real() > 0.0 ? ResultantSign::Positive : ResultantSign::Negative;
    }
    return out;
}

bool is_c_reciprocal_scaled(const numerics::Polynomial& p, double coeff_tol) {
    return numerics::is_c_reciprocal(p, coeff_tol * (1.0 + p.max_abs_coeff()));
}

bool polynomial_criterion(const numerics::Polynomial& chi, const numerics::Polynomial& minpoly, double coeff_tol) {
    return is_c_reciprocal_scaled(chi, coeff_tol) && is_c_reciprocal_scaled(minpoly, coeff_tol);
}

ResultantClass resultant_classify(const numerics::Polynomial& chi, const Tolerances& tols) {
    if (!is_c_reciprocal_scaled(chi, tols.coeff)) {
        throw Error(ErrorKind::TheoremPreconditionViolated,
                    "resultant sign law needs a c-reciprocal characteristic polynomial");
    }
    const ResultantReading r = resultant_reading(chi, tols.res);
    if (std::abs(r.value.imag()) > tols.res * (1.0 + std::abs(r.value))) {
        throw Error(ErrorKind::NumericalInconsistency, "resultant of a c-reciprocal polynomial has a large imaginary part");
    }
    switch (r.sign) {
        case ResultantSign::Positive: return ResultantClass::RegularEvenLoxodromic;
        case ResultantSign::Negative: return ResultantClass::RegularOddLoxodromic;
        case ResultantSign::Zero: break;
    }
    return ResultantClass::NotRegular;
}

ResultantClass resultant_classify(const ComplexMatrix& a, const Tolerances& tols) {
    return resultant_classify(numerics::char_poly(a), tols);
}

bool trace_bounded(const spectral::SpectralData& s, double unit_tol) {
    return std::all_of(s.clusters.begin(), s.clusters.end(),
                       [&](const spectral::EigenCluster& c) { return std::abs(c.eigenvalue) <= 1.0 + unit_tol; });
}

Sl4Trace sl4_classify(const ComplexMatrix& a, const spectral::SpectralData& s, const Tolerances& tols) {
    if (a.rows() != 4 || a.cols() != 4) throw Error(ErrorKind::InvalidInput, "sl4 classification needs a 4x4 matrix");
    const Complex det = Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
    if (std::abs(det - 1.0) > tols.det) {
        throw Error(ErrorKind::NotSpecialLinear, "sl4 classification needs det A = 1");
    }

    const numerics::Polynomial chi = numerics::char_poly(a);
    Sl4Trace t;
    t.c3 = -chi.coeff(3);
    t.c2 = chi.coeff(2);
    t.c1 = -chi.coeff(1);
    t.coeff_scale = tols.coeff * (1.0 + chi.max_abs_coeff());
    const double tol = t.coeff_scale;

    auto finish = [&](std::string branch, bool verdict) {
        t.branch = std::move(branch);
        t.verdict = verdict;
        t.pairing_verdict = reversibility::pairing_check(s, tols).verdict;
        t.consistent = t.verdict == t.pairing_verdict;
        return t;
    };

    const bool reciprocal = std::abs(t.c3 - std::conj(t.c1)) <= tol && std::abs(t.c2.imag()) <= tol;
    t.path.emplace_back(reciprocal ? "c-reciprocal-check: pass" : "c-reciprocal-check: fail");
    if (!reciprocal) return finish("not-c-reciprocal", false);

    const bool bounded = trace_bounded(s, tols.unit);
    t.path.emplace_back(bounded ? "trace-bounded: yes" : "trace-bounded: no");
    if (bounded) return finish("1", true);

    const int degree = spectral::minimal_polynomial(s).degree();
    t.path.push_back("minpoly-degree: " + std::to_string(degree));
    if (degree != 3) return finish("2", true);

    const Complex trace = t.c3;
    const bool real = std::abs(trace.imag()) <= tol;
    const bool imaginary = !real && std::abs(trace.real()) <= tol;
    if (!real && !imaginary) {
        t.path.emplace_back("trace-component: mixed");
        return finish("3a", true);
    }
    t.path.emplace_back(real ? "trace-component: real" : "trace-component: imaginary");
    const Complex boundary = t.c3 * t.c3 / 4.0 + (real ? 2.0 : -2.0);
    t.c2_gap = std::abs(t.c2 - boundary);
    const bool distinct = *t.c2_gap > tol;
    t.path.emplace_back(distinct ? "c2-condition: distinct" : "c2-condition: equal");
    return finish(real ? "3b-real" : "3b-imaginary", distinct);
}

Sl4Trace sl4_classify(const ComplexMatrix& a, const Tolerances& tols) {
    if (a.rows() != 4 || a.cols() != 4) throw Error(ErrorKind::InvalidInput, "sl4 classification needs a 4x4 matrix");
    return sl4_classify(a, spectral::eigen_structure(a, tols), tols);
}

ClassificationReport classify(const ComplexMatrix& a, const spectral::SpectralData& s,
                              const reversibility::PairingResult& pairing, const Tolerances& tols,
                              bool with_sl4) {
    ClassificationReport rep;
    rep.tolerances = tols;
    rep.dynamical_type = classify_type(s, tols.unit);
    rep.profile = loxodromy_profile(s, tols.unit, tols.match);
    rep.trace_bounded = trace_bounded(s, tols.unit);
    rep.pairing_verdict = pairing.verdict;
    rep.obstruction = pairing.obstruction;

    const numerics::Polynomial chi = numerics::char_poly(a);
    const numerics::Polynomial minpoly = spectral::minimal_polynomial(s);
    rep.char_poly_c_reciprocal = is_c_reciprocal_scaled(chi, tols.coeff);
    rep.minpoly_c_reciprocal = is_c_reciprocal_scaled(minpoly, tols.coeff);
    rep.polynomial_criterion = rep.char_poly_c_reciprocal && rep.minpoly_c_reciprocal;

    rep.resultant = resultant_reading(chi, tols.res);
    if (rep.char_poly_c_reciprocal) rep.resultant_class = resultant_classify(chi, tols);

    if (with_sl4 && a.rows() == 4) {
        const Complex det = Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
        if (std::abs(det - 1.0) <= tols.det) rep.sl4 = sl4_classify(a, s, tols);
    }
    return rep;
}

}  // namespace crev::classification
