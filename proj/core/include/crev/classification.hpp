#pragma once

#include "crev/common.hpp"
#include "crev/numerics.hpp"
#include "crev/reversibility.hpp"
#include "crev/spectral.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crev::classification {

enum class DynamicalType { Elliptic, Parabolic, Loxodromic, Loxoparabolic };

std::string_view to_string(DynamicalType t);

// semisimple x (all moduli on the unit circle)
DynamicalType classify_type(const spectral::SpectralData& s, double unit_tol);

struct LoxodromicPair {
    double log_modulus = 0.0;  // l > 0, the member outside the unit disc
    double argument = 0.0;
};

struct LoxodromyProfile {
    int r = 0;  // matched non-unit pairs, counted with multiplicity
    int s = 0;  // unit-modulus eigenvalues, counted with multiplicity
    bool regular = false;
    bool complete = true;  // false when some non-unit eigenvalue has no partner
    std::vector<LoxodromicPair> pairs;
    std::vector<double> unit_arguments;
};

LoxodromyProfile loxodromy_profile(const spectral::SpectralData& s, double unit_tol,
                                   double match_tol = Tolerances{}.match);

enum class ResultantSign { Positive, Negative, Zero };
enum class ResultantClass { RegularEvenLoxodromic, RegularOddLoxodromic, NotRegular };

std::string_view to_string(ResultantSign s);
std::string_view to_string(ResultantClass c);

struct ResultantReading {
    Complex value;
    double hadamard = 1.0;  // bound on |R|, reported alongside the absolute dead band
    ResultantSign sign = ResultantSign::Zero;
};

// Res(chi, chi') from the Sylvester determinant. Re R within res_tol * H of
// zero reads as Zero, H the Hadamard bound of the Sylvester matrix.
ResultantReading resultant_reading(const numerics::Polynomial& chi, double res_tol);

// Sign law for c-reciprocal characteristic polynomials. Throws
// TheoremPreconditionViolated when chi is not c-reciprocal at coeff_tol and
// NumericalInconsistency when |Im R| > res_tol * (1 + |R|) after scaling by H.
ResultantClass resultant_classify(const ComplexMatrix& a, const Tolerances& tols = {});
ResultantClass resultant_classify(const numerics::Polynomial& chi, const Tolerances& tols = {});

// Every eigenvalue modulus <= 1 + unit_tol. Decided from the spectrum.
bool trace_bounded(const spectral::SpectralData& s, double unit_tol);

// Coefficient test at coeff_tol * (1 + max|a_k|).
bool is_c_reciprocal_scaled(const numerics::Polynomial& p, double coeff_tol);

// chi and the minimal polynomial both c-reciprocal.
bool polynomial_criterion(const numerics::Polynomial& chi, const numerics::Polynomial& minpoly, double coeff_tol);

// Decision path through the SL(4) trace conditions. chi = x^4 - c3 x^3 + c2 x^2 - c1 x + 1.
struct Sl4Trace {
    Complex c1, c2, c3;
    std::vector<std::string> path;  // "label: outcome" in evaluation order
    std::string branch;             // terminal branch name
    bool verdict = false;           // c-reversible according to the trace conditions
    bool pairing_verdict = false;
    bool consistent = true;
    std::optional<double> c2_gap;   // |c2 - (c3^2/4 +- 2)| when branch 3b is reached
    double coeff_scale = 0.0;       // coeff_tol * (1 + max|c_k|)
};

// Spectral data is recomputed when not supplied. Throws InvalidInput for n != 4
// and NotSpecialLinear when |det A - 1| > det_tol. Disagreement with the
// pairing check is recorded (consistent = false), never thrown.
Sl4Trace sl4_classify(const ComplexMatrix& a, const Tolerances& tols = {});
Sl4Trace sl4_classify(const ComplexMatrix& a, const spectral::SpectralData& s, const Tolerances& tols = {});

struct ClassificationReport {
    DynamicalType dynamical_type = DynamicalType::Elliptic;
    LoxodromyProfile profile;
    ResultantReading resultant;
    std::optional<ResultantClass> resultant_class;  // only when chi is c-reciprocal
    bool char_poly_c_reciprocal = false;
    bool minpoly_c_reciprocal = false;
    bool polynomial_criterion = false;
    bool pairing_verdict = false;
    std::optional<std::string> obstruction;
    std::optional<Sl4Trace> sl4;
    bool trace_bounded = false;
    Tolerances tolerances;
};

ClassificationReport classify(const ComplexMatrix& a, const spectral::SpectralData& s,
                              const reversibility::PairingResult& pairing, const Tolerances& tols = {},
                              bool with_sl4 = true);

}  // namespace crev::classification
