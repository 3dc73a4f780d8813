#include "crev/serialization.hpp"

namespace crev::io {

namespace {

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

json complex_list(const std::vector<Complex>& values) {
    json out = json::array();
    for (const auto& z : values) out.push_back(to_json(z));
    return out;
}

std::vector<Complex> complex_list_from(const json& j) {
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

classification::DynamicalType dynamical_type_from(const std::string& s) {
    using classification::DynamicalType;
    for (auto t : {DynamicalType::Elliptic, DynamicalType::Parabolic, DynamicalType::Loxodromic,
                   DynamicalType::Loxoparabolic})
        if (classification::to_string(t) == s) return t;
    throw Error(ErrorKind::ParseError, "unknown dynamical type '" + s + "'");
}

classification::ResultantSign sign_from(const std::string& s) {
    using classification::ResultantSign;
    for (auto v : {ResultantSign::Positive, ResultantSign::Negative, ResultantSign::Zero})
        if (classification::to_string(v) == s) return v;
    throw Error(ErrorKind::ParseError, "unknown resultant sign '" + s + "'");
}

classification::ResultantClass class_from(const std::string& s) {
    using classification::ResultantClass;
    for (auto v : {ResultantClass::RegularEvenLoxodromic, ResultantClass::RegularOddLoxodromic,
                   ResultantClass::NotRegular})
        if (classification::to_string(v) == s) return v;
    throw Error(ErrorKind::ParseError, "unknown resultant class '" + s + "'");
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorKind::ParseError, "complex number must be [re, im], got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back(to_json(m(i, k)));
    json out;
    out["n"] = m.rows();
    out["entries"] = std::move(entries);
    return out;
}

ComplexMatrix matrix_from_json(const json& j) {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto& entries = j.at("entries");
    if (n < 0 || static_cast<Eigen::Index>(entries.size()) != n * n) {
        throw Error(ErrorKind::ParseError, "matrix needs n^2 entries");
    }
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(entries[static_cast<std::size_t>(i * n + k)]);
    return m;
}

json to_json(const numerics::Polynomial& p) { return complex_list(p.coeffs()); }

numerics::Polynomial polynomial_from_json(const json& j) { return numerics::Polynomial(complex_list_from(j)); }

json to_json(const Tolerances& t) {
    json out;
    for (auto name : Tolerances::names()) out[std::string(name)] = t.get(name);
    out["max_iterations"] = t.max_iterations;
    return out;
}

Tolerances tolerances_from_json(const json& j) {
    Tolerances t;
    for (const auto& [key, value] : j.items()) {
        if (key == "max_iterations") {
            t.max_iterations = value.get<int>();
        } else {
            t.set(key, value.get<double>());
        }
    }
    return t;
}

json to_json(const spectral::SpectralData& s) {
    json out;
    out["dimension"] = s.dimension;
    json clusters = json::array();
    for (const auto& c : s.clusters) {
        json e;
        e["eigenvalue"] = to_json(c.eigenvalue);
        e["blocks"] = c.blocks;
        e["weyr"] = c.weyr;
        e["radius"] = c.radius;
        clusters.push_back(std::move(e));
    }
    out["clusters"] = std::move(clusters);
    out["semisimple"] = s.semisimple();
    if (s.basis) {
        json placements = json::array();
        for (const auto& b : s.basis->blocks) placements.push_back({{"cluster", b.cluster}, {"size", b.size}, {"offset", b.offset}});
        out["basis"] = to_json(s.basis->p);
        out["basis_blocks"] = std::move(placements);
        out["basis_condition"] = s.basis->condition;
        out["basis_residual"] = s.basis->residual;
    } else {
        out["basis"] = nullptr;
    }
    return out;
}

spectral::SpectralData spectral_from_json(const json& j) {
    spectral::SpectralData s;
    s.dimension = j.at("dimension").get<int>();
    for (const auto& e : j.at("clusters")) {
        spectral::EigenCluster c;
        c.eigenvalue = complex_from_json(e.at("eigenvalue"));
        c.blocks = e.at("blocks").get<std::vector<int>>();
        c.weyr = e.at("weyr").get<std::vector<int>>();
        c.radius = e.at("radius").get<double>();
        s.clusters.push_back(std::move(c));
    }
    if (!j.at("basis").is_null()) {
        spectral::JordanBasis b;
        b.p = matrix_from_json(j.at("basis"));
        for (const auto& e : j.at("basis_blocks"))
            b.blocks.push_back({e.at("cluster").get<int>(), e.at("size").get<int>(), e.at("offset").get<int>()});
        b.j = spectral::jordan_form(s.block_list());
        b.condition = j.at("basis_condition").get<double>();
        b.residual = j.at("basis_residual").get<double>();
        s.basis = std::move(b);
    }
    return s;
}

json to_json(const reversibility::PairingResult& p) {
    json out;
    out["verdict"] = p.verdict;
    json pairs = json::array();
    for (const auto& cp : p.pairs) pairs.push_back({{"first", cp.first}, {"second", cp.second}, {"blocks", cp.blocks}});
    out["pairs"] = std::move(pairs);
    out["singletons"] = p.singletons;
    out["unmatched"] = p.unmatched;
    json mismatched = json::array();
    for (const auto& [a, b] : p.mismatched) mismatched.push_back(json::array({a, b}));
    out["mismatched"] = std::move(mismatched);
    out["obstruction"] = p.obstruction ? json(*p.obstruction) : json(nullptr);
    return out;
}

reversibility::PairingResult pairing_from_json(const json& j) {
    reversibility::PairingResult p;
    p.verdict = j.at("verdict").get<bool>();
    for (const auto& e : j.at("pairs"))
        p.pairs.push_back({e.at("first").get<int>(), e.at("second").get<int>(), e.at("blocks").get<std::vector<int>>()});
    p.singletons = j.at("singletons").get<std::vector<int>>();
    p.unmatched = j.at("unmatched").get<std::vector<int>>();
    for (const auto& e : j.at("mismatched")) p.mismatched.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    p.obstruction = optional_from<std::string>(j, "obstruction");
    return p;
}

json to_json(const reversibility::SymmetryWitness& w) {
    json out;
    out["h"] = to_json(w.h);
    out["residual_conjugation"] = w.residual_conjugation;
    out["residual_involution"] = w.residual_involution;
    out["residual_det"] = w.residual_det;
    out["basis_condition"] = w.basis_condition;
    out["witness_tol"] = w.witness_tol;
    out["acceptance_threshold"] = w.acceptance_threshold();
    out["accepted"] = w.accepted;
    return out;
}

reversibility::SymmetryWitness witness_from_json(const json& j) {
    reversibility::SymmetryWitness w;
    w.h = matrix_from_json(j.at("h"));
    w.residual_conjugation = j.at("residual_conjugation").get<double>();
    w.residual_involution = j.at("residual_involution").get<double>();
    w.residual_det = j.at("residual_det").get<double>();
    w.basis_condition = j.at("basis_condition").get<double>();
    w.witness_tol = j.at("witness_tol").get<double>();
    w.accepted = j.at("accepted").get<bool>();
    return w;
}

json to_json(const classification::LoxodromyProfile& p) {
    json out;
    out["r"] = p.r;
    out["s"] = p.s;
    out["regular"] = p.regular;
    out["complete"] = p.complete;
    json pairs = json::array();
    for (const auto& lp : p.pairs) pairs.push_back({{"log_modulus", lp.log_modulus}, {"argument", lp.argument}});
    out["pairs"] = std::move(pairs);
    out["unit_arguments"] = p.unit_arguments;
    return out;
}

classification::LoxodromyProfile profile_from_json(const json& j) {
    classification::LoxodromyProfile p;
    p.r = j.at("r").get<int>();
    p.s = j.at("s").get<int>();
    p.regular = j.at("regular").get<bool>();
    p.complete = j.at("complete").get<bool>();
    for (const auto& e : j.at("pairs"))
        p.pairs.push_back({e.at("log_modulus").get<double>(), e.at("argument").get<double>()});
    p.unit_arguments = j.at("unit_arguments").get<std::vector<double>>();
    return p;
}

json to_json(const classification::Sl4Trace& t) {
    json out;
    out["c1"] = to_json(t.c1);
    out["c2"] = to_json(t.c2);
    out["c3"] = to_json(t.c3);
    out["path"] = t.path;
    out["branch"] = t.branch;
    out["verdict"] = t.verdict;
    out["pairing_verdict"] = t.pairing_verdict;
    out["consistent"] = t.consistent;
    out["c2_gap"] = t.c2_gap ? json(*t.c2_gap) : json(nullptr);
    out["coeff_scale"] = t.coeff_scale;
    return out;
}

classification::Sl4Trace sl4_from_json(const json& j) {
    classification::Sl4Trace t;
    t.c1 = complex_from_json(j.at("c1"));
    t.c2 = complex_from_json(j.at("c2"));
    t.c3 = complex_from_json(j.at("c3"));
    t.path = j.at("path").get<std::vector<std::string>>();
    t.branch = j.at("branch").get<std::string>();
    t.verdict = j.at("verdict").get<bool>();
    t.pairing_verdict = j.at("pairing_verdict").get<bool>();
    t.consistent = j.at("consistent").get<bool>();
    t.c2_gap = optional_from<double>(j, "c2_gap");
    t.coeff_scale = j.at("coeff_scale").get<double>();
    return t;
}

json to_json(const classification::ClassificationReport& r) {
    json out;
    out["dynamical_type"] = classification::to_string(r.dynamical_type);
    out["profile"] = to_json(r.profile);
    out["resultant_value"] = to_json(r.resultant.value);
    out["resultant_hadamard_bound"] = r.resultant.hadamard;
    out["resultant_sign"] = classification::to_string(r.resultant.sign);
    out["resultant_class"] = r.resultant_class ? json(classification::to_string(*r.resultant_class)) : json(nullptr);
    out["char_poly_c_reciprocal"] = r.char_poly_c_reciprocal;
    out["minpoly_c_reciprocal"] = r.minpoly_c_reciprocal;
    out["polynomial_criterion"] = r.polynomial_criterion;
    out["pairing_verdict"] = r.pairing_verdict;
    out["obstruction"] = r.obstruction ? json(*r.obstruction) : json(nullptr);
    out["trace_bounded"] = r.trace_bounded;
    out["sl4_path"] = r.sl4 ? json(r.sl4->path) : json(nullptr);
    out["sl4"] = r.sl4 ? to_json(*r.sl4) : json(nullptr);
    out["tolerances"] = to_json(r.tolerances);
    return out;
}

classification::ClassificationReport classification_from_json(const json& j) {
    classification::ClassificationReport r;
    r.dynamical_type = dynamical_type_from(j.at("dynamical_type").get<std::string>());
    r.profile = profile_from_json(j.at("profile"));
    r.resultant.value = complex_from_json(j.at("resultant_value"));
    r.resultant.hadamard = j.at("resultant_hadamard_bound").get<double>();
    r.resultant.sign = sign_from(j.at("resultant_sign").get<std::string>());
    if (auto c = optional_from<std::string>(j, "resultant_class")) r.resultant_class = class_from(*c);
    r.char_poly_c_reciprocal = j.at("char_poly_c_reciprocal").get<bool>();
    r.minpoly_c_reciprocal = j.at("minpoly_c_reciprocal").get<bool>();
    r.polynomial_criterion = j.at("polynomial_criterion").get<bool>();
    r.pairing_verdict = j.at("pairing_verdict").get<bool>();
    r.obstruction = optional_from<std::string>(j, "obstruction");
    r.trace_bounded = j.at("trace_bounded").get<bool>();
    if (!j.at("sl4").is_null()) r.sl4 = sl4_from_json(j.at("sl4"));
    r.tolerances = tolerances_from_json(j.at("tolerances"));
    return r;
}

}  // namespace crev::io
