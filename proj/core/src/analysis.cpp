#include "crev/analysis.hpp"

#include "crev/serialization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace crev::cli {

using io::json;

namespace {

Error parse_error(const std::string& message) { return Error(ErrorKind::ParseError, message); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string sci(Complex z) { return sci(z.real()) + (z.imag() < 0 ? " - " : " + ") + sci(std::abs(z.imag())) + "i"; }

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t offset) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

ParsedInput parse_json_input(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = position_of(text, e.byte > 0 ? e.byte - 1 : 0);
        throw parse_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                          ": malformed json");
    }
    if (!doc.is_object()) throw parse_error("line 1, column 1: expected a json object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "n" && key != "entries" && key != "tolerances") throw parse_error("unknown key '" + key + "'");
    }
    if (!doc.contains("n") || !doc["n"].is_number_integer()) throw parse_error("\"n\" must be an integer");
    const auto n = doc["n"].get<long long>();
    if (n < 1) throw parse_error("\"n\" must be positive");
    if (!doc.contains("entries") || !doc["entries"].is_array()) throw parse_error("\"entries\" must be an array");
    const auto& entries = doc["entries"];
    if (static_cast<long long>(entries.size()) != n * n) {
        throw parse_error("\"entries\" has " + std::to_string(entries.size()) + " elements, expected n^2 = " +
                          std::to_string(n * n));
    }

    ParsedInput out;
    out.matrix.resize(n, n);
    for (long long k = 0; k < n * n; ++k) {
        const auto& e = entries[static_cast<std::size_t>(k)];
        const long long row = k / n + 1, column = k % n + 1;
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw parse_error("row " + std::to_string(row) + ", column " + std::to_string(column) +
                              ": entry must be [re, im]");
        }
        out.matrix(k / n, k % n) = Complex{e[0].get<double>(), e[1].get<double>()};
    }
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        if (!t.is_object()) throw parse_error("\"tolerances\" must be an object");
        Tolerances probe;
        for (const auto& [key, value] : t.items()) {
            if (!value.is_number()) throw parse_error("tolerance '" + key + "' must be a number");
            try {
                probe.set(key, value.get<double>());
            } catch (const Error& e) {
                throw parse_error(e.what());
            }
            out.tolerances[key] = value.get<double>();
        }
    }
    if (!is_finite(out.matrix)) throw parse_error("matrix has non-finite entries");
    return out;
}

ParsedInput parse_csv_input(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        std::vector<double> values;
        std::size_t column = 0;
        while (true) {
            ++column;
            const auto comma = line.find(',');
            const std::string_view field = trim(line.substr(0, comma));
            double v = 0.0;
            const auto* first = field.data();
            const auto* last = field.data() + field.size();
            if (!field.empty() && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
                throw parse_error("row " + std::to_string(line_no) + ", column " + std::to_string(column) +
                                  ": not a finite real number: '" + std::string(field) + "'");
            }
            values.push_back(v);
            if (comma == std::string_view::npos) break;
            line = line.substr(comma + 1);
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw parse_error("row 1, column 1: empty input");
    const auto n = rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != 2 * n) {
            throw parse_error("row " + std::to_string(i + 1) + ", column " + std::to_string(rows[i].size()) +
                              ": expected " + std::to_string(2 * n) + " values (re,im pairs for " +
                              std::to_string(n) + " columns)");
        }
    }
    ParsedInput out;
    out.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = {rows[i][2 * k], rows[i][2 * k + 1]};
    return out;
}

void add_stage_error(AnalysisReport& rep, std::string stage, const Error& e) {
    rep.error = StageError{std::move(stage), e.kind(), e.what()};
}

}  // namespace

std::string_view to_string(Output o) {
    switch (o) {
        case Output::Pairing: return "pairing";
        case Output::Witness: return "witness";
        case Output::Classify: return "classify";
        case Output::Sl4: return "sl4";
        case Output::PolynomialCriterion: return "polynomial-criterion";
    }
    return "pairing";
}

Output output_from_string(std::string_view s) {
    for (auto o : {Output::Pairing, Output::Witness, Output::Classify, Output::Sl4, Output::PolynomialCriterion})
        if (to_string(o) == s) return o;
    throw parse_error("unknown output '" + std::string(s) + "'");
}

InputFormat input_format_from_string(std::string_view s) {
    if (s == "json") return InputFormat::Json;
    if (s == "csv-pairs" || s == "csv") return InputFormat::CsvPairs;
    throw parse_error("unknown input format '" + std::string(s) + "'");
}

ParsedInput parse_input(std::string_view text, InputFormat format) {
    return format == InputFormat::Json ? parse_json_input(text) : parse_csv_input(text);
}

void check_special_linear(const ComplexMatrix& m, double det_tol) {
    const Complex det = Eigen::PartialPivLU<ComplexMatrix>(m).determinant();
    if (!(std::abs(det - 1.0) <= det_tol)) {
        throw Error(ErrorKind::NotSpecialLinear, "matrix is not in SL(n): det = " + sci(det) +
                                                     ", |det - 1| = " + sci(std::abs(det - 1.0)) +
                                                     " > det_tol " + sci(det_tol));
    }
}

ComplexMatrix parse_matrix(std::string_view text, InputFormat format, std::optional<double> det_tol) {
    ParsedInput in = parse_input(text, format);
    if (det_tol) check_special_linear(in.matrix, *det_tol);
    return std::move(in.matrix);
}

Tolerances AnalysisRequest::tolerances() const {
    Tolerances t = Tolerances{}.scaled(default_scale);
    for (const auto& [name, value] : tolerance_overrides) t.set(name, value);
    return t;
}

AnalysisReport run_analyze(const AnalysisRequest& req) {
    AnalysisReport rep;
    rep.source = req.source;
    rep.matrix = req.matrix;
    rep.outputs.assign(req.outputs.begin(), req.outputs.end());
    rep.sl_check = req.sl_check;

    try {
        rep.tolerances = req.tolerances();
    } catch (const Error& e) {
        add_stage_error(rep, "tolerances", e);
        return rep;
    }
    const Tolerances& tols = rep.tolerances;
    const ComplexMatrix& a = req.matrix;
    auto wants = [&](Output o) { return req.outputs.count(o) > 0; };

    std::string stage = "sl-check";
    try {
        if (a.rows() == 0 || a.rows() != a.cols()) throw Error(ErrorKind::InvalidInput, "matrix must be square");
        if (req.sl_check) check_special_linear(a, tols.det);

        stage = "char-poly";
        rep.char_poly = numerics::char_poly(a);

        stage = "spectral";
        spectral::SpectralData s = spectral::eigen_structure(a, tols);
        rep.min_poly = spectral::minimal_polynomial(s);
        rep.spectral = s;

        stage = "pairing";
        rep.pairing = reversibility::pairing_check(s, tols);

        if (wants(Output::Witness) && rep.pairing->verdict) {
            stage = "jordan-basis";
            s.basis = spectral::jordan_basis(a, s, tols);
            rep.spectral = s;
            // cond(P) beyond this puts the acceptance threshold above 1.
            if (s.basis->condition > 1.0 / std::sqrt(tols.witness)) {
                rep.warnings.push_back("ill-conditioned Jordan basis: cond(P) = " + sci(s.basis->condition));
            }
            stage = "witness";
            try {
                rep.witness = reversibility::assemble_reverser(a, s, *rep.pairing, tols);
            } catch (const reversibility::AssemblyFailure& e) {
                rep.witness = e.witness;
                throw;
            }
        }

        if (wants(Output::Classify) || wants(Output::PolynomialCriterion)) {
            stage = "classification";
            rep.classification = classification::classify(a, s, *rep.pairing, tols, false);
            const bool poly = rep.classification->polynomial_criterion;
            if (poly != rep.pairing->verdict) {
                rep.warnings.push_back(std::string("polynomial-criterion: ") + (poly ? "pass" : "fail") +
                                       ", pairing: " + (rep.pairing->verdict ? "pass" : "fail"));
            }
            const auto& rc = rep.classification->resultant_class;
            if (rc && (*rc != classification::ResultantClass::NotRegular) != rep.classification->profile.regular) {
                rep.warnings.push_back(std::string("resultant: ") + std::string(classification::to_string(*rc)) +
                                       ", eigenvalue clusters: " +
                                       (rep.classification->profile.regular ? "simple" : "repeated"));
            }
        }

        if (a.rows() == 4 && (wants(Output::Sl4) || wants(Output::Classify))) {
            stage = "sl4";
            const Complex det = Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
            if (std::abs(det - 1.0) <= tols.det) {
                rep.sl4 = classification::sl4_classify(a, s, tols);
                if (rep.classification) rep.classification->sl4 = rep.sl4;
                if (!rep.sl4->consistent) {
                    rep.error = StageError{"sl4", ErrorKind::Inconsistency,
                                           std::string("trace-condition verdict (") +
                                               (rep.sl4->verdict ? "c-reversible" : "not c-reversible") +
                                               ") disagrees with the pairing verdict"};
                }
            } else {
                rep.warnings.push_back("sl4 decision tree skipped: det A != 1");
            }
        }
    } catch (const Error& e) {
        add_stage_error(rep, stage, e);
    }
    return rep;
}

AnalysisReport analyze_input(const std::string& source, std::string_view text, InputFormat format,
                             AnalysisRequest base) {
    base.source = source;
    try {
        ParsedInput in = parse_input(text, format);
        base.matrix = std::move(in.matrix);
        for (const auto& [name, value] : in.tolerances) base.tolerance_overrides.emplace(name, value);
    } catch (const Error& e) {
        AnalysisReport rep;
        rep.source = source;
        rep.outputs.assign(base.outputs.begin(), base.outputs.end());
        rep.sl_check = base.sl_check;
        try {
            rep.tolerances = base.tolerances();
        } catch (const Error&) {
            rep.tolerances = Tolerances{};
        }
        add_stage_error(rep, "parse", e);
        return rep;
    }
    return run_analyze(base);
}

reversibility::SymmetryWitness run_verify(const ComplexMatrix& a, const ComplexMatrix& h, const Tolerances& tols) {
    reversibility::SymmetryWitness w = reversibility::verify_reverser(a, h);
    w.basis_condition = numerics::condition_number(h);
    w.witness_tol = tols.witness;
    const double limit = w.acceptance_threshold();
    w.accepted = w.residual_conjugation <= limit && w.residual_involution <= limit && w.residual_det <= limit;
    return w;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ParseError:
        case ErrorKind::InvalidInput: return 2;
        case ErrorKind::NotSpecialLinear: return 3;
        case ErrorKind::Inconsistency:
        case ErrorKind::NumericalInconsistency: return 5;
        default: return 4;
    }
}

int exit_code(const AnalysisReport& rep) { return rep.error ? exit_code(rep.error->kind) : 0; }

namespace {

json report_to_json(const AnalysisReport& rep) {
    json out;
    out["source"] = rep.source;
    out["dimension"] = rep.matrix.rows();
    out["matrix"] = io::to_json(rep.matrix);
    json outputs = json::array();
    for (auto o : rep.outputs) outputs.push_back(std::string(to_string(o)));
    out["outputs"] = std::move(outputs);
    out["sl_check"] = rep.sl_check;
    out["tolerances"] = io::to_json(rep.tolerances);
    out["char_poly"] = rep.char_poly ? io::to_json(*rep.char_poly) : json(nullptr);
    out["min_poly"] = rep.min_poly ? io::to_json(*rep.min_poly) : json(nullptr);
    out["spectral"] = rep.spectral ? io::to_json(*rep.spectral) : json(nullptr);
    if (rep.pairing) {
        json p = io::to_json(*rep.pairing);
        p["unit_tol"] = rep.tolerances.unit;
        p["match_tol"] = rep.tolerances.match;
        out["pairing"] = std::move(p);
    } else {
        out["pairing"] = nullptr;
    }
    out["witness"] = rep.witness ? io::to_json(*rep.witness) : json(nullptr);
    out["classification"] = rep.classification ? io::to_json(*rep.classification) : json(nullptr);
    // The trace lives inside the classification when there is one.
    out["sl4"] = (rep.sl4 && !rep.classification) ? io::to_json(*rep.sl4) : json(nullptr);
    out["warnings"] = rep.warnings;
    if (rep.error) {
        out["error"] = {{"stage", rep.error->stage},
                        {"kind", std::string(crev::to_string(rep.error->kind))},
                        {"message", rep.error->message}};
    } else {
        out["error"] = nullptr;
    }
    out["exit_code"] = exit_code(rep);
    return out;
}

ErrorKind kind_from_string(const std::string& s) {
    for (int k = 0; k <= static_cast<int>(ErrorKind::Inconsistency); ++k) {
        const auto kind = static_cast<ErrorKind>(k);
        if (crev::to_string(kind) == s) return kind;
    }
    throw parse_error("unknown error kind '" + s + "'");
}

std::string text_report(const AnalysisReport& rep) {
    std::ostringstream os;
    os << "source: " << (rep.source.empty() ? "-" : rep.source) << "\n";
    os << "dimension: " << rep.matrix.rows() << "\n";

    if (rep.pairing) {
        if (!rep.pairing->verdict) {
            os << "c-reversible: no\n";
            if (rep.pairing->obstruction) os << "obstruction: " << *rep.pairing->obstruction << "\n";
        } else if (rep.witness && rep.witness->accepted) {
            os << "c-reversible: yes (strong)\n";
        } else {
            os << "c-reversible: yes\n";
        }
    } else {
        os << "c-reversible: undetermined\n";
    }

    if (rep.spectral) {
        os << "eigenvalues:\n";
        for (const auto& c : rep.spectral->clusters) {
            os << "  " << sci(c.eigenvalue) << "  blocks {";
            for (std::size_t i = 0; i < c.blocks.size(); ++i) os << (i ? "," : "") << c.blocks[i];
            os << "}\n";
        }
    }
    if (rep.classification) {
        const auto& c = *rep.classification;
        os << "type: " << classification::to_string(c.dynamical_type) << "\n";
        os << "loxodromy: r = " << c.profile.r << ", s = " << c.profile.s
           << ", regular: " << (c.profile.regular ? "yes" : "no")
           << (c.profile.complete ? "" : ", incomplete pairing") << "\n";
        os << "trace bounded: " << (c.trace_bounded ? "yes" : "no") << " (unit_tol " << sci(c.tolerances.unit) << ")\n";
        os << "resultant: " << sci(c.resultant.value) << ", sign " << classification::to_string(c.resultant.sign)
           << " (res_tol " << sci(c.tolerances.res) << ", hadamard bound " << sci(c.resultant.hadamard) << ")\n";
        if (c.resultant_class) os << "resultant class: " << classification::to_string(*c.resultant_class) << "\n";
        os << "polynomial criterion: " << (c.polynomial_criterion ? "pass" : "fail") << " (coeff_tol "
           << sci(c.tolerances.coeff) << ")\n";
    }
    if (rep.witness) {
        const auto& w = *rep.witness;
        os << "witness: " << (w.accepted ? "accepted" : "rejected") << "\n";
        os << "  residual conjugation: " << sci(w.residual_conjugation) << "\n";
        os << "  residual involution: " << sci(w.residual_involution) << "\n";
        os << "  residual det: " << sci(w.residual_det) << "\n";
        os << "  basis condition: " << sci(w.basis_condition) << "\n";
        os << "  threshold: " << sci(w.acceptance_threshold()) << " (witness_tol " << sci(w.witness_tol)
           << " x (1 + cond^2))\n";
    }
    if (rep.sl4) {
        os << "sl4 path:";
        for (const auto& step : rep.sl4->path) os << "\n  " << step;
        os << "\nsl4 verdict: " << (rep.sl4->verdict ? "c-reversible" : "not c-reversible") << " (branch "
           << rep.sl4->branch << ", " << (rep.sl4->consistent ? "agrees with pairing" : "DISAGREES with pairing")
           << ")\n";
    }
    if (rep.warnings.empty()) {
        os << "warnings: none\n";
    } else {
        os << "warnings:\n";
        for (const auto& w : rep.warnings) os << "  " << w << "\n";
    }
    if (rep.error) {
        os << "error: " << crev::to_string(rep.error->kind) << " at stage " << rep.error->stage << ": "
           << rep.error->message << "\n";
    }
    return os.str();
}

}  // namespace

std::string emit_report(const AnalysisReport& rep, OutputMode mode) {
    if (mode == OutputMode::Text) return text_report(rep);
    return report_to_json(rep).dump(2) + "\n";
}

AnalysisReport report_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("malformed report: ") + e.what());
    }
    try {
        AnalysisReport rep;
        rep.source = j.at("source").get<std::string>();
        rep.matrix = io::matrix_from_json(j.at("matrix"));
        for (const auto& o : j.at("outputs")) rep.outputs.push_back(output_from_string(o.get<std::string>()));
        rep.sl_check = j.at("sl_check").get<bool>();
        rep.tolerances = io::tolerances_from_json(j.at("tolerances"));
        if (!j.at("char_poly").is_null()) rep.char_poly = io::polynomial_from_json(j.at("char_poly"));
        if (!j.at("min_poly").is_null()) rep.min_poly = io::polynomial_from_json(j.at("min_poly"));
        if (!j.at("spectral").is_null()) rep.spectral = io::spectral_from_json(j.at("spectral"));
        if (!j.at("pairing").is_null()) rep.pairing = io::pairing_from_json(j.at("pairing"));
        if (!j.at("witness").is_null()) rep.witness = io::witness_from_json(j.at("witness"));
        if (!j.at("classification").is_null()) {
            rep.classification = io::classification_from_json(j.at("classification"));
            rep.sl4 = rep.classification->sl4;
        }
        if (!j.at("sl4").is_null()) rep.sl4 = io::sl4_from_json(j.at("sl4"));
        rep.warnings = j.at("warnings").get<std::vector<std::string>>();
        if (!j.at("error").is_null()) {
            const auto& e = j.at("error");
            rep.error = StageError{e.at("stage").get<std::string>(), kind_from_string(e.at("kind").get<std::string>()),
                                   e.at("message").get<std::string>()};
        }
        return rep;
    } catch (const json::exception& e) {
        throw parse_error(std::string("malformed report: ") + e.what());
    }
}

}  // namespace crev::cli
