#pragma once

#include "crev/classification.hpp"
#include "crev/common.hpp"
#include "crev/reversibility.hpp"
#include "crev/spectral.hpp"

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace crev::cli {

enum class InputFormat { Json, CsvPairs };
enum class OutputMode { Json, Text };
enum class Output { Pairing, Witness, Classify, Sl4, PolynomialCriterion };

std::string_view to_string(Output o);
Output output_from_string(std::string_view s);
InputFormat input_format_from_string(std::string_view s);

struct ParsedInput {
    ComplexMatrix matrix;
    std::map<std::string, double> tolerances;  // from a json "tolerances" object
};

// json: {"n": int, "entries": [[re, im], ...], "tolerances": {...}?}
// csv-pairs: n rows of 2n comma-separated reals, re/im interleaved.
// Errors are ParseError with a row/column position; the determinant check
// (skipped when det_tol is absent) raises NotSpecialLinear.
ParsedInput parse_input(std::string_view text, InputFormat format);
ComplexMatrix parse_matrix(std::string_view text, InputFormat format, std::optional<double> det_tol);
void check_special_linear(const ComplexMatrix& m, double det_tol);

struct AnalysisRequest {
    std::string source;  // input name, echoed
    ComplexMatrix matrix;
    std::map<std::string, double> tolerance_overrides;
    double default_scale = 1.0;  // multiplies every default tolerance first
    std::set<Output> outputs{Output::Pairing, Output::Witness, Output::Classify, Output::Sl4,
                             Output::PolynomialCriterion};
    bool sl_check = true;

    // Rejects unknown tolerance names (Error InvalidInput).
    Tolerances tolerances() const;
};

struct StageError {
    std::string stage;
    ErrorKind kind = ErrorKind::InvalidInput;
    std::string message;
};

struct AnalysisReport {
    std::string source;
    ComplexMatrix matrix;
    std::vector<Output> outputs;
    bool sl_check = true;
    Tolerances tolerances;

    std::optional<numerics::Polynomial> char_poly;
    std::optional<numerics::Polynomial> min_poly;
    std::optional<spectral::SpectralData> spectral;
    std::optional<reversibility::PairingResult> pairing;
    std::optional<reversibility::SymmetryWitness> witness;
    std::optional<classification::ClassificationReport> classification;
    std::optional<classification::Sl4Trace> sl4;
    std::vector<std::string> warnings;
    std::optional<StageError> error;
};

// char/min poly -> spectral -> pairing -> witness -> classification -> sl4.
// Module errors stop the pipeline and land in report.error with the stage name.
AnalysisReport run_analyze(const AnalysisRequest& req);

// Parses `text` and runs the pipeline with `base` as the request template.
// Tolerances from the input file apply first; overrides already in `base`
// win. Parse failures become an error at stage "parse".
AnalysisReport analyze_input(const std::string& source, std::string_view text, InputFormat format,
                             AnalysisRequest base);

// Verification of a user-supplied reverser h for A.
reversibility::SymmetryWitness run_verify(const ComplexMatrix& a, const ComplexMatrix& h, const Tolerances& tols);

std::string emit_report(const AnalysisReport& rep, OutputMode mode);
AnalysisReport report_from_json(std::string_view text);

// 0 analyzed, 2 parse error, 3 not special linear, 4 solver or assembly
// failure, 5 inconsistency.
int exit_code(ErrorKind kind);
int exit_code(const AnalysisReport& rep);

}  // namespace crev::cli
