#include "crev/analysis.hpp"
#include "crev/numerics.hpp"
#include "crev/reversibility.hpp"
#include "crev/serialization.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace crev;

namespace {

struct Options {
    std::string input = "-";
    std::string format;  // empty: from the file extension
    std::string output = "json";
    std::string batch;
    std::string out_dir;
    std::string reverser;  // verify only
    bool no_sl_check = false;
    std::map<std::string, double> tolerances;
};

std::string read_all(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cli::InputFormat format_for(const Options& o, const std::string& path) {
    if (!o.format.empty()) return cli::input_format_from_string(o.format);
    const auto ext = fs::path(path).extension().string();
    return ext == ".csv" ? cli::InputFormat::CsvPairs : cli::InputFormat::Json;
}

cli::OutputMode output_mode(const Options& o) {
    if (o.output == "json") return cli::OutputMode::Json;
    if (o.output == "text") return cli::OutputMode::Text;
    throw Error(ErrorKind::ParseError, "unknown output mode '" + o.output + "'");
}

double default_scale() {
    const char* env = std::getenv("CREV_DEFAULT_TOL");
    if (!env || !*env) return 1.0;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
        throw Error(ErrorKind::ParseError, std::string("CREV_DEFAULT_TOL must be a positive number, got '") + env + "'");
    }
    return v;
}

cli::AnalysisRequest make_request(const Options& o, std::set<cli::Output> outputs) {
    cli::AnalysisRequest req;
    req.default_scale = default_scale();
    req.tolerance_overrides = o.tolerances;
    req.outputs = std::move(outputs);
    req.sl_check = !o.no_sl_check;
    return req;
}

cli::AnalysisReport analyze_file(const Options& o, const std::string& path, const cli::AnalysisRequest& req,
                                 bool sl4_only) {
    std::string text;
    try {
        text = read_all(path);
    } catch (const Error& e) {
        cli::AnalysisReport rep;
        rep.source = path;
        rep.outputs.assign(req.outputs.begin(), req.outputs.end());
        rep.error = cli::StageError{"parse", e.kind(), e.what()};
        return rep;
    }
    cli::AnalysisReport rep = cli::analyze_input(path, text, format_for(o, path), req);
    if (sl4_only && !rep.error && rep.matrix.rows() != 4) {
        rep.error = cli::StageError{"sl4", ErrorKind::InvalidInput, "sl4 decision tree needs a 4x4 matrix"};
    }
    return rep;
}

std::vector<fs::path> batch_inputs(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        const auto ext = entry.path().extension().string();
        if (name.ends_with(".report.json")) continue;
        if (ext == ".json" || ext == ".csv") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Reports land in <out-dir>/<stem>.report.json; files are independent so they
// run on a small pool of workers.
int run_batch(const Options& o, const cli::AnalysisRequest& req, bool sl4_only) {
    const fs::path dir(o.batch);
    if (!fs::is_directory(dir)) throw Error(ErrorKind::ParseError, "batch path '" + o.batch + "' is not a directory");
    const fs::path out_dir = o.out_dir.empty() ? dir : fs::path(o.out_dir);
    fs::create_directories(out_dir);

    const auto inputs = batch_inputs(dir);
    std::vector<int> codes(inputs.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
            const auto rep = analyze_file(o, inputs[i].string(), req, sl4_only);
            std::ofstream out(out_dir / (inputs[i].stem().string() + ".report.json"), std::ios::binary);
            out << cli::emit_report(rep, cli::OutputMode::Json);
            codes[i] = cli::exit_code(rep);
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                          static_cast<unsigned>(inputs.size())));
    std::vector<std::future<void>> pool;
    for (unsigned t = 0; t < count; ++t) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();

    int worst = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        std::cout << inputs[i].filename().string() << ": exit " << codes[i] << "\n";
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

int run_pipeline(const Options& o, std::set<cli::Output> outputs, bool sl4_only = false) {
    const auto mode = output_mode(o);
    const auto req = make_request(o, std::move(outputs));
    if (!o.batch.empty()) return run_batch(o, req, sl4_only);
    const auto rep = analyze_file(o, o.input, req, sl4_only);
    std::cout << cli::emit_report(rep, mode);
    return cli::exit_code(rep);
}

int run_verify_command(const Options& o) {
    if (o.reverser.empty()) throw Error(ErrorKind::ParseError, "verify needs --reverser <file>");
    const auto mode = output_mode(o);
    Tolerances tols = Tolerances{}.scaled(default_scale());
    for (const auto& [name, value] : o.tolerances) tols.set(name, value);

    const auto a = cli::parse_matrix(read_all(o.input), format_for(o, o.input),
                                     o.no_sl_check ? std::nullopt : std::optional<double>(tols.det));
    const auto h = cli::parse_matrix(read_all(o.reverser), format_for(o, o.reverser), std::nullopt);
    if (a.rows() != h.rows()) throw Error(ErrorKind::InvalidInput, "A and h differ in dimension");
    const auto w = cli::run_verify(a, h, tols);

    if (mode == cli::OutputMode::Json) {
        io::json out;
        out["source"] = o.input;
        out["reverser_source"] = o.reverser;
        out["tolerances"] = io::to_json(tols);
        out["witness"] = io::to_json(w);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "reverser: " << (w.accepted ? "accepted" : "rejected") << "\n";
        std::cout.precision(3);
        std::cout << std::scientific << "  residual conjugation: " << w.residual_conjugation << "\n"
                  << "  residual involution: " << w.residual_involution << "\n"
                  << "  residual det: " << w.residual_det << "\n"
                  << "  cond(h): " << w.basis_condition << "\n"
                  << "  threshold: " << w.acceptance_threshold() << " (witness_tol " << w.witness_tol
                  << " x (1 + cond(h)^2))\n";
    }
    return 0;
}

// Binomial identities for n <= 64 and the n = 4 unit-block example.
int run_selftest(const Options& o) {
    const auto mode = output_mode(o);
    using numerics::BinomialIdentity;
    int evaluations = 0, nonzero = 0;
    for (int n = 1; n <= 64; ++n) {
        for (int r = 0; r < n; ++r) {
            if (n >= 2) {
                ++evaluations;
                if (numerics::binomial_identity_check(BinomialIdentity::BL1, n, r) != 0) ++nonzero;
            }
            ++evaluations;
            if (numerics::binomial_identity_check(BinomialIdentity::BL2, n, r) != 0) ++nonzero;
        }
    }

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(-3.141592653589793, 3.141592653589793);
    double entry_error = 0.0, involution = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Complex lambda = std::polar(1.0, angle(rng));
        const Complex b = std::polar(1.0, angle(rng));
        const ComplexMatrix m = reversibility::build_unit_symmetry(lambda, 4, b);
        ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
        expected(0, 0) = b;
        expected(1, 1) = -b / std::pow(lambda, 2);
        expected(1, 2) = b / std::pow(lambda, 3);
        expected(1, 3) = -b / std::pow(lambda, 4);
        expected(2, 2) = b / std::pow(lambda, 4);
        expected(2, 3) = -2.0 * b / std::pow(lambda, 5);
        expected(3, 3) = -b / std::pow(lambda, 6);
        entry_error = std::max(entry_error, (m - expected).cwiseAbs().maxCoeff());
        involution = std::max(involution, frobenius(m * m.conjugate() - ComplexMatrix::Identity(4, 4)));
    }
    const bool binomial_ok = nonzero == 0;
    const bool example_ok = entry_error <= 1e-14 && involution <= 1e-12;

    if (mode == cli::OutputMode::Json) {
        io::json out;
        out["binomial_identities"] = {{"evaluations", evaluations}, {"nonzero", nonzero}, {"passed", binomial_ok}};
        out["unit_block_example"] = {{"draws", 200},
                                     {"max_entry_error", entry_error},
                                     {"entry_tol", 1e-14},
                                     {"max_involution_residual", involution},
                                     {"involution_tol", 1e-12},
                                     {"passed", example_ok}};
        out["passed"] = binomial_ok && example_ok;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "binomial identities: " << (binomial_ok ? "pass" : "FAIL") << " (" << evaluations
                  << " evaluations, " << nonzero << " nonzero)\n";
        std::cout.precision(3);
        std::cout << std::scientific << "unit block example: " << (example_ok ? "pass" : "FAIL")
                  << " (entry error " << entry_error << ", involution " << involution << ")\n";
    }
    return binomial_ok && example_ok ? 0 : 5;
}

void add_input_options(CLI::App* cmd, Options& o) {
    cmd->add_option("-i,--input", o.input, "Matrix file, '-' for stdin")->capture_default_str();
    cmd->add_option("--format", o.format, "json or csv-pairs (default: from the file extension)");
    cmd->add_option("--output", o.output, "json or text")->capture_default_str();
    cmd->add_flag("--no-sl-check", o.no_sl_check, "Skip the |det A - 1| <= det_tol check");
    for (auto name : Tolerances::names()) {
        const std::string flag = "--tol-" + std::string(name);
        const double fallback = Tolerances{}.get(name);
        std::ostringstream help;
        help << name << " tolerance (default " << fallback << ")";
        cmd->add_option_function<double>(
            flag, [&o, key = std::string(name)](double v) { o.tolerances[key] = v; }, help.str());
    }
}

void add_batch_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--batch", o.batch, "Analyze every .json/.csv file in a directory");
    cmd->add_option("--out-dir", o.out_dir, "Where batch reports go (default: the batch directory)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"c-reversibility analysis of complex matrices"};
    app.require_subcommand(1);
    Options o;

    auto* analyze = app.add_subcommand("analyze", "Full pipeline: pairing, witness, classification, sl4");
    auto* classify = app.add_subcommand("classify", "Pairing and classification, no witness");
    auto* reverser = app.add_subcommand("reverser", "Pairing and reverser witness only");
    auto* verify = app.add_subcommand("verify", "Check a given reverser h for A");
    auto* sl4 = app.add_subcommand("sl4", "Trace-condition decision tree for 4x4 matrices");
    auto* selftest = app.add_subcommand("selftest", "Binomial identities and the n = 4 unit-block example");

    for (auto* cmd : {analyze, classify, reverser, sl4}) {
        add_input_options(cmd, o);
        add_batch_options(cmd, o);
    }
    add_input_options(verify, o);
    verify->add_option("-r,--reverser", o.reverser, "File holding h, same format as the input")->required();
    selftest->add_option("--output", o.output, "json or text")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    using cli::Output;
    try {
        if (*analyze) {
            return run_pipeline(o, {Output::Pairing, Output::Witness, Output::Classify, Output::Sl4,
                                    Output::PolynomialCriterion});
        }
        if (*classify) return run_pipeline(o, {Output::Pairing, Output::Classify, Output::Sl4, Output::PolynomialCriterion});
        if (*reverser) return run_pipeline(o, {Output::Pairing, Output::Witness});
        if (*sl4) return run_pipeline(o, {Output::Sl4}, true);
        if (*verify) return run_verify_command(o);
        if (*selftest) return run_selftest(o);
    } catch (const Error& e) {
        std::cerr << "crev: " << crev::to_string(e.kind()) << ": " << e.what() << "\n";
        return cli::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "crev: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
