#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "qeig/qeig.hpp"

namespace qeig::cli {
namespace {

using json = nlohmann::ordered_json;

// Malformed or unusable input; maps to exit code 2.
struct InputError : std::runtime_error {
    std::string reason;
    InputError(std::string r, const std::string& what) : std::runtime_error(what), reason(std::move(r)) {}
};

struct Options {
    std::string command;
    std::vector<std::string> inputs;
    double tol = kDefaultEigTol;
    Convention convention = Convention::PositiveImag;
    bool text = false;
    bool polar = false;
    bool complex = false;
};

// ---------------------------------------------------------------------------
// Output: deterministic JSON with 17 significant digits

std::string format_double(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_flat(const json& j) {
    for (const auto& e : j)
        if (e.is_structured()) return false;
    return true;
}

void emit(const json& j, std::ostream& os, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    const std::string inner(static_cast<std::size_t>(2 * depth + 2), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) os << ",\n";
            first = false;
            os << inner << json(k).dump() << ": ";
            emit(v, os, depth + 1);
        }
        os << '\n' << pad << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        if (is_flat(j)) {
            os << '[';
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) os << ", ";
                emit(j[k], os, depth + 1);
            }
            os << ']';
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) os << ",\n";
            os << inner;
            emit(j[k], os, depth + 1);
        }
        os << '\n' << pad << ']';
        return;
    }
    case json::value_t::number_float:
        os << format_double(j.get<double>());
        return;
    default:
        os << j.dump();
    }
}

// Plain "path: value" lines for --format text.
void emit_text(const json& j, const std::string& path, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) emit_text(v, path.empty() ? k : path + "." + k, os);
        return;
    }
    if (j.is_array() && !is_flat(j)) {
        for (std::size_t k = 0; k < j.size(); ++k) emit_text(j[k], path + "[" + std::to_string(k) + "]", os);
        return;
    }
    os << path << ": ";
    if (j.is_string())
        os << j.get<std::string>();
    else
        emit(j, os, 0);
    os << '\n';
}

json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }
json to_json(const Quaternion& q) { return json::array({q.a, q.b, q.c, q.d}); }
json to_json(const HlcrElement& e) { return json{{"Q", to_json(e.Q)}, {"P", to_json(e.P)}}; }

template <typename T>
json list_json(const std::vector<T>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(to_json(x));
    return a;
}

json polar_json(const std::vector<Complex>& zs) {
    json a = json::array();
    for (const auto& z : zs) a.push_back(json::array({std::abs(z), std::arg(z)}));
    return a;
}

template <typename T>
json matrix_json(const Matrix<T>& m, const char* kind) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(row);
    }
    return json{{"kind", kind}, {"n", m.rows()}, {"entries", rows}};
}

json matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(row);
    }
    return json{{"kind", "complex"}, {"n", m.rows()}, {"entries", rows}};
}

json vector_json(const ComplexVector& v) {
    json a = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(to_json(v(k)));
    return a;
}

// ---------------------------------------------------------------------------
// Input documents

struct Document {
    std::string kind;
    QuatMatrix quat;
    HlcrMatrix hlcr;
    ComplexMatrix complex;
    std::size_t n = 0;
};

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(md[k]);
    return os.str();
}

std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("unreadable-input", "cannot open " + path);
    buf << f.rdbuf();
    return buf.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("malformed-input", std::string("invalid JSON: ") + e.what());
    }
}

double number(const json& j) {
    if (!j.is_number()) throw InputError("malformed-input", "expected a number, got " + j.dump());
    return j.get<double>();
}

Quaternion parse_quaternion(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw InputError("malformed-input", "quaternion must be [a, b, c, d], got " + j.dump());
    return {number(j[0]), number(j[1]), number(j[2]), number(j[3])};
}

Complex parse_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw InputError("malformed-input", "complex must be [re, im], got " + j.dump());
    return {number(j[0]), number(j[1])};
}

HlcrElement parse_hlcr(const json& j) {
    if (!j.is_object() || !j.contains("Q"))
        throw InputError("malformed-input", "hlcr entry must be {\"Q\": [...], \"P\": [...]}, got " + j.dump());
    return {parse_quaternion(j["Q"]), j.contains("P") ? parse_quaternion(j["P"]) : Quaternion{}};
}

// Rows of entries, from nested rows or a flat row-major list.
std::vector<std::vector<json>> entry_rows(const json& doc) {
    if (!doc.contains("entries") || !doc["entries"].is_array())
        throw InputError("malformed-input", "document needs an \"entries\" array");
    const json& e = doc["entries"];
    const bool nested = !e.empty() && e[0].is_array() &&
                        (e[0].empty() || e[0][0].is_array() || e[0][0].is_object());
    std::vector<std::vector<json>> rows;
    if (nested) {
        for (const auto& r : e) {
            if (!r.is_array()) throw InputError("malformed-input", "every row must be an array");
            rows.emplace_back(r.begin(), r.end());
        }
        for (const auto& r : rows)
            if (r.size() != rows.front().size()) throw InputError("malformed-input", "rows have different lengths");
        return rows;
    }
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw InputError("malformed-input", "flat entries need an integer \"n\"");
    const auto n = doc["n"].get<long>();
    if (n < 0 || static_cast<std::size_t>(n * n) != e.size())
        throw InputError("non-square", "flat entry count is not n*n");
    for (long r = 0; r < n; ++r)
        rows.emplace_back(e.begin() + r * n, e.begin() + (r + 1) * n);
    return rows;
}

Document parse_document(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw InputError("malformed-input", "document needs a string \"kind\"");
    Document d;
    d.kind = doc["kind"].get<std::string>();
    if (d.kind != "quaternion" && d.kind != "hlcr" && d.kind != "complex")
        throw InputError("malformed-input", "unknown kind \"" + d.kind + "\"");
    const auto rows = entry_rows(doc);
    const std::size_t nr = rows.size();
    const std::size_t nc = nr == 0 ? 0 : rows.front().size();
    if (nr != nc)
        throw InputError("non-square", "entries form a " + std::to_string(nr) + "x" + std::to_string(nc) + " matrix");
    if (doc.contains("n") && (!doc["n"].is_number_integer() || doc["n"].get<long>() != static_cast<long>(nr)))
        throw InputError("dimension-mismatch", "\"n\" does not match the entries");
    d.n = nr;
    if (d.kind == "quaternion") {
        d.quat = QuatMatrix(nr, nr);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nr; ++c) d.quat(r, c) = parse_quaternion(rows[r][c]);
        if (!all_finite(d.quat)) throw InputError("malformed-input", "non-finite entry");
    } else if (d.kind == "hlcr") {
        d.hlcr = HlcrMatrix(nr, nr);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nr; ++c) d.hlcr(r, c) = parse_hlcr(rows[r][c]);
        if (!all_finite(d.hlcr)) throw InputError("malformed-input", "non-finite entry");
    } else {
        d.complex = ComplexMatrix(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nr));
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nr; ++c)
                d.complex(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(rows[r][c]);
        if (!d.complex.allFinite()) throw InputError("malformed-input", "non-finite entry");
    }
    return d;
}

const QuatMatrix& require_quaternion(const Document& d, const std::string& command) {
    if (d.kind != "quaternion") throw InputError("wrong-kind", command + " needs a quaternion matrix");
    return d.quat;
}

// ---------------------------------------------------------------------------
// Commands

struct Context {
    Options opt;
    std::vector<std::string> hashes;
    std::vector<Document> docs;
    json out;
};

void add_spectrum(json& out, const char* key, const std::vector<Complex>& zs, bool polar) {
    out[key] = list_json(zs);
    if (polar) out[std::string(key) + "_polar"] = polar_json(zs);
}

void cmd_translate(Context& ctx) {
    const Document& d = ctx.docs.front();
    if (d.kind == "quaternion") {
        ctx.out["matrix"] = matrix_json(complexify_matrix(d.quat));
    } else if (d.kind == "hlcr") {
        ctx.out["matrix"] = matrix_json(complexify_matrix(d.hlcr));
    } else {
        const HlcrMatrix h = dequaternionify_matrix(d.complex);
        if (const auto q = narrow(h))
            ctx.out["matrix"] = matrix_json(*q, "quaternion");
        else
            ctx.out["matrix"] = matrix_json(h, "hlcr");
    }
}

void cmd_eig_complex(Context& ctx, const ComplexMatrix& C) {
    const ComplexEigResult e = eig(C, ctx.opt.tol);
    ctx.out["solver"] = "complex";
    ctx.out["dimension"] = C.rows();
    add_spectrum(ctx.out, "eigenvalues", e.eigenvalues, ctx.opt.polar);
    json vecs = json::array();
    for (Eigen::Index k = 0; k < e.eigenvectors.cols(); ++k) vecs.push_back(vector_json(e.eigenvectors.col(k)));
    ctx.out["eigenvectors"] = vecs;
    ctx.out["residuals"] = e.residuals;
    ctx.out["flagged"] = e.flagged;
    ctx.out["defective"] = e.defective_flag;
    ctx.out["condition_estimate"] = e.condition_estimate;
}

void cmd_eig(Context& ctx) {
    const Document& d = ctx.docs.front();
    if (ctx.opt.complex || d.kind == "complex") {
        if (d.kind == "quaternion") return cmd_eig_complex(ctx, complexify_matrix(d.quat));
        if (d.kind == "hlcr") return cmd_eig_complex(ctx, complexify_matrix(d.hlcr));
        return cmd_eig_complex(ctx, d.complex);
    }
    if (d.kind == "quaternion") {
        const RightEigResult r =
            right_spectrum_quaternionic(d.quat, {ctx.opt.tol, kDefaultPairTol, ctx.opt.convention});
        ctx.out["solver"] = "quaternionic";
        add_spectrum(ctx.out, "reduced_spectrum", r.reduced_spectrum, ctx.opt.polar);
        add_spectrum(ctx.out, "full_spectrum", r.full_spectrum, ctx.opt.polar);
        json vecs = json::array();
        for (const auto& v : r.eigenvectors) vecs.push_back(list_json(v));
        ctx.out["eigenvectors"] = vecs;
        ctx.out["residuals"] = r.residuals;
        ctx.out["diagonalizable"] = r.diagonalizable;
        ctx.out["condition_estimate"] = r.condition_estimate;
        return;
    }
    const ClinEigResult r = right_spectrum_complexlinear(d.hlcr, ctx.opt.tol);
    ctx.out["solver"] = "complex-linear";
    add_spectrum(ctx.out, "spectrum", r.spectrum, ctx.opt.polar);
    json vecs = json::array();
    for (const auto& v : r.eigenvectors) vecs.push_back(list_json(v));
    ctx.out["eigenvectors"] = vecs;
    ctx.out["residuals"] = r.residuals;
    ctx.out["diagonalizable"] = r.diagonalizable;
    ctx.out["condition_estimate"] = r.condition_estimate;
}

void cmd_diag(Context& ctx) {
    const Document& d = ctx.docs.front();
    if (d.kind == "quaternion") {
        const auto r = diagonalize_quaternionic(d.quat, {ctx.opt.tol, kDefaultPairTol, ctx.opt.convention});
        ctx.out["diagonalizer"] = matrix_json(r.S, "quaternion");
        ctx.out["diagonal"] = matrix_json(r.D, "quaternion");
        ctx.out["residual"] = r.residual;
    } else if (d.kind == "hlcr") {
        const auto r = diagonalize_complexlinear(d.hlcr, ctx.opt.tol);
        ctx.out["diagonalizer"] = matrix_json(r.S, "hlcr");
        ctx.out["diagonal"] = matrix_json(r.D, "hlcr");
        ctx.out["residual"] = r.residual;
    } else {
        throw InputError("wrong-kind", "diag needs a quaternion or hlcr matrix");
    }
}

json solution_json(const LeftSolution& s) {
    return json{{"q", to_json(s.q)}, {"psi", list_json(s.psi)}, {"residual", s.residual}, {"family", s.family_flag}};
}

json left_json(const LeftEigResult& r) {
    json sols = json::array();
    for (const auto& s : r.solutions) sols.push_back(solution_json(s));
    json fams = json::array();
    for (const auto& f : r.families) {
        json samples = json::array();
        for (const auto& s : f.samples) samples.push_back(solution_json(s));
        json fj{{"dimension", f.dimension}, {"constraint", f.constraint}};
        fj["magnitude"] = f.magnitude ? json(*f.magnitude) : json(nullptr);
        fj["samples"] = samples;
        fams.push_back(fj);
    }
    return json{{"solutions", sols}, {"families", fams}};
}

void cmd_left_eig(Context& ctx) {
    const QuatMatrix& M = require_quaternion(ctx.docs.front(), "left-eig");
    const LeftEigResult r = left_eig_2x2(M);
    ctx.out["left"] = left_json(r);
    const MagnitudeReport rep = left_right_magnitude_report(M);
    ctx.out["magnitudes"] = json{{"right", rep.right}, {"left", rep.left}, {"equal", rep.equal}};
}

void cmd_compare_left(Context& ctx) {
    const QuatMatrix& M = require_quaternion(ctx.docs[0], "compare-left");
    const QuatMatrix& N = require_quaternion(ctx.docs[1], "compare-left");
    const SimilarityComparison c = compare_left_spectra_similarity(M, N);
    ctx.out["verdict"] = std::string(to_string(c.verdict));
    ctx.out["same_left_spectrum"] = c.same_left_spectrum;
    ctx.out["same_complex_spectrum"] = c.same_complex_spectrum;
    ctx.out["complex_spectrum_distance"] = c.complex_spectrum_distance;
    add_spectrum(ctx.out, "complex_spectrum_first", c.complex_spectrum_m, ctx.opt.polar);
    add_spectrum(ctx.out, "complex_spectrum_second", c.complex_spectrum_n, ctx.opt.polar);
    ctx.out["left_first"] = left_json(c.left_m);
    ctx.out["left_second"] = left_json(c.left_n);
}

json cospec_json(const CoSpectrumResult& r) {
    json rows = json::array();
    for (std::size_t l = 0; l < r.basis.size(); ++l)
        rows.push_back(json{{"vector", list_json(r.basis[l])},
                            {"first", to_json(r.pairs[l].first)},
                            {"second", to_json(r.pairs[l].second)}});
    return rows;
}

void cmd_co_spec(Context& ctx) {
    const QuatMatrix& M1 = require_quaternion(ctx.docs[0], "co-spec");
    const QuatMatrix& M2 = require_quaternion(ctx.docs[1], "co-spec");
    const CoSpectrumResult r = co_spectrum(M1, M2);
    ctx.out["basis"] = cospec_json(r);
    // Every choice of psi or psi j per basis vector, up to 16 variants.
    if (r.basis.size() <= 4) {
        json variants = json::array();
        const std::size_t count = std::size_t{1} << r.basis.size();
        for (std::size_t mask = 0; mask < count; ++mask) {
            std::vector<bool> flip(r.basis.size());
            for (std::size_t l = 0; l < flip.size(); ++l) flip[l] = (mask >> (flip.size() - 1 - l)) & 1U;
            variants.push_back(cospec_json(flip_basis(r, flip)));
        }
        ctx.out["variants"] = variants;
    }
}

void cmd_herm(Context& ctx) {
    const QuatMatrix& A = require_quaternion(ctx.docs.front(), "herm-from-antiherm");
    const RightEigResult r = right_spectrum_quaternionic(A, {ctx.opt.tol, kDefaultPairTol, Convention::PositiveImag});
    const QuatMatrix H = hermitian_from_antihermitian(A);
    add_spectrum(ctx.out, "antihermitian_spectrum", r.reduced_spectrum, ctx.opt.polar);
    ctx.out["hermitian"] = matrix_json(H, "quaternion");
    ctx.out["hermiticity_defect"] = max_abs_diff(H, adjoint(H));
}

void cmd_verify(Context& ctx, const json& doc) {
    if (!doc.is_object() || !doc.contains("matrix") || !doc.contains("vector") || !doc.contains("value"))
        throw InputError("malformed-input", "verify needs \"matrix\", \"value\" and \"vector\"");
    const Document d = parse_document(doc["matrix"]);
    const QuatMatrix& M = require_quaternion(d, "verify");
    const std::string side = doc.value("side", std::string("right"));
    if (!doc["vector"].is_array()) throw InputError("malformed-input", "\"vector\" must be an array");
    QuatVector psi;
    for (const auto& e : doc["vector"]) psi.push_back(parse_quaternion(e));
    if (psi.size() != M.cols()) throw InputError("dimension-mismatch", "vector length differs from n");
    double residual = 0.0;
    if (side == "left") {
        residual = verify_left_pair(M, parse_quaternion(doc["value"]), psi);
    } else if (side == "right") {
        const Quaternion lam = doc["value"].size() == 4 ? parse_quaternion(doc["value"]) : Quaternion(parse_complex(doc["value"]));
        const double den = frobenius_norm(M) * norm(psi);
        residual = norm(M * psi - right_multiply(psi, lam));
        if (den > 0.0) residual /= den;
    } else {
        throw InputError("malformed-input", "\"side\" must be \"left\" or \"right\"");
    }
    ctx.out["side"] = side;
    ctx.out["residual"] = residual;
    ctx.out["holds"] = residual <= 1e-8;
}

int exit_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonSquare:
    case ErrorCode::OddDimension:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotTwoByTwo:
    case ErrorCode::Unsupported:
    case ErrorCode::NotAntiHermitian:
    case ErrorCode::NotCommuting:
    case ErrorCode::DimensionTooLarge:
        return kBadInput;
    default:
        return kNumericalFailure;
    }
}

void write(const json& doc, const Options& opt, std::ostream& out) {
    if (opt.text) {
        emit_text(doc, "", out);
    } else {
        emit(doc, out, 0);
        out << '\n';
    }
}

void write_error(std::ostream& out, std::ostream& err, const Options& opt, const std::string& reason,
                 const std::string& message) {
    json doc{{"status", "error"}, {"command", opt.command}, {"reason", reason}, {"message", message}};
    write(doc, opt, out);
    err << "error: " << reason << ": " << message << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options opt;
    std::string convention = "positive-imag";
    std::string format = "json";

    CLI::App app{"Right and left eigenvalue problems for quaternionic matrices", "qeig"};
    app.require_subcommand(1, 1);
    app.add_option("--tol", opt.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--convention", convention, "reduced spectrum representative")
        ->check(CLI::IsMember({"positive-imag", "negative-imag"}));
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--polar", opt.polar, "also print (modulus, argument) for eigenvalues");

    struct Spec {
        const char* name;
        const char* help;
        std::size_t max_inputs;
    };
    const Spec specs[] = {
        {"translate", "complex counterpart of a matrix (or back-translation of a complex one)", 1},
        {"eig", "right eigenvalues and eigenvectors", 1},
        {"diag", "diagonalizing matrix and diagonal form", 1},
        {"left-eig", "left eigenvalues of a 2x2 quaternionic matrix", 1},
        {"compare-left", "left spectra versus complexified spectra of two 2x2 matrices", 2},
        {"co-spec", "common eigenbasis of two commuting matrices", 2},
        {"herm-from-antiherm", "hermitian operator built from an anti-hermitian one", 1},
        {"verify", "residual of a left or right eigenpair", 1},
    };
    for (const auto& s : specs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("inputs", opt.inputs, "input files, - for stdin")->expected(0, static_cast<int>(s.max_inputs));
        if (std::string(s.name) == "eig") sub->add_flag("--complex", opt.complex, "run the plain complex eigensolver");
        sub->fallthrough();
    }

    std::vector<std::string> argv_store{"qeig"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        write_error(out, err, opt, "bad-arguments", e.what());
        return kBadInput;
    }
    opt.command = app.get_subcommands().front()->get_name();
    opt.convention = convention == "negative-imag" ? Convention::NegativeImag : Convention::PositiveImag;
    opt.text = format == "text";

    try {
        Context ctx;
        ctx.opt = opt;
        if (opt.inputs.empty()) opt.inputs.push_back("-");
        std::vector<json> parsed;
        for (const auto& path : opt.inputs) {
            const std::string raw = read_input(path, in);
            ctx.hashes.push_back(sha256_hex(raw));
            parsed.push_back(parse_json(raw));
        }

        const bool two = opt.command == "compare-left" || opt.command == "co-spec";
        if (opt.command == "verify") {
            // the verify document embeds its own matrix
        } else if (two && parsed.size() == 1) {
            const json& j = parsed.front();
            if (!j.is_object() || !j.contains("matrices") || !j["matrices"].is_array() || j["matrices"].size() != 2)
                throw InputError("malformed-input", opt.command + " needs two matrices");
            for (const auto& m : j["matrices"]) ctx.docs.push_back(parse_document(m));
        } else {
            if (two != (parsed.size() == 2)) throw InputError("malformed-input", "wrong number of input documents");
            for (const auto& j : parsed) ctx.docs.push_back(parse_document(j));
        }

        ctx.out["status"] = "ok";
        ctx.out["command"] = opt.command;
        ctx.out["input_sha256"] = ctx.hashes.size() == 1 ? json(ctx.hashes.front()) : json(ctx.hashes);
        ctx.out["tolerances"] = json{{"eig", opt.tol}, {"pairing", kDefaultPairTol}, {"residual_gate", 1e-8}};
        ctx.out["convention"] = opt.convention == Convention::NegativeImag ? "negative-imag" : "positive-imag";
        if (!ctx.docs.empty()) {
            ctx.out["input_kind"] = ctx.docs.front().kind;
            ctx.out["n"] = ctx.docs.front().n;
        }

        if (opt.command == "translate") cmd_translate(ctx);
        else if (opt.command == "eig") cmd_eig(ctx);
        else if (opt.command == "diag") cmd_diag(ctx);
        else if (opt.command == "left-eig") cmd_left_eig(ctx);
        else if (opt.command == "compare-left") cmd_compare_left(ctx);
        else if (opt.command == "co-spec") cmd_co_spec(ctx);
        else if (opt.command == "herm-from-antiherm") cmd_herm(ctx);
        else if (opt.command == "verify") cmd_verify(ctx, parsed.front());

        write(ctx.out, opt, out);
        return kOk;
    } catch (const InputError& e) {
        write_error(out, err, opt, e.reason, e.what());
        return kBadInput;
    } catch (const Error& e) {
        write_error(out, err, opt, std::string(e.reason()), e.what());
        return exit_for(e.code());
    } catch (const std::exception& e) {
        write_error(out, err, opt, "internal-error", e.what());
        return kNumericalFailure;
    }
}

}  // namespace qeig::cli
