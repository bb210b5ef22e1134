#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "qeig/qeig.hpp"

using namespace qeig;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
    int code;
    std::string out, err;
    json doc() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QEIG_DATA_DIR) + "/" + name; }

Complex complex_of(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

std::vector<Complex> spectrum_of(const json& a) {
    std::vector<Complex> out;
    for (const auto& z : a) out.push_back(complex_of(z));
    return out;
}

const Complex kI(0.0, 1.0);
const Complex kLambda1 = std::pow(2.0, 0.25) * std::exp(kI * (3.0 * std::numbers::pi / 8.0));

}  // namespace

TEST(Cli, EigOnQuaternionicExample) {
    const Outcome r = run({"eig", data("quaternionic_2x2.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json d = r.doc();
    EXPECT_EQ(d["status"], "ok");
    EXPECT_EQ(d["command"], "eig");
    ASSERT_EQ(d["reduced_spectrum"].size(), 2u);
    const auto s = spectrum_of(d["reduced_spectrum"]);
    EXPECT_LE(std::abs(s[0] - kLambda1), 1e-10);
    EXPECT_LE(std::abs(s[1] + std::conj(kLambda1)), 1e-10);
    EXPECT_EQ(d["input_sha256"].get<std::string>().size(), 64u);
    EXPECT_EQ(d["tolerances"]["eig"], 1e-10);
    EXPECT_EQ(d["tolerances"]["pairing"], 1e-8);
    EXPECT_EQ(d["convention"], "positive-imag");
    EXPECT_EQ(d["residuals"].size(), 2u);
}

TEST(Cli, TranslateMatchesComplexifyAndReingests) {
    const Outcome t = run({"translate", data("quaternionic_2x2.json")});
    ASSERT_EQ(t.code, 0) << t.err;
    const json m = t.doc()["matrix"];
    EXPECT_EQ(m["kind"], "complex");
    const ComplexMatrix C = complexify_matrix(QuatMatrix{{Quaternion::i(), Quaternion::j()}, {Quaternion::k(), Quaternion::i()}});
    ASSERT_EQ(m["entries"].size(), 4u);
    for (Eigen::Index r = 0; r < 4; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) EXPECT_EQ(complex_of(m["entries"][static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]), C(r, c));

    const Outcome direct = run({"eig", data("quaternionic_2x2.json")});
    const Outcome reread = run({"eig", "--complex", "-"}, m.dump());
    ASSERT_EQ(reread.code, 0) << reread.err;
    EXPECT_LE(multiset_distance(spectrum_of(reread.doc()["eigenvalues"]), spectrum_of(direct.doc()["full_spectrum"])), 1e-10);

    // Back-translation of a complex document recovers the quaternionic matrix.
    const Outcome back = run({"translate", "-"}, m.dump());
    ASSERT_EQ(back.code, 0);
    EXPECT_EQ(back.doc()["matrix"]["kind"], "quaternion");
    EXPECT_EQ(back.doc()["matrix"]["entries"][0][1], json::parse("[0, 0, 1, 0]"));
}

TEST(Cli, NonSquareIsBadInput) {
    const Outcome r = run({"eig", data("non_square.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.doc()["status"], "error");
    EXPECT_EQ(r.doc()["reason"], "non-square");
    EXPECT_NE(r.err.find("non-square"), std::string::npos);
}

TEST(Cli, MalformedAndMissingInputs) {
    EXPECT_EQ(run({"eig", "-"}, "{not json").code, 2);
    EXPECT_EQ(run({"eig", "-"}, R"({"kind": "octonion", "n": 1, "entries": [[[1,0,0,0]]]})").doc()["reason"], "malformed-input");
    EXPECT_EQ(run({"left-eig", data("complex_linear_2x2.json")}).doc()["reason"], "wrong-kind");
    EXPECT_EQ(run({"eig", data("does_not_exist.json")}).code, 2);
    EXPECT_EQ(run({"left-eig", "-"}, R"({"kind": "quaternion", "n": 3, "entries": [[[1,0,0,0],[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[1,0,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,0,0],[1,0,0,0]]]})")
                  .code,
              2);
    EXPECT_NE(run({"--tol", "-1", "eig", data("quaternionic_2x2.json")}).code, 0);
    EXPECT_NE(run({}).code, 0);
}

TEST(Cli, FlatEntriesAreAccepted) {
    const Outcome r = run({"eig", "-"}, R"({"kind": "quaternion", "n": 2, "entries": [[0,1,0,0],[0,0,1,0],[0,0,0,1],[0,1,0,0]]})");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LE(std::abs(complex_of(r.doc()["reduced_spectrum"][0]) - kLambda1), 1e-10);
}

TEST(Cli, OutputIsDeterministic) {
    for (const char* cmd : {"eig", "diag", "left-eig", "translate"}) {
        const Outcome a = run({cmd, data("quaternionic_2x2.json")});
        const Outcome b = run({cmd, data("quaternionic_2x2.json")});
        EXPECT_EQ(a.code, 0) << cmd;
        EXPECT_EQ(a.out, b.out) << cmd;
    }
}

TEST(Cli, NegativeConventionAndPolar) {
    const Outcome r = run({"--convention", "negative-imag", "--polar", "eig", data("quaternionic_2x2.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json d = r.doc();
    EXPECT_EQ(d["convention"], "negative-imag");
    const auto s = spectrum_of(d["reduced_spectrum"]);
    EXPECT_LE(std::abs(s[0] - std::conj(kLambda1)), 1e-10);
    const json p = d["reduced_spectrum_polar"][0];
    EXPECT_NEAR(p[0].get<double>(), std::abs(kLambda1), 1e-12);
    EXPECT_NEAR(p[1].get<double>(), -3.0 * std::numbers::pi / 8.0, 1e-12);
}

TEST(Cli, TextFormat) {
    const Outcome r = run({"--format", "text", "eig", data("quaternionic_2x2.json")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("status: ok"), std::string::npos);
    EXPECT_NE(r.out.find("reduced_spectrum"), std::string::npos);
}

TEST(Cli, ComplexLinearDiag) {
    const Outcome e = run({"eig", data("complex_linear_2x2.json")});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_LE(multiset_distance(spectrum_of(e.doc()["spectrum"]), {2.0, -2.0, 2.0 * kI, -2.0 * kI}), 1e-10);
    const Outcome d = run({"diag", data("complex_linear_2x2.json")});
    ASSERT_EQ(d.code, 0) << d.err;
    EXPECT_LE(d.doc()["residual"].get<double>(), 1e-9);
}

TEST(Cli, DefectiveDiagIsNumericalFailure) {
    const Outcome r = run({"diag", "-"}, R"({"kind": "quaternion", "n": 2, "entries": [[[0,1,0,0],[1,0,0,0]],[[0,0,0,0],[0,1,0,0]]]})");
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.doc()["reason"], "not-diagonalizable");
}

TEST(Cli, HermitianFromAntihermitian) {
    const Outcome r = run({"herm-from-antiherm", data("antihermitian_2x2.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json h = r.doc()["hermitian"]["entries"];
    EXPECT_NEAR(h[0][0][0].get<double>(), 3.0, 1e-9);
    EXPECT_NEAR(h[0][1][3].get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(h[1][0][3].get<double>(), -1.0, 1e-9);
    EXPECT_EQ(run({"herm-from-antiherm", data("quaternionic_2x2.json")}).code, 2);
}

TEST(Cli, LeftEigAndCompare) {
    const Outcome l = run({"left-eig", data("hermitian_k.json")});
    ASSERT_EQ(l.code, 0) << l.err;
    const json fams = l.doc()["left"]["families"];
    ASSERT_FALSE(fams.empty());
    EXPECT_GE(fams[0]["samples"].size(), 8u);

    const Outcome c = run({"compare-left", data("same_left_spectrum_pair.json")});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_EQ(c.doc()["verdict"], "SAME_LEFT_SPECTRUM_NOT_SIMILAR");
}

TEST(Cli, CoSpectrum) {
    const Outcome r = run({"co-spec", data("energy_spin.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json d = r.doc();
    ASSERT_EQ(d["basis"].size(), 2u);
    EXPECT_LE(std::abs(complex_of(d["basis"][0]["first"]) - kI), 1e-12);
    EXPECT_LE(std::abs(complex_of(d["basis"][0]["second"]) - 0.5 * kI), 1e-12);
    EXPECT_EQ(d["variants"].size(), 4u);
}

TEST(Cli, Verify) {
    const Outcome r = run({"verify", data("left_pair_check.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.doc()["holds"].get<bool>());
    EXPECT_LE(r.doc()["residual"].get<double>(), 1e-12);
}
