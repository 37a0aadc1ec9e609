#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "spincover/cli.hpp"

namespace spincover {
namespace {

using json = nlohmann::ordered_json;

struct Result {
  int code;
  std::string out;
  std::string err;
  json parsed() const { return json::parse(out); }
};

Result run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(SPINCOVER_FIXTURES) + "/" + name + ".json"; }

TEST(Cli, IdentityRotor) {
  const Result r = run({"rotor-from-matrix", "--json", R"({"p":3,"q":0,"matrix":[[1,0,0],[0,1,0],[0,0,1]]})"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.parsed();
  EXPECT_EQ(j["F"], "1");
  EXPECT_EQ(j["rotor"], json::parse(R"({"1":1.0})"));
  EXPECT_EQ(j["rotor_negated"], json::parse(R"({"1":-1.0})"));
  EXPECT_EQ(j["residual"], 0.0);
  EXPECT_EQ(j["method"], "general");
}

TEST(Cli, HalfTurnViaN3) {
  const Result r = run({"rotor-from-matrix", "--method", "n3", fixture("diag_1_m1_m1_n3")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.parsed();
  EXPECT_EQ(j["F"], "e23");
  EXPECT_EQ(j["rotor"], json::parse(R"({"e23":1.0})"));
}

TEST(Cli, ReadsStandardInput) {
  const Result r = run({"rotor-from-matrix"}, R"({"p":2,"q":0,"matrix":[[-1,0],[0,-1]]})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.parsed()["F"], "e12");
  EXPECT_EQ(r.parsed()["rotor"], json::parse(R"({"e12":1.0})"));
  EXPECT_EQ(run({"check", "-"}, R"({"p":2,"q":0,"matrix":[[1,0],[0,1]]})").code, 0);
}

TEST(Cli, RejectsNonOrthochronous) {
  const Result r = run({"rotor-from-matrix", fixture("diag_m1_m1_so11")});
  EXPECT_EQ(r.code, 3);
  const json j = r.parsed();
  EXPECT_EQ(j["error"], "membership");
  EXPECT_EQ(j["membership"]["failed"], json::parse(R"(["orthochronous"])"));
  EXPECT_EQ(j["membership"]["conditions"]["orthochronous"]["leading_minor"], -1.0);
  EXPECT_NE(r.err.find("orthochronous"), std::string::npos);

  const Result c = run({"check", fixture("diag_m1_m1_so11_check")});
  EXPECT_EQ(c.code, 3);
  EXPECT_FALSE(c.parsed()["membership"]["accepted"].get<bool>());
}

TEST(Cli, BadInputs) {
  EXPECT_EQ(run({"rotor-from-matrix", fixture("malformed")}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "/nonexistent/file.json"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--json", R"({"p":2,"matrix":[[1,0],[0,1]]})"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--json", R"({"p":2,"q":0,"matrix":[[1,0]]})"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--json", R"({"p":2,"q":0,"matrix":[[1,"x"],[0,1]]})"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--json", R"({"p":13,"q":0,"matrix":[]})"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--json", R"([1,2])"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--method", "bogus", "--json", "{}"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--method", "n3", "--json", R"({"p":2,"q":0,"matrix":[[1,0],[0,1]]})"}).code, 2);
  EXPECT_EQ(run({"rotor-from-matrix", "--method", "quaternion", "--json",
                 R"({"p":1,"q":2,"matrix":[[1,0,0],[0,1,0],[0,0,1]]})"})
                .code,
            2);
  EXPECT_EQ(run({"matrix-from-rotor", "--json", R"({"p":2,"q":0,"rotor":{"e3":1}})"}).code, 2);
  EXPECT_EQ(run({"matrix-from-rotor", "--json", R"({"p":2,"q":0})"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"selfcheck", "--p", "3"}).code, 2);
}

TEST(Cli, NumericalFailure) {
  const Result r = run({"rotor-from-matrix", "--tol", "2.5", "--json", R"({"p":1,"q":0,"matrix":[[-1]]})"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("does not reproduce"), std::string::npos) << r.err;
  for (const std::string method : {"general", "n3", "quaternion"})
    EXPECT_EQ(run({"rotor-from-matrix", "--method", method, "--tol", "2.5", "--json",
                   R"({"p":3,"q":0,"matrix":[[-1,0,0],[0,-1,0],[0,0,-1]]})"})
                  .code,
              4)
        << method;
}

TEST(Cli, Help) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rotor-from-matrix"), std::string::npos);
}

TEST(Cli, MatrixFromRotor) {
  const Result r = run({"matrix-from-rotor", fixture("rotor_quarter_turn")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.parsed();
  const json m = j["matrix"];
  EXPECT_NEAR(m[0][0].get<double>(), 0.0, 1e-15);
  EXPECT_NEAR(m[0][1].get<double>(), -1.0, 1e-15);
  EXPECT_NEAR(m[1][0].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(m[1][1].get<double>(), 0.0, 1e-15);
  EXPECT_TRUE(j["membership"]["accepted"].get<bool>());

  const Result id = run({"matrix-from-rotor", fixture("rotor_identity")});
  ASSERT_EQ(id.code, 0);
  EXPECT_EQ(id.parsed()["matrix"], json::parse("[[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,1.0]]"));

  const Result bad = run({"matrix-from-rotor", fixture("rotor_non_unit")});
  EXPECT_EQ(bad.code, 3);
  EXPECT_EQ(bad.parsed()["error"], "rotor");
  EXPECT_FALSE(bad.parsed()["rotor_check"]["ok"].get<bool>());

  const Result odd = run({"matrix-from-rotor", "--json", R"({"p":2,"q":0,"rotor":{"e1":1}})"});
  EXPECT_EQ(odd.code, 3);
}

TEST(Cli, RoundTripsThroughText) {
  const std::string rotor = R"({"p":2,"q":1,"rotor":{"1":1.2,"e13":0.3,"e12":0.1,"e23":0.0}})";
  // Normalize to a unit split-quaternion first: a^2 + b^2 - c^2 - d^2 = 1.
  const double norm = std::sqrt(1.2 * 1.2 + 0.1 * 0.1 - 0.3 * 0.3);
  json in = json::parse(rotor);
  for (auto& [k, v] : in["rotor"].items()) v = v.get<double>() / norm;
  const Result fwd = run({"matrix-from-rotor", "--json", in.dump()});
  ASSERT_EQ(fwd.code, 0) << fwd.err;

  json back_in{{"p", 2}, {"q", 1}, {"matrix", fwd.parsed()["matrix"]}};
  for (const std::string method : {"general", "n3", "quaternion"}) {
    const Result back = run({"rotor-from-matrix", "--method", method, "--json", back_in.dump()});
    ASSERT_EQ(back.code, 0) << back.err;
    const json r = back.parsed()["rotor"];
    EXPECT_NEAR(r["1"].get<double>(), 1.2 / norm, 1e-9) << method;
    EXPECT_NEAR(r["e12"].get<double>(), 0.1 / norm, 1e-9);
    EXPECT_NEAR(r["e13"].get<double>(), 0.3 / norm, 1e-9);
    EXPECT_FALSE(r.contains("e23"));
  }
}

TEST(Cli, QuaternionOutput) {
  const Result r = run({"rotor-from-matrix", "--method", "quaternion", "--json",
                        R"({"p":3,"q":0,"matrix":[[1,0,0],[0,-1,0],[0,0,-1]]})"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.parsed();
  EXPECT_EQ(j["algebra"], "quaternion");
  EXPECT_EQ(j["F"], "e23");
  // The quaternion is shown for the same sign as the rotor: e23 -> -k.
  EXPECT_EQ(j["rotor"], json::parse(R"({"e23":1.0})"));
  EXPECT_EQ(j["quaternion"], json::parse(R"({"a":0.0,"b":0.0,"c":0.0,"d":-1.0})"));
  EXPECT_EQ(j["matrix2c"], json::parse("[[[0.0,0.0],[0.0,-1.0]],[[0.0,-1.0],[0.0,0.0]]]"));
}

TEST(Cli, ProjectRepairsDrift) {
  const std::string drifted = R"({"p":2,"q":0,"matrix":[[1.000001,0],[0,1]]})";
  EXPECT_EQ(run({"rotor-from-matrix", "--json", drifted}).code, 3);
  EXPECT_EQ(run({"check", "--project", "--json", drifted}).code, 0);
  const Result r = run({"rotor-from-matrix", "--project", "--json", drifted});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.parsed()["F"], "1");
  EXPECT_EQ(run({"rotor-from-matrix", "--tol", "1e-5", "--json", drifted}).code, 0);
}

TEST(Cli, Selfcheck) {
  const Result r = run({"selfcheck", "--p", "3", "--q", "0", "--trials", "20", "--seed", "42"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const json j = r.parsed();
  EXPECT_TRUE(j["passed"].get<bool>());
  std::vector<std::string> names;
  for (const auto& s : j["suites"]) names.push_back(s["name"]);
  EXPECT_EQ(names, (std::vector<std::string>{"round_trip", "covering_identity", "unit_norm", "method_agreement",
                                             "associativity", "generator_anticommutation",
                                             "reversion_antihomomorphism", "center_projection"}));
  EXPECT_EQ(run({"selfcheck", "--p", "1", "--q", "1", "--trials", "20"}).code, 0);
  EXPECT_EQ(run({"selfcheck", "--p", "3", "--q", "0", "--trials", "0"}).code, 2);
  EXPECT_EQ(run({"selfcheck", "--p", "-1", "--q", "0"}).code, 2);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"rotor-from-matrix", fixture("boost_so11")};
  EXPECT_EQ(run(args).out, run(args).out);
}

}  // namespace
}  // namespace spincover
