#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covering.hpp"
#include "division_algebras.hpp"
#include "json_io.hpp"
#include "oracle.hpp"
#include "selfcheck.hpp"

namespace spincover::cli {

enum ExitCode : int {
  kOk = 0,
  kSelfcheckFailed = 1,
  kBadInput = 2,
  kRejected = 3,
  kNumericalFailure = 4,
};

namespace detail {

using json = json_io::json;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

struct InputSource {
  std::string path = "-";
  std::string inline_json;
};

// Malformed input: unreadable file, bad JSON, bad shape.
struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json read_input(const InputSource& src, std::istream& in) {
  std::string text;
  if (!src.inline_json.empty()) {
    text = src.inline_json;
  } else if (src.path == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(src.path);
    if (!f) throw BadInput("cannot open input file '" + src.path + "'");
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw BadInput(std::string("malformed JSON: ") + e.what());
  }
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

inline json rotor_output_header(const Signature& sig, const std::string& method) {
  json j;
  j["p"] = sig.p();
  j["q"] = sig.q();
  j["method"] = method;
  return j;
}

struct MatrixOptions {
  InputSource src;
  std::string method = "general";
  double tol = kDefaultMembershipTol;
  bool project = false;
  bool early_exit = false;
};

// Parses {"p", "q", "matrix"} and applies the optional projection.
inline std::pair<Signature, Matrix> load_matrix(const MatrixOptions& o, std::istream& in) {
  const json input = read_input(o.src, in);
  const Signature sig = json_io::signature_from_json(input);
  if (!input.contains("matrix")) throw InvalidArgument("missing field \"matrix\"");
  Matrix m = json_io::matrix_from_json(input["matrix"], sig.n());
  if (o.project) m = project_to_group(m, sig);
  return {sig, std::move(m)};
}

inline int reject_membership(const MembershipReport& report, Streams io) {
  json j;
  j["error"] = "membership";
  j["membership"] = json_io::membership_to_json(report);
  emit(io.out, j);
  io.err << "error: matrix is not in SO+" << to_string(report.sig) << ": " << report.describe() << "\n";
  return kRejected;
}

inline int rotor_from_matrix(const MatrixOptions& o, Streams io) {
  const auto [sig, m] = load_matrix(o, io.in);
  const MembershipReport report = membership_report(m, sig, o.tol);
  if (!report.accepted()) return reject_membership(report, io);
  const OrthoMatrix p = check_membership(m, sig, o.tol);

  json j = rotor_output_header(sig, o.method);
  Multivector s(sig);
  if (o.method == "quaternion") {
    if (sig == Signature(3, 0)) {
      const auto c = select_quaternion(p);
      s = canonicalize_sign(to_even(unit_from_candidate(c)));
      const Quaternion x = from_even<QuaternionTraits>(s);
      j["F"] = blade_name(c.F);
      j["algebra"] = "quaternion";
      j["quaternion"] = json_io::quaternion_to_json(x);
      j["matrix2c"] = json_io::mat2c_to_json(quaternion_to_su2(x));
    } else if (sig == Signature(2, 1)) {
      const auto c = select_split_quaternion(p);
      s = canonicalize_sign(to_even(unit_from_candidate(c)));
      const SplitQuaternion x = from_even<SplitQuaternionTraits>(s);
      j["F"] = blade_name(c.F);
      j["algebra"] = "split-quaternion";
      j["quaternion"] = json_io::quaternion_to_json(x);
      j["matrix2c"] = json_io::mat2c_to_json(split_to_su11(x));
    } else {
      throw InvalidArgument("method quaternion requires signature (3,0) or (2,1)");
    }
  } else {
    const Method method = o.method == "n3" ? Method::n3 : Method::general;
    if (method == Method::n3 && sig.n() != 3) throw InvalidArgument("method n3 requires n = 3");
    const RotorRecovery r = recover_rotor(p, method, SelectOptions{o.early_exit});
    s = r.rotor.value();
    j["F"] = blade_name(r.candidate.F);
  }

  const double residual = std::max(oracle::verify_covering(s, m).max_residual, oracle::verify_covering(-s, m).max_residual);
  const double mag = std::max(1.0, s.max_abs());
  if (!(residual <= covering_tolerance(o.tol) * mag * mag)) {
    io.err << "error: recovered rotor fails the covering identity (residual " << residual << ")\n";
    return kNumericalFailure;
  }
  j["rotor"] = json_io::multivector_to_json(s);
  j["rotor_negated"] = json_io::multivector_to_json(-s);
  j["residual"] = residual;
  emit(io.out, j);
  return kOk;
}

inline int check(const MatrixOptions& o, Streams io) {
  const auto [sig, m] = load_matrix(o, io.in);
  const MembershipReport report = membership_report(m, sig, o.tol);
  json j;
  j["p"] = sig.p();
  j["q"] = sig.q();
  j["membership"] = json_io::membership_to_json(report);
  emit(io.out, j);
  if (!report.accepted()) {
    io.err << "rejected: " << report.describe() << "\n";
    return kRejected;
  }
  return kOk;
}

struct RotorOptions {
  InputSource src;
  double tol = kRotorTol;
};

inline int matrix_from_rotor(const RotorOptions& o, Streams io) {
  const json input = read_input(o.src, io.in);
  const Signature sig = json_io::signature_from_json(input);
  if (!input.contains("rotor")) throw InvalidArgument("missing field \"rotor\"");
  const Multivector value = json_io::multivector_from_json(input["rotor"], sig);

  const RotorCheck c = check_rotor(value, o.tol);
  if (!c.ok()) {
    json j;
    j["error"] = "rotor";
    j["rotor_check"] = json_io::rotor_check_to_json(c);
    emit(io.out, j);
    io.err << "error: not a Spin+" << to_string(sig) << " element: " << c.describe() << "\n";
    return kRejected;
  }
  const Rotor s = Rotor::from_multivector(value, o.tol);
  const OrthoMatrix p = forward_map(s);

  json j;
  j["p"] = sig.p();
  j["q"] = sig.q();
  j["matrix"] = json_io::matrix_to_json(p.matrix());
  j["membership"] = json_io::membership_to_json(membership_report(p.matrix(), sig, p.tol()));
  emit(io.out, j);
  return kOk;
}

struct SelfcheckOptions {
  int p = 3;
  int q = 0;
  int trials = 100;
  std::uint64_t seed = 42;
};

inline int selfcheck(const SelfcheckOptions& o, Streams io) {
  const SelfcheckSummary summary = run_selfcheck(Signature(o.p, o.q), o.trials, o.seed);
  json j;
  j["p"] = o.p;
  j["q"] = o.q;
  j["trials"] = o.trials;
  j["seed"] = o.seed;
  j["passed"] = summary.passed();
  j["suites"] = json::array();
  for (const auto& s : summary.suites)
    j["suites"].push_back({{"name", s.name},
                           {"cases", s.cases},
                           {"max_residual", s.max_residual},
                           {"tolerance", s.tolerance},
                           {"passed", s.passed()}});
  emit(io.out, j);
  if (!summary.passed()) {
    for (const auto& s : summary.suites)
      if (!s.passed()) io.err << "suite " << s.name << " failed: " << s.max_residual << " > " << s.tolerance << "\n";
    return kSelfcheckFailed;
  }
  return kOk;
}

inline void add_input(CLI::App* cmd, InputSource& src) {
  cmd->add_option("input", src.path, "Input JSON file, or - for standard input")->capture_default_str();
  cmd->add_option("--json", src.inline_json, "Inline JSON input instead of a file");
}

}  // namespace detail

// Runs one command; returns the process exit code.
inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin group elements from pseudo-orthogonal matrices, and back", "spincover"};
  app.require_subcommand(1);

  detail::MatrixOptions to_rotor;
  auto* rfm = app.add_subcommand("rotor-from-matrix", "Recover +-S from P in SO+(p,q)");
  detail::add_input(rfm, to_rotor.src);
  rfm->add_option("--method", to_rotor.method, "general | n3 | quaternion")
      ->check(CLI::IsMember({"general", "n3", "quaternion"}))
      ->capture_default_str();
  rfm->add_option("--tol", to_rotor.tol, "Membership tolerance")->capture_default_str();
  rfm->add_flag("--project", to_rotor.project, "Re-orthogonalize by polar decomposition before validation");
  rfm->add_flag("--early-exit", to_rotor.early_exit, "Stop the F search at the first dominant candidate");

  detail::MatrixOptions check_opts;
  auto* chk = app.add_subcommand("check", "Test SO+(p,q) membership");
  detail::add_input(chk, check_opts.src);
  chk->add_option("--tol", check_opts.tol, "Membership tolerance")->capture_default_str();
  chk->add_flag("--project", check_opts.project, "Re-orthogonalize by polar decomposition before validation");

  detail::RotorOptions to_matrix;
  auto* mfr = app.add_subcommand("matrix-from-rotor", "Compute P from S via S e_a S^-1 = p_a^b e_b");
  detail::add_input(mfr, to_matrix.src);
  mfr->add_option("--tol", to_matrix.tol, "Rotor invariant tolerance")->capture_default_str();

  detail::SelfcheckOptions self;
  auto* sc = app.add_subcommand("selfcheck", "Run the randomized consistency suites");
  sc->add_option("--p", self.p, "Positive generators")->required();
  sc->add_option("--q", self.q, "Negative generators")->required();
  sc->add_option("--trials", self.trials, "Random cases per suite")->capture_default_str();
  sc->add_option("--seed", self.seed, "SplitMix64 seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  const detail::Streams io{in, out, err};
  try {
    if (*rfm) return detail::rotor_from_matrix(to_rotor, io);
    if (*chk) return detail::check(check_opts, io);
    if (*mfr) return detail::matrix_from_rotor(to_matrix, io);
    return detail::selfcheck(self, io);
  } catch (const detail::BadInput& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const MembershipError& e) {
    return detail::reject_membership(e.report(), io);
  } catch (const RotorError& e) {
    err << "error: " << e.what() << "\n";
    return kRejected;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"spincover"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), in, out, err);
}

}  // namespace spincover::cli
