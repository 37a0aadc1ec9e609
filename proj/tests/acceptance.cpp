// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spincover/cli.hpp"
#include "spincover/covering.hpp"
#include "spincover/division_algebras.hpp"
#include "spincover/oracle.hpp"
#include "support/brute_force.hpp"

namespace {

using namespace spincover;
using oracle::SplitMix64;
using testing::sign_agnostic;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Blade e12 = Blade::from_indices({1, 2});
const Blade e13 = Blade::from_indices({1, 3});
const Blade e23 = Blade::from_indices({2, 3});

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome so2_family() {
  const auto t0 = std::chrono::steady_clock::now();
  const Signature sig(2, 0);
  double worst = 0.0;
  bool half_turn_branch = false;
  for (int i = 0; i < 100; ++i) {
    const double phi = 2 * std::numbers::pi * i / 100;
    const OrthoMatrix p =
        check_membership(Matrix{{std::cos(phi), -std::sin(phi)}, {std::sin(phi), std::cos(phi)}}, sig);
    const RotorRecovery r = recover_rotor(p);
    const Multivector want = Multivector::scalar(sig, std::cos(phi / 2)) + Multivector::basis(sig, e12, -std::sin(phi / 2));
    const double err = sign_agnostic(r.rotor.value(), want);
    worst = std::max(worst, err);
    if (i == 50) {
      const double m0 = candidate_general(p, Blade::scalar()).M.max_abs();
      half_turn_branch = r.candidate.F == e12 && m0 <= 1e-15 && err <= 1e-12;
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && half_turn_branch && t < 1.0,
          fmt("max error %.3g over 100 angles; phi=pi selects F=e12: %s; %.3f s", worst, half_turn_branch ? "yes" : "no", t)};
}

Outcome boost_family() {
  const auto t0 = std::chrono::steady_clock::now();
  const Signature sig(1, 1);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double phi = -10.0 + 20.0 * i / 49;
    const double c = std::cosh(phi), s = std::sinh(phi);
    const Rotor r = matrix_to_rotor(check_membership(Matrix{{c, s}, {s, c}}, sig));
    const Multivector want = Multivector::scalar(sig, std::cosh(phi / 2)) + Multivector::basis(sig, e12, -std::sinh(phi / 2));
    worst = std::max(worst, sign_agnostic(r.value(), want) / want.max_abs());
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-9 && t < 1.0, fmt("max relative error %.3g over 50 rapidities in [-10, 10]; %.3f s", worst, t)};
}

Outcome so3_degenerate() {
  const Signature sig(3, 0);
  const OrthoMatrix diag = check_membership(Matrix{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, sig);
  const double l0 = candidate_n3(diag, Blade::scalar()).M.max_abs();
  const double l12 = candidate_n3(diag, e12).M.max_abs();
  const double l13 = candidate_n3(diag, e13).M.max_abs();
  const bool l23_exact = candidate_n3(diag, e23).M == Multivector::basis(sig, e23, 4.0);
  const Multivector rotor = matrix_to_rotor(diag, Method::n3).value();
  const bool rotor_ok = sign_agnostic(rotor, Multivector::basis(sig, e23)) <= 1e-15 &&
                        sign_agnostic(matrix_to_rotor(diag).value(), Multivector::basis(sig, e23)) <= 1e-15;

  double family = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double phi = 2 * std::numbers::pi * i / 50;
    const double c = std::cos(phi), s = std::sin(phi);
    const OrthoMatrix p = check_membership(Matrix{{c, s, 0}, {s, -c, 0}, {0, 0, -1}}, sig);
    Multivector l13_want = Multivector::basis(sig, e13, 2 * (1 - c)) + Multivector::basis(sig, e23, -2 * s);
    Multivector l23_want = Multivector::basis(sig, e13, -2 * s) + Multivector::basis(sig, e23, 2 * (1 + c));
    family = std::max({family, (candidate_n3(p, e13).M - l13_want).max_abs(), (candidate_n3(p, e23).M - l23_want).max_abs()});
  }
  const bool pass = l0 <= 1e-14 && l12 <= 1e-14 && l13 <= 1e-14 && l23_exact && rotor_ok && family <= 1e-12;
  return {pass, fmt("|L_0|=%.3g |L_12|=%.3g |L_13|=%.3g, L_23 = 4e23 exact: %s, rotor +-e23: %s; family max error %.3g",
                    l0, l12, l13, l23_exact ? "yes" : "no", rotor_ok ? "yes" : "no", family)};
}

Outcome round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_sig;
  int count = 0;
  for (int n = 1; n <= 6; ++n)
    for (int q = 0; 2 * q <= n; ++q) {
      const Signature sig(n - q, q);
      for (std::uint64_t i = 0; i < 200; ++i) {
        const Rotor s0 = oracle::sample_rotor(sig, SplitMix64::at(0xC0FFEE, i));
        const double err = sign_agnostic(matrix_to_rotor(forward_map(s0)).value(), s0.value());
        if (err > worst) {
          worst = err;
          worst_sig = to_string(sig);
        }
        ++count;
      }
    }
  const double t = seconds_since(t0);
  return {worst <= 1e-9 && t <= 120.0,
          fmt("%d rotors over 12 signatures, max error %.3g at %s; %.2f s", count, worst, worst_sig.c_str(), t)};
}

Outcome cross_formalism() {
  double worst = 0.0;
  for (const Signature& sig : {Signature(3, 0), Signature(2, 1)}) {
    for (std::uint64_t i = 0; i < 500; ++i) {
      const OrthoMatrix p = oracle::sample_matrix(sig, SplitMix64::at(0xBEEF, i));
      const Multivector general = matrix_to_rotor(p, Method::general).value();
      const Multivector n3 = matrix_to_rotor(p, Method::n3).value();
      const Multivector algebra = sig == Signature(3, 0) ? to_even(so3_to_unit_quaternion(p))
                                                         : to_even(so21_to_unit_split_quaternion(p));
      worst = std::max({worst, sign_agnostic(general, n3), sign_agnostic(general, algebra), sign_agnostic(n3, algebra)});
    }
  }
  return {worst <= 1e-10, fmt("1000 matrices, max pairwise difference %.3g", worst)};
}

Outcome algebra_laws() {
  double assoc = 0.0, anti = 0.0, rev = 0.0, center = 0.0;
  std::vector<Signature> sigs;
  for (int n = 1; n <= 5; ++n)
    for (int q = 0; q <= n; ++q) sigs.emplace_back(n - q, q);
  SplitMix64 rng(0xA11CE);
  for (int t = 0; t < 1000; ++t) {
    const Signature& sig = sigs[t % sigs.size()];
    const Multivector u = oracle::random_multivector(sig, rng);
    const Multivector v = oracle::random_multivector(sig, rng);
    const Multivector w = oracle::random_multivector(sig, rng);
    assoc = std::max(assoc, ((u * v) * w - u * (v * w)).max_abs());
    rev = std::max(rev, (reverse(u * v) - reverse(v) * reverse(u)).max_abs());
    Multivector direct(sig);
    for (std::uint32_t a = 0; a < sig.blade_count(); ++a) {
      const SignedBlade inv = blade_inverse(Blade{a}, sig);
      direct += Multivector::basis(sig, Blade{a}) * u * Multivector::basis(sig, inv.blade, inv.sign);
    }
    direct /= static_cast<double>(sig.blade_count());
    center = std::max(center, (direct - center_project(u)).max_abs());
  }
  for (const Signature& sig : sigs)
    for (int a = 1; a <= sig.n(); ++a)
      for (int b = 1; b <= sig.n(); ++b) {
        const Multivector ea = Multivector::generator(sig, a), eb = Multivector::generator(sig, b);
        Multivector lhs = ea * eb + eb * ea;
        if (a == b) lhs[Blade::scalar()] -= 2.0 * sig.metric(a - 1);
        anti = std::max(anti, lhs.max_abs());
      }
  const bool pass = assoc <= 1e-12 && anti == 0.0 && rev <= 1e-12 && center <= 1e-12;
  return {pass, fmt("1000 triples over n<=5: associativity %.3g, anticommutation %.3g, reversion %.3g, center %.3g",
                    assoc, anti, rev, center)};
}

Outcome representations() {
  SplitMix64 rng(0x5EED);
  const Mat2C eta{{Mat2C::C{1}, Mat2C::C{0}, Mat2C::C{0}, Mat2C::C{-1}}};
  auto draw = [&]<class Q>(Q) { return Q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}; };
  double hom = 0.0, unitary = 0.0, pseudo = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Quaternion x = draw(Quaternion{}), y = draw(Quaternion{});
    hom = std::max(hom, (quaternion_to_su2(x * y) - quaternion_to_su2(x) * quaternion_to_su2(y)).max_abs());
    const Mat2C u = quaternion_to_su2(x / std::sqrt(x.norm_sq()));
    unitary = std::max(unitary, (u.hermitian() * u - Mat2C::identity()).max_abs());

    const SplitQuaternion a = draw(SplitQuaternion{}), b = draw(SplitQuaternion{});
    hom = std::max(hom, (split_to_su11(a * b) - split_to_su11(a) * split_to_su11(b)).max_abs());
    SplitQuaternion unit = a;
    while (unit.norm_sq() < 0.1) unit = draw(SplitQuaternion{});
    const Mat2C v = split_to_su11(unit / std::sqrt(unit.norm_sq()));
    pseudo = std::max(pseudo, (v.hermitian() * eta * v - eta).max_abs());
  }
  const bool pass = hom <= 1e-12 && unitary <= 1e-12 && pseudo <= 1e-12;
  return {pass, fmt("200 pairs each: homomorphism %.3g, P^H P = I %.3g, P^H eta P = eta %.3g", hom, unitary, pseudo)};
}

struct CliCase {
  std::string fixture;
  std::vector<std::string> args;
  int exit_code;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome cli_contract() {
  const std::vector<CliCase> cases{
      {"quarter_turn_so2", {"rotor-from-matrix"}, 0},
      {"half_turn_so2", {"rotor-from-matrix"}, 0},
      {"boost_so11", {"rotor-from-matrix"}, 0},
      {"diag_1_m1_m1_n3", {"rotor-from-matrix", "--method", "n3"}, 0},
      {"diag_1_m1_m1_general", {"rotor-from-matrix"}, 0},
      {"diag_m1_1_m1", {"rotor-from-matrix"}, 0},
      {"diag_m1_m1_so11", {"rotor-from-matrix"}, 3},
      {"diag_m1_m1_so11_check", {"check"}, 3},
  };
  int failures = 0;
  std::string first_failure;
  for (const CliCase& c : cases) {
    std::vector<std::string> args = c.args;
    args.push_back(std::string(SPINCOVER_FIXTURES) + "/" + c.fixture + ".json");
    std::string outputs[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      std::istringstream in;
      std::ostringstream out, err;
      codes[k] = cli::run(args, in, out, err);
      outputs[k] = out.str();
    }
    const std::string want = read_file(std::string(SPINCOVER_EXPECTED) + "/" + c.fixture + ".json");
    bool ok = codes[0] == c.exit_code && codes[1] == c.exit_code && outputs[0] == outputs[1] && outputs[0] == want;
    if (c.exit_code == 3) {
      const auto j = nlohmann::json::parse(outputs[0]);
      ok = ok && j["membership"]["failed"] == nlohmann::json::array({"orthochronous"});
    }
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = c.fixture;
    }
  }
  return {failures == 0, fmt("%zu fixtures byte-identical to golden output with expected exit codes; %d failed%s%s",
                             cases.size(), failures, failures ? ", first: " : "", first_failure.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"SO(2) half-angle family, two-branch selection", so2_family},
      {"SO+(1,1) boost family", boost_family},
      {"SO(3) degenerate candidates", so3_degenerate},
      {"round trip for p >= q, n <= 6", round_trip},
      {"cross-formalism agreement at n = 3", cross_formalism},
      {"algebra laws", algebra_laws},
      {"SU(2) / SU(1,1) representations", representations},
      {"CLI contract", cli_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s -- %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
