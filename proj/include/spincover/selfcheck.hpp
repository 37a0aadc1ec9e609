#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "covering.hpp"
#include "division_algebras.hpp"
#include "oracle.hpp"

namespace spincover {

struct SuiteResult {
  std::string name;
  int cases = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;

  bool passed() const { return max_residual <= tolerance; }
  void record(double residual) {
    ++cases;
    max_residual = std::max(max_residual, residual);
  }
};

struct SelfcheckSummary {
  Signature sig;
  int trials;
  std::uint64_t seed;
  std::vector<SuiteResult> suites;

  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
  }
};

namespace detail {

inline double sign_agnostic_distance(const Multivector& x, const Multivector& y) {
  return std::min((x - y).max_abs(), (x + y).max_abs());
}

}  // namespace detail

// Round trip, covering identity, unit norm, method agreement (n = 3), and the algebra
// laws, each over `trials` seeded cases. Residuals are divided by the magnitude of the
// quantity they compare (max|S|^2 for rotors, max|product| for the algebra laws) when
// that exceeds 1.
inline SelfcheckSummary run_selfcheck(const Signature& sig, int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("selfcheck: trials must be positive");
  SuiteResult round_trip{"round_trip", 0, 0.0, 1e-9};
  SuiteResult covering{"covering_identity", 0, 0.0, 1e-9};
  SuiteResult unit{"unit_norm", 0, 0.0, 1e-12};
  SuiteResult agreement{"method_agreement", 0, 0.0, 1e-10};
  SuiteResult assoc{"associativity", 0, 0.0, 1e-12};
  SuiteResult anticomm{"generator_anticommutation", 0, 0.0, 0.0};
  SuiteResult reversion{"reversion_antihomomorphism", 0, 0.0, 1e-12};
  SuiteResult center{"center_projection", 0, 0.0, 1e-12};

  const bool n3 = sig.n() == 3;
  const bool quat = sig == Signature(3, 0);
  const bool split = sig == Signature(2, 1);

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t case_seed = oracle::SplitMix64::at(seed, static_cast<std::uint64_t>(t));
    const Rotor s0 = oracle::sample_rotor(sig, case_seed);
    const double mag2 = std::max(1.0, s0.value().max_abs() * s0.value().max_abs());
    const OrthoMatrix p = forward_map(s0);
    const Rotor s = matrix_to_rotor(p);

    round_trip.record(detail::sign_agnostic_distance(s.value(), s0.value()));
    covering.record(oracle::verify_covering(s, p).max_residual / mag2);
    Multivector rr = reverse(s.value()) * s.value();
    rr[Blade::scalar()] -= 1.0;
    unit.record(rr.max_abs() / mag2);

    if (n3) {
      for (Blade f : even_blades(sig)) {
        const auto g = candidate_general(p, f);
        const auto l = candidate_n3(p, f);
        agreement.record((g.M - 2.0 * l.M).max_abs() / mag2);
      }
      agreement.record(detail::sign_agnostic_distance(matrix_to_rotor(p, Method::n3).value(), s.value()));
      if (quat) agreement.record(detail::sign_agnostic_distance(to_even(so3_to_unit_quaternion(p)), s.value()));
      if (split) agreement.record(detail::sign_agnostic_distance(to_even(so21_to_unit_split_quaternion(p)), s.value()));
    }

    oracle::SplitMix64 rng(case_seed ^ 0xA5A5A5A5A5A5A5A5ull);
    const Multivector u = oracle::random_multivector(sig, rng);
    const Multivector v = oracle::random_multivector(sig, rng);
    const Multivector w = oracle::random_multivector(sig, rng);
    const Multivector uv = u * v;
    const Multivector uvw = uv * w;
    assoc.record((uvw - u * (v * w)).max_abs() / std::max(1.0, uvw.max_abs()));
    reversion.record((reverse(uv) - reverse(v) * reverse(u)).max_abs() / std::max(1.0, uv.max_abs()));

    Multivector direct(sig);
    for (std::uint32_t a = 0; a < sig.blade_count(); ++a)
      direct += right_blade_multiply(left_blade_multiply(SignedBlade{1, Blade{a}}, u), blade_inverse(Blade{a}, sig));
    direct /= static_cast<double>(sig.blade_count());
    center.record((direct - center_project(u)).max_abs());
  }

  for (int a = 1; a <= sig.n(); ++a)
    for (int b = 1; b <= sig.n(); ++b) {
      const Multivector ea = Multivector::generator(sig, a);
      const Multivector eb = Multivector::generator(sig, b);
      Multivector lhs = ea * eb + eb * ea;
      if (a == b) lhs[Blade::scalar()] -= 2.0 * sig.metric(a - 1);
      anticomm.record(lhs.max_abs());
    }

  SelfcheckSummary summary{sig, trials, seed, {round_trip, covering, unit}};
  if (n3) summary.suites.push_back(agreement);
  summary.suites.insert(summary.suites.end(), {assoc, anticomm, reversion, center});
  return summary;
}

}  // namespace spincover
