// Recovers the rotor of a rotation by pi about e1 in SO(3), where the scalar
// candidate vanishes and a bivector F has to be used instead.

#include <cstdio>

#include "spincover/spincover.hpp"

int main() {
  using namespace spincover;
  const Signature sig(3, 0);
  const OrthoMatrix p = check_membership(Matrix{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, sig);

  for (Blade f : even_blades(sig)) {
    const CandidateElement c = candidate_n3(p, f);
    std::printf("L_%s: normsq = %g\n", blade_name(f).c_str(), c.normsq);
  }

  const RotorRecovery r = recover_rotor(p);
  std::printf("selected F = %s\nS = +-(", blade_name(r.candidate.F).c_str());
  for (Blade b : even_blades(sig))
    if (r.rotor.value()[b] != 0.0) std::printf(" %+g %s", r.rotor.value()[b], blade_name(b).c_str());
  std::printf(" )\n");

  const Quaternion x = so3_to_unit_quaternion(p);
  std::printf("unit quaternion = +-(%g %+gi %+gj %+gk)\n", x.a, x.b, x.c, x.d);
  return 0;
}
