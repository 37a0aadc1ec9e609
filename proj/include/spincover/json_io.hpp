#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "covering.hpp"
#include "division_algebras.hpp"
#include "matrix.hpp"
#include "multivector.hpp"

namespace spincover::json_io {

using json = nlohmann::ordered_json;

// Clears negative zero so output text does not depend on rounding direction.
inline double clean(double v) { return v + 0.0; }

inline Signature signature_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("input must be a JSON object");
  for (const char* key : {"p", "q"}) {
    if (!j.contains(key)) throw InvalidArgument(std::string("missing field \"") + key + "\"");
    if (!j[key].is_number_integer()) throw InvalidArgument(std::string("field \"") + key + "\" must be an integer");
  }
  return Signature(j["p"].get<int>(), j["q"].get<int>());
}

inline Matrix matrix_from_json(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw InvalidArgument("\"matrix\" must be an array of " + std::to_string(n) + " rows");
  Matrix m(n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw InvalidArgument("matrix row " + std::to_string(r + 1) + " must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      if (!row[c].is_number()) throw InvalidArgument("matrix entries must be numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.size(); ++c) row.push_back(clean(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// {blade-name: coefficient}, in ascending (grade, mask) order, omitting
// coefficients at or below the zero threshold.
inline json multivector_to_json(const Multivector& m) {
  std::vector<Blade> order;
  for (std::uint32_t a = 0; a < m.size(); ++a) order.push_back(Blade{a});
  std::stable_sort(order.begin(), order.end(), [](Blade x, Blade y) { return x.grade() < y.grade(); });
  json out = json::object();
  for (Blade b : order)
    if (std::abs(m[b]) > kZeroThreshold) out[blade_name(b)] = clean(m[b]);
  return out;
}

inline Multivector multivector_from_json(const json& j, const Signature& sig) {
  if (!j.is_object()) throw InvalidArgument("multivector must be an object of blade-name: coefficient");
  Multivector m(sig);
  for (const auto& [name, value] : j.items()) {
    if (!value.is_number()) throw InvalidArgument("coefficient of '" + name + "' must be a number");
    m[parse_blade(name, sig)] = value.get<double>();
  }
  return m;
}

inline json membership_to_json(const MembershipReport& r) {
  json j;
  j["accepted"] = r.accepted();
  j["tolerance"] = r.tol;
  j["conditions"] = {
      {"orthogonality",
       {{"ok", r.orthogonality_ok()}, {"violation", r.orthogonality_violation}, {"bound", r.orthogonality_bound}}},
      {"determinant", {{"ok", r.det_ok()}, {"value", clean(r.det)}, {"bound", r.det_bound}}},
      {"orthochronous", {{"ok", r.orthochronous_ok()}, {"leading_minor", clean(r.leading_minor)}, {"bound", r.leading_minor_bound}}},
  };
  j["failed"] = json::array();
  if (!r.orthogonality_ok()) j["failed"].push_back("orthogonality");
  if (!r.det_ok()) j["failed"].push_back("determinant");
  if (!r.orthochronous_ok()) j["failed"].push_back("orthochronous");
  return j;
}

inline json rotor_check_to_json(const RotorCheck& c) {
  return {{"ok", c.ok()},
          {"odd_max", c.odd_max},
          {"unit_residual", c.unit_residual},
          {"grade1_residual", c.grade1_residual},
          {"bound", c.bound},
          {"message", c.describe()}};
}

template <class Traits>
json quaternion_to_json(const BasicQuaternion<Traits>& q) {
  return {{"a", clean(q.a)}, {"b", clean(q.b)}, {"c", clean(q.c)}, {"d", clean(q.d)}};
}

// Nested [re, im] pairs, row-major.
inline json mat2c_to_json(const Mat2C& m) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) {
    json row = json::array();
    for (int c = 0; c < 2; ++c) row.push_back({clean(m(r, c).real()), clean(m(r, c).imag())});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spincover::json_io
