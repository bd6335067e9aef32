#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "def/errors.hpp"

namespace def {

// Dense belief/assertion vector over the five blocks, component order
// [red, blue, green, purple, yellow].
using Vec5 = std::array<double, 5>;

inline constexpr Vec5 kZeroVec{0.0, 0.0, 0.0, 0.0, 0.0};

inline Vec5 add(const Vec5& a, const Vec5& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4]};
}

inline Vec5 sub(const Vec5& a, const Vec5& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3], a[4] - b[4]};
}

inline Vec5 scale(const Vec5& a, double c) {
  return {c * a[0], c * a[1], c * a[2], c * a[3], c * a[4]};
}

inline double dot(const Vec5& a, const Vec5& b) {
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec5& a) { return std::sqrt(dot(a, a)); }

inline bool is_zero(const Vec5& a) {
  for (double x : a)
    if (x != 0.0) return false;
  return true;
}

// "[10.000,2.929,0.000,0.000,0.000]", the CLI default rendering.
inline std::string format_vec(const Vec5& v, int precision = 3) {
  std::string out = "[";
  char buf[64];
  for (int i = 0; i < 5; ++i) {
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v[i]);
    out += buf;
    if (i != 4) out += ',';
  }
  out += ']';
  return out;
}

// nlohmann::json serializes std::array natively; Vec5 needs no adapter.

inline Vec5 vec5_from_json(const nlohmann::json& j) {
  Vec5 v{};
  if (!j.is_array() || j.size() != 5)
    throw DefError("expected a JSON array of 5 numbers");
  for (int i = 0; i < 5; ++i) v[i] = j.at(i).get<double>();
  return v;
}

// Accepts the CLI notation "[10,10,0,0,0]" (whitespace-insensitive).
inline Vec5 parse_vec5(const std::string& text) {
  return vec5_from_json(nlohmann::json::parse(text));
}

}  // namespace def
