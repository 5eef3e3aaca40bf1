#pragma once

#include <array>
#include <string>

#include "ilc/position.hpp"

namespace ilc {

/// The triple a0 a1 a2 selecting which edges (under a binder, function
/// side, argument side) are strict (0) or non-strict (1).
class StrictnessSignature {
public:
  constexpr StrictnessSignature() = default;
  constexpr StrictnessSignature(bool a0, bool a1, bool a2) : bits_{a0, a1, a2} {}

  /// Parses exactly three characters from {0,1}; throws std::invalid_argument.
  static StrictnessSignature parse(const std::string& text);
  static std::array<StrictnessSignature, 8> all();

  bool a(int edge) const { return bits_[edge]; }
  bool strict(int edge) const { return !bits_[edge]; }
  /// Depth contribution of an edge.
  int weight(int edge) const { return bits_[edge] ? 1 : 0; }

  /// Number of non-strict edges along p.
  std::size_t depth(const Position& p) const;
  /// Longest non-strict prefix of p.
  Position acut(const Position& p) const;

  /// True for 001, 101 and 111, where normal forms are unique.
  bool canonical() const { return bits_[2] && (!bits_[1] || bits_[0]); }
  /// a0 = 1 or a1 = 0, the precondition under which residuals stay redexes.
  bool residual_safe() const { return bits_[0] || !bits_[1]; }

  std::string str() const;

  friend bool operator==(const StrictnessSignature&, const StrictnessSignature&) = default;

private:
  std::array<bool, 3> bits_{true, true, true};
};

}  // namespace ilc
