#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace ilc {

/// A path into a lambda tree: 0 = under a binder, 1 = function side,
/// 2 = argument side. Ordered lexicographically (which is also pre-order).
class Position {
public:
  Position() = default;
  Position(std::initializer_list<int> digits);
  explicit Position(std::vector<std::uint8_t> digits) : digits_(std::move(digits)) {}

  std::size_t size() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return digits_[i]; }
  std::uint8_t back() const { return digits_.back(); }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  Position child(int i) const;
  Position parent() const;
  Position concat(const Position& other) const;
  Position prefix(std::size_t len) const;
  /// The suffix after the first `len` digits.
  Position drop(std::size_t len) const;

  void push(int i) { digits_.push_back(static_cast<std::uint8_t>(i)); }
  void pop() { digits_.pop_back(); }

  /// this <= other in the prefix order.
  bool is_prefix_of(const Position& other) const;
  bool is_proper_prefix_of(const Position& other) const {
    return size() < other.size() && is_prefix_of(other);
  }

  /// "⟨1,0,2⟩"-free compact form: digits, or "e" for the empty position.
  std::string str() const;
  /// Inverse of str(); also accepts comma separated digits.
  static Position parse(const std::string& text);

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position& a, const Position& b) { return a.digits_ <=> b.digits_; }

private:
  std::vector<std::uint8_t> digits_;
};

struct PositionHash {
  std::size_t operator()(const Position& p) const noexcept;
};

}  // namespace ilc
