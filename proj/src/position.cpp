#include "ilc/position.hpp"
#include "ilc/signature.hpp"

#include <algorithm>
#include <stdexcept>

namespace ilc {

Position::Position(std::initializer_list<int> digits) {
  for (int d : digits) {
    if (d < 0 || d > 2) throw std::invalid_argument("position digit out of range");
    digits_.push_back(static_cast<std::uint8_t>(d));
  }
}

Position Position::child(int i) const {
  Position p = *this;
  p.push(i);
  return p;
}

Position Position::parent() const {
  Position p = *this;
  p.pop();
  return p;
}

Position Position::concat(const Position& other) const {
  Position p = *this;
  p.digits_.insert(p.digits_.end(), other.digits_.begin(), other.digits_.end());
  return p;
}

Position Position::prefix(std::size_t len) const {
  return Position(std::vector<std::uint8_t>(digits_.begin(), digits_.begin() + std::min(len, size())));
}

Position Position::drop(std::size_t len) const {
  return Position(std::vector<std::uint8_t>(digits_.begin() + std::min(len, size()), digits_.end()));
}

bool Position::is_prefix_of(const Position& other) const {
  return size() <= other.size() && std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

std::string Position::str() const {
  if (digits_.empty()) return "e";
  std::string s;
  for (auto d : digits_) s.push_back(static_cast<char>('0' + d));
  return s;
}

Position Position::parse(const std::string& text) {
  Position p;
  if (text == "e" || text.empty() || text == "<>") return p;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '<' || c == '>') continue;
    if (c < '0' || c > '2') throw std::invalid_argument("bad position: " + text);
    p.push(c - '0');
  }
  return p;
}

std::size_t PositionHash::operator()(const Position& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto d : p.digits()) h = (h ^ (d + 1)) * 1099511628211ull;
  return h;
}

StrictnessSignature StrictnessSignature::parse(const std::string& text) {
  if (text.size() != 3) throw std::invalid_argument("signature must be three digits from {0,1}: " + text);
  std::array<bool, 3> bits{};
  for (int i = 0; i < 3; ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw std::invalid_argument("signature must be three digits from {0,1}: " + text);
    bits[i] = text[i] == '1';
  }
  return {bits[0], bits[1], bits[2]};
}

std::array<StrictnessSignature, 8> StrictnessSignature::all() {
  std::array<StrictnessSignature, 8> out;
  for (int k = 0; k < 8; ++k) out[k] = StrictnessSignature((k >> 2) & 1, (k >> 1) & 1, k & 1);
  return out;
}

std::size_t StrictnessSignature::depth(const Position& p) const {
  std::size_t d = 0;
  for (auto i : p.digits()) d += weight(i);
  return d;
}

Position StrictnessSignature::acut(const Position& p) const {
  std::size_t len = p.size();
  while (len > 0 && strict(p[len - 1])) --len;
  return p.prefix(len);
}

std::string StrictnessSignature::str() const {
  std::string s;
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace ilc
