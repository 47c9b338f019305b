#pragma once

#include <cstdint>
#include <vector>

namespace rangemode {

// Minimal unsigned big integer (base 2^32 limbs, schoolbook multiply).
// Only what the positional-encoding matrix backend needs.
class BigUint {
 public:
  BigUint() = default;
  explicit BigUint(std::uint64_t v) {
    if (v) {
      limbs_.push_back(static_cast<std::uint32_t>(v));
      if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }
  }

  bool is_zero() const { return limbs_.empty(); }

  void add_assign(const BigUint& o) {
    if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    std::uint64_t carry = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
      limbs_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  BigUint mul(const BigUint& o) const {
    BigUint out;
    if (is_zero() || o.is_zero()) return out;
    out.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      std::uint64_t a = limbs_[i];
      for (size_t j = 0; j < o.limbs_.size(); ++j) {
        std::uint64_t cur = out.limbs_[i + j] + a * o.limbs_[j] + carry;
        out.limbs_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      size_t k = i + o.limbs_.size();
      while (carry) {
        std::uint64_t cur = out.limbs_[k] + carry;
        out.limbs_[k] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
        ++k;
      }
    }
    out.trim();
    return out;
  }

  // In-place divide by a small divisor, returns the remainder.
  std::uint32_t divmod_small(std::uint32_t d) {
    std::uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      std::uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    trim();
    return static_cast<std::uint32_t>(rem);
  }

  static BigUint pow(std::uint64_t base, std::uint64_t exp) {
    BigUint acc(1);
    BigUint b(base);
    while (exp) {
      if (exp & 1) acc = acc.mul(b);
      b = b.mul(b);
      exp >>= 1;
    }
    return acc;
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;  // little-endian
};

}  // namespace rangemode
