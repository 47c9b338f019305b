#pragma once

#include <cstdint>

namespace rangemode {

// splitmix64 finalizer; good enough for content fingerprints.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

inline std::uint64_t hash_cell(std::uint64_t loc, std::uint64_t val) {
  return mix64(loc * 0x9e3779b97f4a7c15ULL ^ mix64(val + 0x6a09e667f3bcc909ULL));
}

// Order-independent content fingerprint. toggle(loc, old) ^ toggle(loc, new)
// moves a cell; applying the same change twice cancels, so rollback restores
// the accumulator exactly.
class XorAcc {
 public:
  void toggle(std::uint64_t loc, std::uint64_t val) { acc_ ^= hash_cell(loc, val); }
  void update(std::uint64_t loc, std::uint64_t oldv, std::uint64_t newv) {
    acc_ ^= hash_cell(loc, oldv) ^ hash_cell(loc, newv);
  }
  std::uint64_t value() const { return acc_; }
  void reset() { acc_ = 0; }
  void set(std::uint64_t v) { acc_ = v; }
  void fold(std::uint64_t v) { acc_ ^= v; }

 private:
  std::uint64_t acc_ = 0;
};

// Order-dependent stream hash for static content.
class StreamHash {
 public:
  void put(std::uint64_t v) { h_ = hash_combine(h_, v); }
  void put_i64(std::int64_t v) { put(static_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0x2545f4914f6cdd1dULL;
};

}  // namespace rangemode
