#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rangemode::harness {

// Serialized operation stream. Text format:
//   # N=<int> seed=<int>
//   I <pos> <value>
//   D <pos>
//   Q <l> <r>
// Positions are 1-based; values are unsigned 32-bit.
struct Trace {
  enum class OpKind : std::uint8_t { kInsert, kDelete, kQuery };
  struct Op {
    OpKind kind;
    std::int64_t a = 0;  // pos or l
    std::int64_t b = 0;  // value or r

    bool operator==(const Op&) const = default;
  };

  std::int64_t capacity = 0;
  std::uint64_t seed = 0;
  std::vector<Op> ops;

  bool operator==(const Trace&) const = default;
};

std::string format_trace(const Trace& trace);
// Throws TraceParseError with the 1-based offending line number.
Trace parse_trace(std::istream& in);
Trace parse_trace_file(const std::string& path);

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::string what, std::int64_t line) : std::runtime_error(std::move(what)), line(line) {}
  std::int64_t line;
};

// Validates every op against the running length implied by its prefix.
// Returns the index of the first invalid op, or -1 when the trace is valid.
std::int64_t first_invalid_op(const Trace& trace);

}  // namespace rangemode::harness
