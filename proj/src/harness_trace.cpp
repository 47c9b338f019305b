#include "rangemode/harness/trace.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace rangemode::harness {

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  out << "# N=" << trace.capacity << " seed=" << trace.seed << "\n";
  for (const auto& op : trace.ops) {
    switch (op.kind) {
      case Trace::OpKind::kInsert:
        out << "I " << op.a << " " << op.b << "\n";
        break;
      case Trace::OpKind::kDelete:
        out << "D " << op.a << "\n";
        break;
      case Trace::OpKind::kQuery:
        out << "Q " << op.a << " " << op.b << "\n";
        break;
    }
  }
  return out.str();
}

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::int64_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      long long n = 0;
      unsigned long long seed = 0;
      if (std::sscanf(line.c_str(), "# N=%lld seed=%llu", &n, &seed) != 2)
        throw TraceParseError("malformed trace header", lineno);
      trace.capacity = static_cast<std::int64_t>(n);
      trace.seed = static_cast<std::uint64_t>(seed);
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    char kind;
    ls >> kind;
    Trace::Op op{};
    if (kind == 'I') {
      op.kind = Trace::OpKind::kInsert;
      if (!(ls >> op.a >> op.b)) throw TraceParseError("malformed insert", lineno);
      if (op.b < 0 || op.b > std::numeric_limits<std::uint32_t>::max())
        throw TraceParseError("value out of 32-bit range", lineno);
    } else if (kind == 'D') {
      op.kind = Trace::OpKind::kDelete;
      if (!(ls >> op.a)) throw TraceParseError("malformed delete", lineno);
    } else if (kind == 'Q') {
      op.kind = Trace::OpKind::kQuery;
      if (!(ls >> op.a >> op.b)) throw TraceParseError("malformed query", lineno);
    } else {
      throw TraceParseError("unknown op kind", lineno);
    }
    std::string rest;
    if (ls >> rest) throw TraceParseError("trailing tokens", lineno);
    trace.ops.push_back(op);
  }
  if (!have_header) throw TraceParseError("missing trace header", 1);
  return trace;
}

Trace parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceParseError("cannot open trace file: " + path, 0);
  return parse_trace(in);
}

std::int64_t first_invalid_op(const Trace& trace) {
  std::int64_t len = 0;
  for (size_t idx = 0; idx < trace.ops.size(); ++idx) {
    const auto& op = trace.ops[idx];
    switch (op.kind) {
      case Trace::OpKind::kInsert:
        if (len >= trace.capacity || op.a < 1 || op.a > len + 1) return static_cast<std::int64_t>(idx);
        ++len;
        break;
      case Trace::OpKind::kDelete:
        if (op.a < 1 || op.a > len) return static_cast<std::int64_t>(idx);
        --len;
        break;
      case Trace::OpKind::kQuery:
        if (op.a < 1 || op.b > len || op.a > op.b) return static_cast<std::int64_t>(idx);
        break;
    }
  }
  return -1;
}

}  // namespace rangemode::harness
