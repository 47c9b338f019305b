#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "rangemode/minplus/matrix.hpp"

namespace rangemode::harness {

// Exact mode of seq[l-1..r-1] (1-based bounds) by full recount;
// smallest-value tiebreak.
std::pair<std::uint32_t, std::int64_t> oracle_mode(std::span<const std::uint32_t> seq, std::int64_t l,
                                                   std::int64_t r);

// Direct scan over k not in `forbidden`; smallest-k tiebreak; nullopt when
// no finite sum exists.
std::optional<std::pair<std::int64_t, int>> oracle_minplus(const minplus::Mat& a, const minplus::Mat& b,
                                                           int i, int j, std::span<const int> forbidden);

}  // namespace rangemode::harness
