#pragma once

#include <span>
#include <vector>

namespace ricemarlin::detail {

/// tail[e] = sum of p[r] for r >= e; tail has p.size() + 1 entries.
std::vector<double> tail_masses(std::span<const double> p);

/// First-symbol distribution of a chapter entered from the exclusion states
/// `entering` (indexed by exclusion level), restricted to ranks >= exclusion.
std::vector<double> mixture_root(std::span<const double> entering, std::span<const double> p,
                                 std::span<const double> tail, unsigned exclusion);

}  // namespace ricemarlin::detail
