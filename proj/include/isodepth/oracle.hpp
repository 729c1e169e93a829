#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "isodepth/core.hpp"

namespace isodepth {

// Exact expected isolation depth of each sample point; the deterministic
// counterpart of the forest's Monte Carlo average.
struct DepthProfile {
  SortedSample1D sample;
  std::vector<double> expected_depths;  // expected_depths[i-1] is h(x_i)
};

// h(x_i; x_1..x_n) = sum_{j<=i} gap_{j-1}/(x_i - x_{j-1})
//                  + sum_{j>i}  gap_{j-1}/(x_j - x_i).
// i is 1-based; requires n >= 2. Depends only on gap ratios, so it is
// invariant under positive affine maps of the sample.
double expected_depth_at_sample(const SortedSample1D& s, std::size_t i);

// Expected depth of an arbitrary query: clamped to the boundary values
// outside [x_1, x_n], linearly interpolated between adjacent sample depths
// inside.
double expected_depth_any(const SortedSample1D& s, double x);

DepthProfile depth_profile(const SortedSample1D& s);

// Indices (1-based) of the m smallest expected depths, ascending by depth,
// ties broken by smaller index. Smaller depth = more anomalous.
std::vector<std::size_t> rank_by_depth(const DepthProfile& profile, std::size_t m);

// CSV columns: index,x,expected_depth. `comment` lines are emitted verbatim
// with a leading '#'.
void write_profile_csv(const DepthProfile& profile, std::ostream& out,
                       const std::string& comment = "");

}  // namespace isodepth
