#include "isodepth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "isodepth/kernels.hpp"

namespace isodepth {
namespace {

// Precomputed gaps for one sample; both halves of the closed form read them.
std::vector<double> gaps_of(const SortedSample1D& s) {
  const auto& xs = s.values();
  std::vector<double> gaps(xs.size() - 1);
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) gaps[k] = xs[k + 1] - xs[k];
  return gaps;
}

double depth_from_gaps(const std::vector<double>& xs, const std::vector<double>& gaps,
                       std::size_t i) {
  // 1-based i; gap k (0-based) spans xs[k]..xs[k+1].
  const double xi = xs[i - 1];
  const double left = kernels::depth_sum_left(gaps.data(), xs.data(), i - 1, xi);
  const double right =
      kernels::depth_sum_right(gaps.data() + (i - 1), xs.data() + i, xs.size() - i, xi);
  return left + right;
}

}  // namespace

double expected_depth_at_sample(const SortedSample1D& s, std::size_t i) {
  const std::size_t n = s.size();
  if (n < 2) throw NotEnoughPoints("expected depth needs n >= 2");
  if (i < 1 || i > n) throw IndexOutOfBounds("sample index " + std::to_string(i));
  return depth_from_gaps(s.values(), gaps_of(s), i);
}

double expected_depth_any(const SortedSample1D& s, double x) {
  const std::size_t n = s.size();
  if (n < 2) throw NotEnoughPoints("expected depth needs n >= 2");
  if (!std::isfinite(x)) throw NonFiniteValue();
  const auto& xs = s.values();
  if (x < xs.front()) return expected_depth_at_sample(s, 1);
  if (x >= xs.back()) return expected_depth_at_sample(s, n);
  // x_i <= x < x_{i+1}
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());  // 1-based left neighbor
  const double hl = expected_depth_at_sample(s, i);
  if (x == xs[i - 1]) return hl;
  const double hr = expected_depth_at_sample(s, i + 1);
  return hl + (x - xs[i - 1]) / (xs[i] - xs[i - 1]) * (hr - hl);
}

DepthProfile depth_profile(const SortedSample1D& s) {
  const std::size_t n = s.size();
  if (n < 2) throw NotEnoughPoints("depth profile needs n >= 2");
  const auto gaps = gaps_of(s);
  std::vector<double> depths(n);
  for (std::size_t i = 1; i <= n; ++i) depths[i - 1] = depth_from_gaps(s.values(), gaps, i);
  return DepthProfile{s, std::move(depths)};
}

std::vector<std::size_t> rank_by_depth(const DepthProfile& profile, std::size_t m) {
  const std::size_t n = profile.expected_depths.size();
  if (m < 1 || m > n) throw IndexOutOfBounds("rank count " + std::to_string(m));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = profile.expected_depths[a - 1];
    const double db = profile.expected_depths[b - 1];
    if (da != db) return da < db;
    return a < b;
  });
  order.resize(m);
  return order;
}

void write_profile_csv(const DepthProfile& profile, std::ostream& out,
                       const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "index,x,expected_depth\n";
  char buf[64];
  for (std::size_t i = 0; i < profile.expected_depths.size(); ++i) {
    out << (i + 1) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", profile.sample.values()[i]);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", profile.expected_depths[i]);
    out << buf << '\n';
  }
}

}  // namespace isodepth
