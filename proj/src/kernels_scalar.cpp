#include "isodepth/kernels.hpp"

#include <cmath>

namespace isodepth::kernels::scalar {
namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace

double depth_sum_left(const double* gaps, const double* lefts, std::size_t m, double x) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < m; ++k) acc.add(gaps[k] / (x - lefts[k]));
  return acc.value();
}

double depth_sum_right(const double* gaps, const double* rights, std::size_t m, double x) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < m; ++k) acc.add(gaps[k] / (rights[k] - x));
  return acc.value();
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(std::abs(a[i] - b[i]));
  return acc.value();
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc.add(d * d);
  }
  return acc.value();
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

MinMax minmax(const double* x, std::size_t n) {
  MinMax mm{x[0], x[0]};
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] < mm.min) mm.min = x[i];
    if (x[i] > mm.max) mm.max = x[i];
  }
  return mm;
}

}  // namespace isodepth::kernels::scalar
