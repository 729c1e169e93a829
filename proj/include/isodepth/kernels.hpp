#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the depth oracle, the k-NN scorer, the
// absorption-chain matrix powers and the experiment harness. Each kernel has
// a scalar reference implementation and an AVX2 variant; the unqualified
// entry points dispatch to the best level supported by the running CPU.
// Set ISODEPTH_SIMD=scalar (or =avx2) in the environment to pin the level.
//
// The reduction kernels accumulate with Neumaier compensation, so scalar and
// vector variants agree to roughly 1 ulp of the exact sum; axpy and minmax
// are element-wise/order-free and agree bit-for-bit.

namespace isodepth::kernels {

struct MinMax {
  double min;
  double max;
};

enum class Level { scalar, avx2 };

Level active_level();
const char* level_name(Level level);

// sum over k < m of gaps[k] / (x - lefts[k]); the left half of the expected
// depth closed form. Caller guarantees x > lefts[k].
double depth_sum_left(const double* gaps, const double* lefts, std::size_t m, double x);

// sum over k < m of gaps[k] / (rights[k] - x); the right half.
double depth_sum_right(const double* gaps, const double* rights, std::size_t m, double x);

// sum |a[i] - b[i]|
double l1_distance(const double* a, const double* b, std::size_t n);

// sum (a[i] - b[i])^2
double sum_squared_diff(const double* a, const double* b, std::size_t n);

// y[i] += a * x[i]
void axpy(double* y, const double* x, double a, std::size_t n);

MinMax minmax(const double* x, std::size_t n);

namespace scalar {
double depth_sum_left(const double* gaps, const double* lefts, std::size_t m, double x);
double depth_sum_right(const double* gaps, const double* rights, std::size_t m, double x);
double l1_distance(const double* a, const double* b, std::size_t n);
double sum_squared_diff(const double* a, const double* b, std::size_t n);
void axpy(double* y, const double* x, double a, std::size_t n);
MinMax minmax(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
double depth_sum_left(const double* gaps, const double* lefts, std::size_t m, double x);
double depth_sum_right(const double* gaps, const double* rights, std::size_t m, double x);
double l1_distance(const double* a, const double* b, std::size_t n);
double sum_squared_diff(const double* a, const double* b, std::size_t n);
void axpy(double* y, const double* x, double a, std::size_t n);
MinMax minmax(const double* x, std::size_t n);
}  // namespace avx2

}  // namespace isodepth::kernels
