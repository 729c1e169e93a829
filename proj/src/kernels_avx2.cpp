// AVX2 kernel variants. This translation unit is the only one compiled with
// -mavx2; contraction is disabled so axpy stays bit-identical to the scalar
// reference. On targets without the x86 builtins the variants delegate to
// scalar and report unavailable.

#include "isodepth/kernels.hpp"

#ifdef ISODEPTH_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace isodepth::kernels::avx2 {
namespace {

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

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// One Neumaier step per lane.
inline void lane_add(__m256d& sum, __m256d& comp, __m256d term) {
  const __m256d t = _mm256_add_pd(sum, term);
  const __m256d mask = _mm256_cmp_pd(abs_pd(sum), abs_pd(term), _CMP_GE_OQ);
  const __m256d big = _mm256_blendv_pd(term, sum, mask);
  const __m256d small = _mm256_blendv_pd(sum, term, mask);
  comp = _mm256_add_pd(comp, _mm256_add_pd(_mm256_sub_pd(big, t), small));
  sum = t;
}

inline double reduce(__m256d sum, __m256d comp) {
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, sum);
  _mm256_store_pd(c, comp);
  CompensatedSum acc;
  for (int i = 0; i < 4; ++i) acc.add(s[i]);
  for (int i = 0; i < 4; ++i) acc.add(c[i]);
  return acc.value();
}

}  // namespace

bool available() { return __builtin_cpu_supports("avx2") != 0; }

double depth_sum_left(const double* gaps, const double* lefts, std::size_t m, double x) {
  const __m256d xv = _mm256_set1_pd(x);
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    const __m256d g = _mm256_loadu_pd(gaps + k);
    const __m256d l = _mm256_loadu_pd(lefts + k);
    lane_add(sum, comp, _mm256_div_pd(g, _mm256_sub_pd(xv, l)));
  }
  CompensatedSum acc;
  acc.add(reduce(sum, comp));
  for (; k < m; ++k) acc.add(gaps[k] / (x - lefts[k]));
  return acc.value();
}

double depth_sum_right(const double* gaps, const double* rights, std::size_t m, double x) {
  const __m256d xv = _mm256_set1_pd(x);
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    const __m256d g = _mm256_loadu_pd(gaps + k);
    const __m256d r = _mm256_loadu_pd(rights + k);
    lane_add(sum, comp, _mm256_div_pd(g, _mm256_sub_pd(r, xv)));
  }
  CompensatedSum acc;
  acc.add(reduce(sum, comp));
  for (; k < m; ++k) acc.add(gaps[k] / (rights[k] - x));
  return acc.value();
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    lane_add(sum, comp, abs_pd(d));
  }
  CompensatedSum acc;
  acc.add(reduce(sum, comp));
  for (; i < n; ++i) acc.add(std::abs(a[i] - b[i]));
  return acc.value();
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    lane_add(sum, comp, _mm256_mul_pd(d, d));
  }
  CompensatedSum acc;
  acc.add(reduce(sum, comp));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc.add(d * d);
  }
  return acc.value();
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

MinMax minmax(const double* x, std::size_t n) {
  if (n < 8) return scalar::minmax(x, n);
  __m256d lo = _mm256_loadu_pd(x);
  __m256d hi = lo;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    lo = _mm256_min_pd(lo, v);
    hi = _mm256_max_pd(hi, v);
  }
  alignas(32) double lv[4];
  alignas(32) double hv[4];
  _mm256_store_pd(lv, lo);
  _mm256_store_pd(hv, hi);
  MinMax mm{lv[0], hv[0]};
  for (int k = 1; k < 4; ++k) {
    if (lv[k] < mm.min) mm.min = lv[k];
    if (hv[k] > mm.max) mm.max = hv[k];
  }
  for (; i < n; ++i) {
    if (x[i] < mm.min) mm.min = x[i];
    if (x[i] > mm.max) mm.max = x[i];
  }
  return mm;
}

}  // namespace isodepth::kernels::avx2

#else  // !ISODEPTH_HAVE_AVX2

namespace isodepth::kernels::avx2 {

bool available() { return false; }

double depth_sum_left(const double* gaps, const double* lefts, std::size_t m, double x) {
  return scalar::depth_sum_left(gaps, lefts, m, x);
}
double depth_sum_right(const double* gaps, const double* rights, std::size_t m, double x) {
  return scalar::depth_sum_right(gaps, rights, m, x);
}
double l1_distance(const double* a, const double* b, std::size_t n) {
  return scalar::l1_distance(a, b, n);
}
double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  return scalar::sum_squared_diff(a, b, n);
}
void axpy(double* y, const double* x, double a, std::size_t n) { scalar::axpy(y, x, a, n); }
MinMax minmax(const double* x, std::size_t n) { return scalar::minmax(x, n); }

}  // namespace isodepth::kernels::avx2

#endif
