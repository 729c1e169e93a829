#include "isodepth/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace isodepth::kernels {
namespace {

Level resolve() {
  if (const char* env = std::getenv("ISODEPTH_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Level::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2::available()) return Level::avx2;
  }
  return avx2::available() ? Level::avx2 : Level::scalar;
}

Level level_once() {
  static const Level level = resolve();
  return level;
}

}  // namespace

Level active_level() { return level_once(); }

const char* level_name(Level level) {
  switch (level) {
    case Level::avx2:
      return "avx2";
    case Level::scalar:
    default:
      return "scalar";
  }
}

double depth_sum_left(const double* gaps, const double* lefts, std::size_t m, double x) {
  return level_once() == Level::avx2 ? avx2::depth_sum_left(gaps, lefts, m, x)
                                     : scalar::depth_sum_left(gaps, lefts, m, x);
}

double depth_sum_right(const double* gaps, const double* rights, std::size_t m, double x) {
  return level_once() == Level::avx2 ? avx2::depth_sum_right(gaps, rights, m, x)
                                     : scalar::depth_sum_right(gaps, rights, m, x);
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  return level_once() == Level::avx2 ? avx2::l1_distance(a, b, n) : scalar::l1_distance(a, b, n);
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  return level_once() == Level::avx2 ? avx2::sum_squared_diff(a, b, n)
                                     : scalar::sum_squared_diff(a, b, n);
}

void axpy(double* y, const double* x, double a, std::size_t n) {
  if (level_once() == Level::avx2) {
    avx2::axpy(y, x, a, n);
  } else {
    scalar::axpy(y, x, a, n);
  }
}

MinMax minmax(const double* x, std::size_t n) {
  return level_once() == Level::avx2 ? avx2::minmax(x, n) : scalar::minmax(x, n);
}

}  // namespace isodepth::kernels
