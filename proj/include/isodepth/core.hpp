#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "isodepth/errors.hpp"

namespace isodepth {

// Strictly increasing, finite 1-D sample. Indices in the public API are
// 1-based, following the x_1 < x_2 < ... < x_n convention used throughout;
// values() is an ordinary 0-based vector.
class SortedSample1D {
 public:
  // Takes an already strictly increasing sequence; throws otherwise.
  explicit SortedSample1D(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const double* data() const { return values_.data(); }

  // 1-based point access.
  double at(std::size_t i) const;

  // 1-based gap i = x_{i+1} - x_i, i in [1, n-1].
  double gap(std::size_t i) const;

 private:
  std::vector<double> values_;
};

// Sorts, checks finiteness, rejects duplicates.
SortedSample1D sort_and_validate(std::span<const double> samples);

// Same, but first breaks ties with deterministic seeded noise of magnitude
// eps (the CLI --jitter escape hatch for real data with repeated values).
SortedSample1D sort_and_validate_jitter(std::span<const double> samples, double eps,
                                        std::uint64_t seed);

struct DensityMetrics {
  double max_gap = 0.0;  // U
  double min_gap = 0.0;  // L
  double kappa = 0.0;    // U / L
  double delta = 0.0;    // U - L
  std::size_t first_gap = 0;  // 1-based, inclusive
  std::size_t last_gap = 0;
};

// Aggregates adjacent gaps first_gap..last_gap (1-based, gap i = x_{i+1}-x_i).
// The range parameter exists because the density definition excludes the
// anomaly gap (max over i >= 2) and the case studies apply it to subranges.
DensityMetrics density_metrics(const SortedSample1D& s, std::size_t first_gap,
                               std::size_t last_gap);

// Full range: gaps 1..n-1.
DensityMetrics density_metrics(const SortedSample1D& s);

// Row-major n x d matrix with named columns; all entries finite.
class Dataset {
 public:
  Dataset(std::vector<double> rows, std::size_t n, std::size_t d,
          std::vector<std::string> column_names);

  static Dataset from_column(std::vector<double> column, std::string name = "x");
  static Dataset from_sample(const SortedSample1D& s, std::string name = "x");

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  double at(std::size_t i, std::size_t j) const { return rows_[i * d_ + j]; }
  std::span<const double> row(std::size_t i) const { return {rows_.data() + i * d_, d_}; }
  std::vector<double> column(std::size_t j) const;
  const std::vector<std::string>& column_names() const { return column_names_; }
  const std::vector<double>& raw() const { return rows_; }

  std::size_t column_index(const std::string& name) const;  // throws IndexOutOfBounds

 private:
  std::vector<double> rows_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<std::string> column_names_;
};

// RFC-4180-style CSV with a required header row and '.' decimal separator.
// With an explicit column selection, non-numeric cells are a ParseError;
// without one, non-numeric columns are skipped with a warning on `warnings`.
Dataset load_csv(const std::string& path, const std::vector<std::string>& columns = {},
                 std::ostream* warnings = nullptr);
Dataset load_csv_stream(std::istream& in, const std::vector<std::string>& columns = {},
                        std::ostream* warnings = nullptr);

}  // namespace isodepth
