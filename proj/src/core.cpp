#include "isodepth/core.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "isodepth/kernels.hpp"
#include "isodepth/rng.hpp"

namespace isodepth {

SortedSample1D::SortedSample1D(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EmptyInput();
  for (double v : values_) {
    if (!std::isfinite(v)) throw NonFiniteValue();
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] == values_[i - 1]) throw DuplicateValue(values_[i]);
    if (values_[i] < values_[i - 1]) throw Error("values not sorted");
  }
}

double SortedSample1D::at(std::size_t i) const {
  if (i < 1 || i > values_.size()) throw IndexOutOfBounds("point index " + std::to_string(i));
  return values_[i - 1];
}

double SortedSample1D::gap(std::size_t i) const {
  if (i < 1 || i + 1 > values_.size()) throw IndexOutOfBounds("gap index " + std::to_string(i));
  return values_[i] - values_[i - 1];
}

SortedSample1D sort_and_validate(std::span<const double> samples) {
  std::vector<double> v(samples.begin(), samples.end());
  if (v.empty()) throw EmptyInput();
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFiniteValue();
  }
  std::sort(v.begin(), v.end());
  return SortedSample1D(std::move(v));
}

SortedSample1D sort_and_validate_jitter(std::span<const double> samples, double eps,
                                        std::uint64_t seed) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParams("jitter eps must be positive");
  std::vector<double> v(samples.begin(), samples.end());
  Rng rng(seed);
  for (double& x : v) x += (rng.next_double() - 0.5) * 2.0 * eps;
  return sort_and_validate(v);
}

DensityMetrics density_metrics(const SortedSample1D& s, std::size_t first_gap,
                               std::size_t last_gap) {
  const std::size_t n = s.size();
  if (n < 2) throw NotEnoughPoints("density metrics need n >= 2");
  if (first_gap < 1 || last_gap > n - 1 || first_gap > last_gap) {
    throw RangeOutOfBounds("gap range [" + std::to_string(first_gap) + ", " +
                           std::to_string(last_gap) + "] for n = " + std::to_string(n));
  }
  // Gaps of a strictly increasing sample are positive, so U >= L > 0 holds by
  // construction. Differencing then a minmax reduction.
  std::vector<double> gaps(last_gap - first_gap + 1);
  for (std::size_t i = 0; i < gaps.size(); ++i) gaps[i] = s.gap(first_gap + i);
  const kernels::MinMax mm = kernels::minmax(gaps.data(), gaps.size());
  DensityMetrics m;
  m.max_gap = mm.max;
  m.min_gap = mm.min;
  m.kappa = mm.max / mm.min;
  m.delta = mm.max - mm.min;
  m.first_gap = first_gap;
  m.last_gap = last_gap;
  return m;
}

DensityMetrics density_metrics(const SortedSample1D& s) {
  if (s.size() < 2) throw NotEnoughPoints("density metrics need n >= 2");
  return density_metrics(s, 1, s.size() - 1);
}

Dataset::Dataset(std::vector<double> rows, std::size_t n, std::size_t d,
                 std::vector<std::string> column_names)
    : rows_(std::move(rows)), n_(n), d_(d), column_names_(std::move(column_names)) {
  if (n_ < 1 || d_ < 1) throw EmptyInput("dataset must have n >= 1 and d >= 1");
  if (rows_.size() != n_ * d_) throw Error("dataset shape mismatch");
  if (column_names_.size() != d_) throw Error("column name count mismatch");
  for (double v : rows_) {
    if (!std::isfinite(v)) throw NonFiniteValue();
  }
}

Dataset Dataset::from_column(std::vector<double> column, std::string name) {
  const std::size_t n = column.size();
  return Dataset(std::move(column), n, 1, {std::move(name)});
}

Dataset Dataset::from_sample(const SortedSample1D& s, std::string name) {
  return from_column(s.values(), std::move(name));
}

std::vector<double> Dataset::column(std::size_t j) const {
  if (j >= d_) throw IndexOutOfBounds("column " + std::to_string(j));
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = rows_[i * d_ + j];
  return out;
}

std::size_t Dataset::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < column_names_.size(); ++j) {
    if (column_names_[j] == name) return j;
  }
  throw IndexOutOfBounds("no column named '" + name + "'");
}

namespace {

// Splits one CSV record, honoring double quotes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
  if (first == last) return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset load_csv_stream(std::istream& in, const std::vector<std::string>& columns,
                        std::ostream* warnings) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyInput("missing header row");
  const std::vector<std::string> header = split_record(line);

  std::vector<std::vector<std::string>> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_record(line);
    if (fields.size() != header.size()) {
      throw ParseError(records.size() + 1,
                       "(expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()) + ")");
    }
    records.push_back(std::move(fields));
  }
  if (records.empty()) throw EmptyInput("no data rows");

  std::vector<std::size_t> selected;
  if (!columns.empty()) {
    for (const auto& name : columns) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw IndexOutOfBounds("no column named '" + name + "'");
      selected.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  } else {
    // Keep the columns that parse as numeric in every row.
    for (std::size_t j = 0; j < header.size(); ++j) {
      bool numeric = true;
      double tmp;
      for (const auto& rec : records) {
        if (!parse_double(rec[j], tmp)) {
          numeric = false;
          break;
        }
      }
      if (numeric) {
        selected.push_back(j);
      } else if (warnings) {
        *warnings << "warning: skipping non-numeric column '" << header[j] << "'\n";
      }
    }
    if (selected.empty()) throw NoNumericColumns();
  }

  const std::size_t n = records.size();
  const std::size_t d = selected.size();
  std::vector<double> rows(n * d);
  std::vector<std::string> names(d);
  for (std::size_t jj = 0; jj < d; ++jj) names[jj] = header[selected[jj]];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t jj = 0; jj < d; ++jj) {
      if (!parse_double(records[i][selected[jj]], rows[i * d + jj])) {
        throw ParseError(i + 1, names[jj]);
      }
    }
  }
  return Dataset(std::move(rows), n, d, std::move(names));
}

Dataset load_csv(const std::string& path, const std::vector<std::string>& columns,
                 std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return load_csv_stream(in, columns, warnings);
}

}  // namespace isodepth
