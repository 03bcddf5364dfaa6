// Copyright 2026 The qmut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmut/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "qmut/error.h"
#include "qmut/random.h"

namespace qmut {

void Dataset::validate() const {
  if (samples.rows != labels.size()) {
    throw DataError(fmt::format("{} rows but {} labels", samples.rows, labels.size()));
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw DataError(fmt::format("label {} outside [0, {})", y, num_classes));
    }
  }
  if (shape.image &&
      static_cast<std::size_t>(shape.height) * shape.width != samples.cols) {
    throw DataError(fmt::format("image shape {}x{} does not match {} features",
                                shape.height, shape.width, samples.cols));
  }
}

namespace {

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

// RFC 4180 records. Quoted fields may contain commas, quotes ("") and line
// breaks.
std::vector<std::vector<std::string>> csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (field_started && !field.empty()) {
        throw DataError(fmt::format("line {}: stray quote inside field", line));
      }
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
      if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
      record.clear();
      ++line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw DataError("unterminated quoted field");
  if (field_started || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& label_column) {
  const auto records = csv_records(text);
  if (records.empty()) throw DataError("CSV has no header row");
  const auto& header = records[0];
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw DataError(fmt::format("label column '{}' not in header", label_column));
  }
  const std::size_t label_idx = label_it - header.begin();
  const std::size_t n_features = header.size() - 1;

  Dataset ds;
  ds.samples = Matrix(records.size() - 1, n_features);
  std::vector<std::string> raw_labels;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw DataError(fmt::format("row {}: expected {} fields, got {}", r, header.size(),
                                  rec.size()));
    }
    std::size_t out_col = 0;
    for (std::size_t c = 0; c < rec.size(); ++c) {
      if (c == label_idx) {
        raw_labels.push_back(rec[c]);
        continue;
      }
      auto v = parse_double(rec[c]);
      if (!v) {
        throw DataError(fmt::format("row {}, column {} ('{}'): non-numeric value '{}'", r,
                                    c + 1, header[c], rec[c]));
      }
      ds.samples(r - 1, out_col++) = *v;
    }
  }

  std::vector<std::string> distinct = raw_labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const bool numeric = std::all_of(distinct.begin(), distinct.end(),
                                   [](const std::string& s) { return parse_double(s).has_value(); });
  if (numeric) {
    std::sort(distinct.begin(), distinct.end(), [](const std::string& a, const std::string& b) {
      return *parse_double(a) < *parse_double(b);
    });
  }
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < distinct.size(); ++i) index[distinct[i]] = static_cast<int>(i);
  for (const auto& l : raw_labels) ds.labels.push_back(index.at(l));
  ds.num_classes = static_cast<int>(distinct.size());
  ds.validate();
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), label_column);
}

namespace {

// Scaled values sit on a 2^-50 grid so that 1 - x and -x are exact and the
// input-transform involutions hold bit for bit on small-magnitude features.
constexpr double kGrid = 0x1p50;

double snap_to_grid(double v, double lo, double hi) {
  double q = std::nearbyint(v * kGrid) / kGrid;
  if (q > hi) q -= 1.0 / kGrid;
  if (q < lo) q += 1.0 / kGrid;
  return q;
}

}  // namespace

Dataset scale_features(const Dataset& dataset, double lo, double hi) {
  Dataset out = dataset;
  const auto& m = dataset.samples;
  for (std::size_t c = 0; c < m.cols; ++c) {
    double mn = INFINITY, mx = -INFINITY;
    for (std::size_t r = 0; r < m.rows; ++r) {
      mn = std::min(mn, m(r, c));
      mx = std::max(mx, m(r, c));
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
      const double v = mx > mn ? lo + (hi - lo) * (m(r, c) - mn) / (mx - mn)
                               : 0.5 * (lo + hi);
      out.samples(r, c) = snap_to_grid(v, lo, hi);
    }
  }
  return out;
}

std::pair<std::vector<double>, Matrix> jacobi_eigen(const Matrix& symmetric) {
  const std::size_t n = symmetric.rows;
  Matrix a = symmetric;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double scale = 0.0;
  for (double x : a.data) scale = std::max(scale, std::abs(x));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-30 * std::max(scale * scale, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  std::vector<double> values(n);
  Matrix vectors(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = a(order[k], order[k]);
    // Sign convention: the largest-magnitude entry of each vector is positive.
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v(i, order[k])) > std::abs(v(arg, order[k])) + 1e-12) arg = i;
    }
    const double sign = v(arg, order[k]) < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) vectors(i, k) = sign * v(i, order[k]);
  }
  return {values, vectors};
}

PcaResult pca_reduce(const Dataset& dataset, std::size_t k) {
  const std::size_t n = dataset.samples.rows;
  const std::size_t d = dataset.samples.cols;
  if (k < 1 || k > d) throw DataError(fmt::format("PCA target {} outside [1, {}]", k, d));
  if (n < 1) throw DataError("PCA on an empty dataset");

  PcaResult res;
  res.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) res.mean[c] += dataset.samples(r, c);
  for (double& m : res.mean) m /= static_cast<double>(n);

  Matrix centered(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) centered(r, c) = dataset.samples(r, c) - res.mean[c];

  Matrix cov(d, d);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += centered(r, i) * centered(r, j);
      cov(i, j) = cov(j, i) = acc / denom;
    }
  }

  auto [values, vectors] = jacobi_eigen(cov);
  res.eigenvalues = values;
  res.components = Matrix(k, d);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t c = 0; c < d; ++c) res.components(p, c) = vectors(c, p);

  double total = 0.0, kept = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    total += std::max(values[i], 0.0);
    if (i < k) kept += std::max(values[i], 0.0);
  }
  res.explained_variance_ratio = total > 0 ? kept / total : 1.0;

  res.reduced = dataset;
  res.reduced.shape = FeatureShape::tabular();
  res.reduced.samples = Matrix(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t p = 0; p < k; ++p) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += centered(r, c) * res.components(p, c);
      res.reduced.samples(r, p) = acc;
    }
  }
  return res;
}

std::vector<double> resize_image(std::span<const double> image, int height,
                                 int width, int out_height, int out_width) {
  if (height < 1 || width < 1 || out_height < 1 || out_width < 1) {
    throw DataError("image sizes must be positive");
  }
  if (image.size() != static_cast<std::size_t>(height) * width) {
    throw DataError("image buffer does not match its shape");
  }
  auto source = [](int o, int in, int out) {
    const double s = (o + 0.5) * static_cast<double>(in) / out - 0.5;
    return std::clamp(s, 0.0, static_cast<double>(in - 1));
  };
  std::vector<double> out(static_cast<std::size_t>(out_height) * out_width);
  for (int y = 0; y < out_height; ++y) {
    const double sy = source(y, height, out_height);
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, height - 1);
    const double fy = sy - y0;
    for (int x = 0; x < out_width; ++x) {
      const double sx = source(x, width, out_width);
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, width - 1);
      const double fx = sx - x0;
      auto at = [&](int yy, int xx) { return image[static_cast<std::size_t>(yy) * width + xx]; };
      out[static_cast<std::size_t>(y) * out_width + x] =
          (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x1)) +
          fy * ((1 - fx) * at(y1, x0) + fx * at(y1, x1));
    }
  }
  return out;
}

Dataset resize_images(const Dataset& dataset, int out_height, int out_width) {
  if (!dataset.shape.image) throw DataError("resize needs an image dataset");
  Dataset out = dataset;
  out.shape = FeatureShape::image_of(out_height, out_width);
  out.samples = Matrix(dataset.size(), static_cast<std::size_t>(out_height) * out_width);
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    auto img = resize_image(dataset.samples.row(r), dataset.shape.height,
                            dataset.shape.width, out_height, out_width);
    std::copy(img.begin(), img.end(), out.samples.row(r).begin());
  }
  return out;
}

Dataset subset(const Dataset& dataset, std::span<const std::size_t> rows) {
  Dataset out;
  out.num_classes = dataset.num_classes;
  out.shape = dataset.shape;
  out.samples = Matrix(rows.size(), dataset.samples.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = dataset.samples.row(rows[i]);
    std::copy(src.begin(), src.end(), out.samples.row(i).begin());
    out.labels.push_back(dataset.labels.at(rows[i]));
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, std::size_t test_size,
                                  std::uint64_t seed) {
  if (test_size >= dataset.size()) {
    throw DataError(fmt::format("test size {} needs more than {} rows", test_size,
                                dataset.size()));
  }
  std::vector<std::size_t> idx(dataset.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix_seed(seed, 0x5b1175ULL));
  rng.shuffle(idx.begin(), idx.end());
  std::span<const std::size_t> all(idx);
  return {subset(dataset, all.subspan(test_size)), subset(dataset, all.first(test_size))};
}

Dataset synth_blobs(std::size_t per_class, std::size_t num_features,
                    int num_classes, double separation, std::uint64_t seed) {
  if (per_class < 1 || num_features < 1 || num_classes < 1) {
    throw DataError("blob counts must be >= 1");
  }
  Rng rng(mix_seed(seed, 0xb10b5ULL));
  std::vector<std::vector<double>> centers;
  double box = separation * std::max(num_classes, 2);
  int attempts = 0;
  while (static_cast<int>(centers.size()) < num_classes) {
    std::vector<double> c(num_features);
    for (double& x : c) x = rng.uniform(-box, box);
    const bool ok = std::all_of(centers.begin(), centers.end(), [&](const auto& o) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < num_features; ++i) d2 += (c[i] - o[i]) * (c[i] - o[i]);
      return std::sqrt(d2) >= separation;
    });
    if (ok) centers.push_back(std::move(c));
    if (++attempts % 1000 == 0) box *= 2;
  }
  Dataset ds;
  ds.num_classes = num_classes;
  ds.samples = Matrix(per_class * num_classes, num_features);
  std::size_t row = 0;
  for (int k = 0; k < num_classes; ++k) {
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      for (std::size_t f = 0; f < num_features; ++f) {
        ds.samples(row, f) = centers[k][f] + rng.normal();
      }
      ds.labels.push_back(k);
    }
  }
  return ds;
}

Dataset synth_images(std::size_t per_class, int height, int width,
                     int num_classes, std::uint64_t seed) {
  if (per_class < 1 || height < 2 || width < 2 || num_classes < 1) {
    throw DataError("invalid synthetic image parameters");
  }
  Rng rng(mix_seed(seed, 0x1a9e5ULL));
  Dataset ds;
  ds.num_classes = num_classes;
  ds.shape = FeatureShape::image_of(height, width);
  ds.samples = Matrix(per_class * num_classes, static_cast<std::size_t>(height) * width);
  const double thickness = std::max(1.0, std::min(height, width) / 8.0);
  std::size_t row = 0;
  for (int k = 0; k < num_classes; ++k) {
    // Class k is a stroke through the center at angle k*pi/num_classes.
    const double angle = k * std::numbers::pi / num_classes;
    const double nx = -std::sin(angle), ny = std::cos(angle);
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      const double offset = rng.uniform(-1.0, 1.0);
      auto img = ds.samples.row(row);
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const double dx = x - (width - 1) / 2.0, dy = y - (height - 1) / 2.0;
          const double dist = std::abs(dx * nx + dy * ny - offset);
          const double ink = dist < thickness ? 1.0 : 0.0;
          img[static_cast<std::size_t>(y) * width + x] =
              std::clamp(ink * 0.8 + rng.uniform(0.0, 0.2), 0.0, 1.0);
        }
      }
      ds.labels.push_back(k);
    }
  }
  return ds;
}

Dataset one_vs_rest(const Dataset& dataset, int positive) {
  Dataset out = dataset;
  out.num_classes = 2;
  for (int& y : out.labels) y = y == positive ? 0 : 1;
  return out;
}

}  // namespace qmut
