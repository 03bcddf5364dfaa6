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

#ifndef QMUT_DATA_H_
#define QMUT_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qmut {

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data).subspan(r * cols, cols);
  }
  std::span<double> row(std::size_t r) {
    return std::span<double>(data).subspan(r * cols, cols);
  }
};

/// Tabular rows, or row-major images of height x width pixels.
struct FeatureShape {
  bool image = false;
  int height = 0;
  int width = 0;

  static FeatureShape tabular() { return {}; }
  static FeatureShape image_of(int h, int w) { return {true, h, w}; }
  friend bool operator==(const FeatureShape&, const FeatureShape&) = default;
};

struct Dataset {
  Matrix samples;
  std::vector<int> labels;
  int num_classes = 0;
  FeatureShape shape;

  std::size_t size() const { return labels.size(); }
  std::size_t num_features() const { return samples.cols; }
  /// Throws DataError when labels or shape are inconsistent.
  void validate() const;
};

/// Reads an RFC-4180 CSV with a header row. Every column other than
/// `label_column` must be numeric. Labels are re-indexed densely from 0 in
/// sorted order (numeric order when all labels are numbers).
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);
Dataset parse_csv(const std::string& text, const std::string& label_column);

/// Per-feature min-max map into [lo, hi]; constant features go to the
/// midpoint. Outputs are snapped to multiples of 2^-50.
Dataset scale_features(const Dataset& dataset, double lo, double hi);

struct PcaResult {
  Dataset reduced;
  /// k x n_features, one unit-norm principal axis per row.
  Matrix components;
  std::vector<double> eigenvalues;  // all of them, non-increasing
  std::vector<double> mean;
  double explained_variance_ratio = 0.0;
};

/// Projects the centered data onto the top-k covariance eigenvectors.
PcaResult pca_reduce(const Dataset& dataset, std::size_t k);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.
/// Returns eigenvalues (non-increasing) and eigenvectors as matrix columns.
std::pair<std::vector<double>, Matrix> jacobi_eigen(const Matrix& symmetric);

/// Bilinear resize with half-pixel centers.
std::vector<double> resize_image(std::span<const double> image, int height,
                                 int width, int out_height, int out_width);
Dataset resize_images(const Dataset& dataset, int out_height, int out_width);

/// Seeded shuffle; the first test_size shuffled rows become the test set.
std::pair<Dataset, Dataset> split(const Dataset& dataset, std::size_t test_size,
                                  std::uint64_t seed);

/// Gaussian clusters with unit variance around seeded centers whose pairwise
/// distance is at least `separation`. Samples are grouped by class.
Dataset synth_blobs(std::size_t per_class, std::size_t num_features,
                    int num_classes, double separation, std::uint64_t seed);

/// Class-dependent stroke patterns plus pixel noise, values in [0, 1].
Dataset synth_images(std::size_t per_class, int height, int width,
                     int num_classes, std::uint64_t seed);

/// Relabels to a binary task: `positive` -> 0, everything else -> 1.
Dataset one_vs_rest(const Dataset& dataset, int positive);

Dataset subset(const Dataset& dataset, std::span<const std::size_t> rows);

}  // namespace qmut

#endif  // QMUT_DATA_H_
