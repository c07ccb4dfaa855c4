#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tsetlin {

/// Raw numeric feature table as loaded from CSV: one row per datapoint,
/// the final column holding a non-negative integer class label.
struct NumericTable {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;
  std::vector<std::uint32_t> labels;

  std::size_t size() const { return rows.size(); }
  std::size_t feature_count() const { return feature_names.size(); }
  std::uint32_t class_count() const;
};

struct BoolPoint {
  std::vector<std::uint8_t> bits; // L digits, 0/1
  std::uint32_t label = 0;
};

/// Booleanized data: every point carries L equal-significance digits.
struct BooleanizedDataset {
  std::uint32_t digit_count = 0; // L
  std::uint32_t class_count = 0; // M
  std::vector<BoolPoint> points;

  std::size_t size() const { return points.size(); }
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t shuffle_seed = 0;
};

/// The four 2-input XOR datapoints: (0,0)->0, (0,1)->1, (1,0)->1, (1,1)->0.
BooleanizedDataset xor_dataset();

/// Loads a CSV with a header row, numeric feature columns and a final
/// `label` column of non-negative integers. Delimiter is ',' with
/// double-quote quoting. Throws DataError on malformed input.
NumericTable load_numeric_csv(const std::string& path);

/// Per-feature quantile thresholds: q = i/(bits+1) for i = 1..bits,
/// linear-interpolation quantiles over the fitted table (so a median
/// threshold over {1,2,3,4} is 2.5). Digit i of a feature is 1 iff
/// value > threshold_i; L = features x bits_per_feature.
struct BooleanizerThresholds {
  std::uint32_t bits_per_feature = 0;
  std::vector<std::vector<double>> thresholds;  // [feature][bit]
  std::vector<std::uint32_t> constant_features; // all thresholds equal; digits legal but constant
};

BooleanizerThresholds fit_booleanizer(const NumericTable& train, std::uint32_t bits_per_feature);
BooleanizedDataset apply_booleanizer(const NumericTable& table, const BooleanizerThresholds& thr,
                                     std::uint32_t class_count);

/// Fits and applies thresholds on the same table.
BooleanizedDataset booleanize(const NumericTable& table, std::uint32_t bits_per_feature);

/// Seed-shuffled partition into floor(fraction * N) training points and the
/// rest. Same seed, same split.
std::pair<NumericTable, NumericTable> split(const NumericTable& table, const SplitSpec& spec);
std::pair<BooleanizedDataset, BooleanizedDataset> split(const BooleanizedDataset& ds,
                                                        const SplitSpec& spec);

/// Split-then-booleanize with thresholds fitted on the training side only.
std::pair<BooleanizedDataset, BooleanizedDataset> split_booleanized(
    const NumericTable& table, std::uint32_t bits_per_feature, const SplitSpec& spec);

/// MNIST-style IDX image/label pair, one digit per pixel thresholded at
/// `threshold` of 255. Provided for completeness; not exercised by the
/// bundled experiments.
BooleanizedDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                                  std::uint8_t threshold = 75);

} // namespace tsetlin
