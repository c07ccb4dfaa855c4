#include "tsetlin/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tsetlin/errors.hpp"
#include "tsetlin/rng.hpp"

namespace tsetlin {

namespace {

std::vector<std::string> parse_csv_record(const std::string& line, const std::string& where) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw DataError(where + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

double quantile_type7(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream rng(RngSpec::pcg64(), seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.next_raw() % i;
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::size_t train_size_for(std::size_t n, double fraction) {
  if (n < 2) throw DataError("cannot split a dataset with fewer than 2 points");
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("train fraction must be in (0, 1)");
  auto train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  train = std::min(std::max<std::size_t>(train, 1), n - 1);
  return train;
}

std::uint32_t read_be32(std::istream& in, const std::string& where) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError(where + ": truncated IDX header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

} // namespace

std::uint32_t NumericTable::class_count() const {
  std::uint32_t top = 0;
  for (std::uint32_t label : labels) top = std::max(top, label);
  return labels.empty() ? 0 : top + 1;
}

BooleanizedDataset xor_dataset() {
  BooleanizedDataset ds;
  ds.digit_count = 2;
  ds.class_count = 2;
  ds.points = {
      {{0, 0}, 0},
      {{0, 1}, 1},
      {{1, 0}, 1},
      {{1, 1}, 0},
  };
  return ds;
}

NumericTable load_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  auto header = parse_csv_record(line, path + ":1");
  if (header.size() < 2) throw DataError(path + ": need at least one feature column and a label");
  if (header.back() != "label")
    throw DataError(path + ": final column must be named 'label', got '" + header.back() + "'");
  NumericTable table;
  table.feature_names.assign(header.begin(), header.end() - 1);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = path + ":" + std::to_string(line_no);
    auto fields = parse_csv_record(line, where);
    if (fields.size() != header.size())
      throw DataError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    std::vector<double> row(table.feature_count());
    for (std::size_t f = 0; f < row.size(); ++f) {
      try {
        std::size_t pos = 0;
        row[f] = std::stod(fields[f], &pos);
        if (pos != fields[f].size()) throw std::invalid_argument(fields[f]);
      } catch (const std::exception&) {
        throw DataError(where + ": bad numeric value '" + fields[f] + "'");
      }
      if (!std::isfinite(row[f])) throw DataError(where + ": non-finite feature value");
    }
    long long label = -1;
    try {
      std::size_t pos = 0;
      label = std::stoll(fields.back(), &pos);
      if (pos != fields.back().size()) throw std::invalid_argument(fields.back());
    } catch (const std::exception&) {
      throw DataError(where + ": bad label '" + fields.back() + "'");
    }
    if (label < 0) throw DataError(where + ": labels must be non-negative class indices");
    table.rows.push_back(std::move(row));
    table.labels.push_back(static_cast<std::uint32_t>(label));
  }
  if (table.rows.empty()) throw DataError(path + ": no datapoints");
  return table;
}

BooleanizerThresholds fit_booleanizer(const NumericTable& train, std::uint32_t bits_per_feature) {
  if (bits_per_feature < 1) throw ConfigError("bits_per_feature must be >= 1");
  if (train.rows.empty()) throw DataError("cannot fit booleanizer on an empty table");
  BooleanizerThresholds out;
  out.bits_per_feature = bits_per_feature;
  out.thresholds.resize(train.feature_count());
  std::vector<double> column(train.size());
  for (std::size_t f = 0; f < train.feature_count(); ++f) {
    for (std::size_t r = 0; r < train.size(); ++r) column[r] = train.rows[r][f];
    std::sort(column.begin(), column.end());
    auto& thr = out.thresholds[f];
    thr.resize(bits_per_feature);
    for (std::uint32_t i = 1; i <= bits_per_feature; ++i)
      thr[i - 1] = quantile_type7(column, static_cast<double>(i) / (bits_per_feature + 1.0));
    if (column.front() == column.back())
      out.constant_features.push_back(static_cast<std::uint32_t>(f));
  }
  return out;
}

BooleanizedDataset apply_booleanizer(const NumericTable& table, const BooleanizerThresholds& thr,
                                     std::uint32_t class_count) {
  if (thr.thresholds.size() != table.feature_count())
    throw DataError("booleanizer fitted on a different feature count");
  BooleanizedDataset ds;
  ds.digit_count = static_cast<std::uint32_t>(table.feature_count()) * thr.bits_per_feature;
  ds.class_count = class_count;
  ds.points.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    BoolPoint point;
    point.bits.reserve(ds.digit_count);
    for (std::size_t f = 0; f < table.feature_count(); ++f)
      for (std::uint32_t b = 0; b < thr.bits_per_feature; ++b)
        point.bits.push_back(table.rows[r][f] > thr.thresholds[f][b] ? 1 : 0);
    point.label = table.labels[r];
    if (point.label >= class_count) throw DataError("label outside the declared class count");
    ds.points.push_back(std::move(point));
  }
  return ds;
}

BooleanizedDataset booleanize(const NumericTable& table, std::uint32_t bits_per_feature) {
  return apply_booleanizer(table, fit_booleanizer(table, bits_per_feature), table.class_count());
}

std::pair<NumericTable, NumericTable> split(const NumericTable& table, const SplitSpec& spec) {
  const auto order = shuffled_indices(table.size(), spec.shuffle_seed);
  const std::size_t train_n = train_size_for(table.size(), spec.train_fraction);
  NumericTable train, test;
  train.feature_names = test.feature_names = table.feature_names;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& dst = i < train_n ? train : test;
    dst.rows.push_back(table.rows[order[i]]);
    dst.labels.push_back(table.labels[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

std::pair<BooleanizedDataset, BooleanizedDataset> split(const BooleanizedDataset& ds,
                                                        const SplitSpec& spec) {
  const auto order = shuffled_indices(ds.size(), spec.shuffle_seed);
  const std::size_t train_n = train_size_for(ds.size(), spec.train_fraction);
  BooleanizedDataset train, test;
  train.digit_count = test.digit_count = ds.digit_count;
  train.class_count = test.class_count = ds.class_count;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < train_n ? train : test).points.push_back(ds.points[order[i]]);
  return {std::move(train), std::move(test)};
}

std::pair<BooleanizedDataset, BooleanizedDataset> split_booleanized(
    const NumericTable& table, std::uint32_t bits_per_feature, const SplitSpec& spec) {
  auto [train_raw, test_raw] = split(table, spec);
  const auto thr = fit_booleanizer(train_raw, bits_per_feature);
  const std::uint32_t classes = table.class_count();
  return {apply_booleanizer(train_raw, thr, classes), apply_booleanizer(test_raw, thr, classes)};
}

BooleanizedDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                                  std::uint8_t threshold) {
  std::ifstream images(images_path, std::ios::binary);
  if (!images) throw DataError("cannot open '" + images_path + "'");
  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) throw DataError("cannot open '" + labels_path + "'");

  if (read_be32(images, images_path) != 0x00000803u)
    throw DataError(images_path + ": not an IDX image file");
  const std::uint32_t image_count = read_be32(images, images_path);
  const std::uint32_t rows = read_be32(images, images_path);
  const std::uint32_t cols = read_be32(images, images_path);
  if (read_be32(labels, labels_path) != 0x00000801u)
    throw DataError(labels_path + ": not an IDX label file");
  if (read_be32(labels, labels_path) != image_count)
    throw DataError("image/label counts differ");

  BooleanizedDataset ds;
  ds.digit_count = rows * cols;
  ds.class_count = 10;
  ds.points.resize(image_count);
  std::vector<unsigned char> pixels(ds.digit_count);
  for (std::uint32_t i = 0; i < image_count; ++i) {
    if (!images.read(reinterpret_cast<char*>(pixels.data()), pixels.size()))
      throw DataError(images_path + ": truncated image data");
    auto& point = ds.points[i];
    point.bits.resize(ds.digit_count);
    for (std::size_t p = 0; p < pixels.size(); ++p) point.bits[p] = pixels[p] > threshold ? 1 : 0;
    char label = 0;
    if (!labels.read(&label, 1)) throw DataError(labels_path + ": truncated label data");
    point.label = static_cast<std::uint8_t>(label);
    if (point.label > 9) throw DataError(labels_path + ": label outside 0..9");
  }
  return ds;
}

} // namespace tsetlin
