#ifndef RULEMINE_DATASET_HPP
#define RULEMINE_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace rulemine {

enum class AttributeKind { nominal, numeric };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  std::vector<std::string> values;  // nominal only, declaration order

  bool is_nominal() const noexcept { return kind == AttributeKind::nominal; }
  std::optional<std::size_t> value_index(std::string_view value) const;

  bool operator==(const Attribute&) const = default;
};

/// Predictor attributes plus the class attribute and its label set.
/// Construction validates the invariants and throws SchemaError.
class AttributeSchema {
 public:
  AttributeSchema(std::vector<Attribute> attributes, std::string class_attribute,
                  std::vector<std::string> class_labels);

  static AttributeSchema from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }
  const std::string& class_attribute() const noexcept { return class_attribute_; }
  const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }
  std::size_t class_count() const noexcept { return class_labels_.size(); }

  std::optional<std::size_t> attribute_index(std::string_view name) const;
  std::optional<std::size_t> class_index(std::string_view label) const;

  bool operator==(const AttributeSchema&) const = default;

 private:
  std::vector<Attribute> attributes_;
  std::string class_attribute_;
  std::vector<std::string> class_labels_;
};

/// Nominal cells hold the declared value index; numeric cells the parsed number.
using Value = std::variant<std::size_t, double>;
using Record = std::vector<Value>;

struct RawDataset {
  AttributeSchema schema;
  std::vector<Record> rows;           // one Value per schema attribute
  std::vector<std::size_t> labels;    // class index per row; empty for unlabeled input

  std::size_t size() const noexcept { return rows.size(); }
  bool labeled() const noexcept { return labels.size() == rows.size(); }
  RawDataset subset(std::span<const std::size_t> indices) const;
};

struct ParseOptions {
  bool require_class = true;
};

/// Parses a header-first CSV. Column order is free; the column set must be
/// exactly the schema attributes plus (when required) the class attribute.
RawDataset parse_csv(std::istream& source, const AttributeSchema& schema,
                     ParseOptions options = {});

/// Interprets one CSV cell against an attribute. Throws ValueError(row, ...).
Value parse_value(const Attribute& attribute, std::string_view cell, std::size_t row);

struct NumericRange {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const NumericRange&) const = default;
};

struct ColumnInfo {
  std::size_t attribute = 0;
  std::optional<std::size_t> value;  // set for nominal dummy columns
};

struct AttributeBlock {
  std::size_t first_column = 0;
  std::size_t width = 0;
};

/// Column map and scaling parameters shared by every dataset encoded with
/// the same training ranges.
class Encoding {
 public:
  /// ranges[a] is used for numeric attribute a and ignored for nominal ones.
  Encoding(AttributeSchema schema, std::vector<NumericRange> ranges);

  static Encoding fit(const RawDataset& raw);

  const AttributeSchema& schema() const noexcept { return schema_; }
  std::size_t dimension() const noexcept { return columns_.size(); }
  const std::vector<ColumnInfo>& columns() const noexcept { return columns_; }
  const AttributeBlock& block(std::size_t attribute) const { return blocks_.at(attribute); }
  const std::vector<NumericRange>& ranges() const noexcept { return ranges_; }

  /// (x - min) / (max - min) clamped to [0, 1]; constant ranges map to 0.
  double scale(std::size_t attribute, double x) const;
  /// Inverse of scale() for display purposes.
  double unscale(std::size_t attribute, double scaled) const;

  void encode_into(const Record& record, std::span<double> out) const;
  std::vector<double> encode(const Record& record) const;

  /// Attribute-level view of an encoded row: nominal attributes yield their
  /// active value index, numeric attributes their scaled value.
  double attribute_value(std::span<const double> row, std::size_t attribute) const;
  std::size_t active_value(std::span<const double> row, std::size_t attribute) const;

  bool operator==(const Encoding& other) const {
    return schema_ == other.schema_ && ranges_ == other.ranges_;
  }

 private:
  AttributeSchema schema_;
  std::vector<NumericRange> ranges_;
  std::vector<ColumnInfo> columns_;
  std::vector<AttributeBlock> blocks_;
};

/// Examples encoded into [0,1]^d, with class labels.
class EncodedDataset {
 public:
  EncodedDataset(std::shared_ptr<const Encoding> encoding, std::vector<double> features,
                 std::vector<std::size_t> labels, std::vector<std::size_t> row_ids);

  const Encoding& encoding() const noexcept { return *encoding_; }
  std::shared_ptr<const Encoding> encoding_ptr() const noexcept { return encoding_; }
  const AttributeSchema& schema() const noexcept { return encoding_->schema(); }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t dimension() const noexcept { return encoding_->dimension(); }
  std::size_t class_count() const noexcept { return schema().class_count(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * dimension(), dimension()};
  }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  /// Index of the example in the dataset it was derived from.
  std::size_t row_id(std::size_t i) const { return row_ids_[i]; }
  const std::vector<std::size_t>& row_ids() const noexcept { return row_ids_; }

  /// Cached Encoding::attribute_value for example i.
  double attribute_value(std::size_t i, std::size_t attribute) const {
    return attribute_values_[i * schema().attribute_count() + attribute];
  }

  std::vector<std::size_t> class_counts() const;
  EncodedDataset subset(std::span<const std::size_t> indices) const;

 private:
  std::shared_ptr<const Encoding> encoding_;
  std::vector<double> features_;
  std::vector<std::size_t> labels_;
  std::vector<std::size_t> row_ids_;
  std::vector<double> attribute_values_;
};

/// Encodes raw rows. Numeric ranges come from `ranges_from` when given
/// (test-set encoding) and from `raw` itself otherwise.
EncodedDataset encode(const RawDataset& raw, const RawDataset* ranges_from = nullptr);
EncodedDataset encode(const RawDataset& raw, std::shared_ptr<const Encoding> encoding);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-class shuffled split; both index lists are returned in ascending order.
SplitIndices stratified_split_indices(std::span<const std::size_t> labels,
                                      std::size_t class_count, double test_fraction,
                                      std::uint64_t seed);

std::pair<EncodedDataset, EncodedDataset> stratified_split(const EncodedDataset& data,
                                                           double test_fraction,
                                                           std::uint64_t seed);

}  // namespace rulemine

#endif
