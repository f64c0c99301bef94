#include "rulemine/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>

#include "rulemine/csv.hpp"
#include "rulemine/errors.hpp"
#include "rulemine/random.hpp"

namespace rulemine {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

const nlohmann::json& require_key(const nlohmann::json& doc, const char* key,
                                  const char* where) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw SchemaError(std::string("schema ") + where + " is missing key \"" + key + "\"");
  }
  return doc.at(key);
}

std::vector<std::string> string_list(const nlohmann::json& node, const std::string& what) {
  if (!node.is_array()) throw SchemaError(what + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) throw SchemaError(what + " must be a list of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::optional<std::size_t> Attribute::value_index(std::string_view value) const {
  const auto it = std::find(values.begin(), values.end(), value);
  if (it == values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes, std::string class_attribute,
                                 std::vector<std::string> class_labels)
    : attributes_(std::move(attributes)),
      class_attribute_(std::move(class_attribute)),
      class_labels_(std::move(class_labels)) {
  if (attributes_.empty()) throw SchemaError("schema declares no predictor attributes");
  std::set<std::string> names;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw SchemaError("attribute with empty name");
    if (!names.insert(a.name).second) throw SchemaError("duplicate attribute \"" + a.name + "\"");
    if (a.is_nominal()) {
      if (a.values.size() < 2) {
        throw SchemaError("nominal attribute \"" + a.name + "\" needs at least 2 values");
      }
      if (std::set<std::string>(a.values.begin(), a.values.end()).size() != a.values.size()) {
        throw SchemaError("nominal attribute \"" + a.name + "\" repeats a value");
      }
    } else if (!a.values.empty()) {
      throw SchemaError("numeric attribute \"" + a.name + "\" must not declare values");
    }
  }
  if (class_attribute_.empty()) throw SchemaError("class_attribute is empty");
  if (names.contains(class_attribute_)) {
    throw SchemaError("class attribute \"" + class_attribute_ + "\" is also a predictor");
  }
  if (class_labels_.size() < 2) throw SchemaError("class_labels needs at least 2 entries");
  if (std::set<std::string>(class_labels_.begin(), class_labels_.end()).size() !=
      class_labels_.size()) {
    throw SchemaError("class_labels repeats a label");
  }
}

AttributeSchema AttributeSchema::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("schema document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "attributes" && key != "class_attribute" && key != "class_labels") {
      throw SchemaError("schema has unexpected key \"" + key + "\"");
    }
  }
  const auto& attrs = require_key(doc, "attributes", "document");
  const auto& cls = require_key(doc, "class_attribute", "document");
  const auto& labels = require_key(doc, "class_labels", "document");
  if (!attrs.is_array()) throw SchemaError("\"attributes\" must be a list");
  if (!cls.is_string()) throw SchemaError("\"class_attribute\" must be a string");

  std::vector<Attribute> attributes;
  for (const auto& node : attrs) {
    const auto& name = require_key(node, "name", "attribute");
    const auto& kind = require_key(node, "kind", "attribute");
    if (!name.is_string() || !kind.is_string()) {
      throw SchemaError("attribute \"name\" and \"kind\" must be strings");
    }
    for (const auto& [key, _] : node.items()) {
      if (key != "name" && key != "kind" && key != "values") {
        throw SchemaError("attribute has unexpected key \"" + key + "\"");
      }
    }
    Attribute a;
    a.name = name.get<std::string>();
    const auto k = kind.get<std::string>();
    if (k == "nominal") {
      a.kind = AttributeKind::nominal;
      a.values = string_list(require_key(node, "values", "nominal attribute"),
                             "\"values\" of " + a.name);
    } else if (k == "numeric") {
      a.kind = AttributeKind::numeric;
      if (node.contains("values")) a.values = string_list(node.at("values"), a.name);
    } else {
      throw SchemaError("attribute \"" + a.name + "\" has unknown kind \"" + k + "\"");
    }
    attributes.push_back(std::move(a));
  }
  return AttributeSchema(std::move(attributes), cls.get<std::string>(),
                         string_list(labels, "\"class_labels\""));
}

nlohmann::json AttributeSchema::to_json() const {
  nlohmann::ordered_json attrs = nlohmann::ordered_json::array();
  for (const auto& a : attributes_) {
    nlohmann::ordered_json node;
    node["name"] = a.name;
    node["kind"] = a.is_nominal() ? "nominal" : "numeric";
    if (a.is_nominal()) node["values"] = a.values;
    attrs.push_back(node);
  }
  nlohmann::ordered_json doc;
  doc["attributes"] = attrs;
  doc["class_attribute"] = class_attribute_;
  doc["class_labels"] = class_labels_;
  return doc;
}

std::optional<std::size_t> AttributeSchema::attribute_index(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> AttributeSchema::class_index(std::string_view label) const {
  const auto it = std::find(class_labels_.begin(), class_labels_.end(), label);
  if (it == class_labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - class_labels_.begin());
}

RawDataset RawDataset::subset(std::span<const std::size_t> indices) const {
  RawDataset out{schema, {}, {}};
  out.rows.reserve(indices.size());
  for (auto i : indices) {
    out.rows.push_back(rows.at(i));
    if (labeled()) out.labels.push_back(labels[i]);
  }
  return out;
}

Value parse_value(const Attribute& attribute, std::string_view cell, std::size_t row) {
  const auto text = trim(cell);
  if (text.empty()) {
    throw ValueError(row, "missing value for \"" + attribute.name + "\"");
  }
  if (attribute.is_nominal()) {
    if (auto idx = attribute.value_index(text)) return *idx;
    throw ValueError(row, "value \"" + std::string(text) + "\" not declared for \"" +
                              attribute.name + "\"");
  }
  double x = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    throw ValueError(row, "cannot parse \"" + std::string(text) + "\" as a number for \"" +
                              attribute.name + "\"");
  }
  return x;
}

RawDataset parse_csv(std::istream& source, const AttributeSchema& schema, ParseOptions options) {
  const auto table = csv::read(source);

  // Map each schema attribute to its CSV column.
  std::vector<std::size_t> column_of(schema.attribute_count(), SIZE_MAX);
  std::optional<std::size_t> class_column;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto name = std::string(trim(table.header[c]));
    if (name == schema.class_attribute()) {
      if (class_column) throw SchemaError("duplicate column \"" + name + "\"");
      class_column = c;
    } else if (auto a = schema.attribute_index(name)) {
      if (column_of[*a] != SIZE_MAX) throw SchemaError("duplicate column \"" + name + "\"");
      column_of[*a] = c;
    } else {
      throw SchemaError("unexpected column \"" + name + "\"");
    }
  }
  for (std::size_t a = 0; a < column_of.size(); ++a) {
    if (column_of[a] == SIZE_MAX) {
      throw SchemaError("missing column \"" + schema.attribute(a).name + "\"");
    }
  }
  if (options.require_class && !class_column) {
    throw SchemaError("missing class column \"" + schema.class_attribute() + "\"");
  }

  RawDataset raw{schema, {}, {}};
  raw.rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    const std::size_t row_number = r + 1;
    if (fields.size() != table.header.size()) {
      throw ValueError(row_number, "expected " + std::to_string(table.header.size()) +
                                       " fields, found " + std::to_string(fields.size()));
    }
    Record record;
    record.reserve(schema.attribute_count());
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
      record.push_back(parse_value(schema.attribute(a), fields[column_of[a]], row_number));
    }
    raw.rows.push_back(std::move(record));
    if (options.require_class) {
      const auto label = trim(fields[*class_column]);
      const auto idx = schema.class_index(label);
      if (!idx) {
        throw ValueError(row_number, "class label \"" + std::string(label) + "\" not declared");
      }
      raw.labels.push_back(*idx);
    }
  }
  return raw;
}

Encoding::Encoding(AttributeSchema schema, std::vector<NumericRange> ranges)
    : schema_(std::move(schema)), ranges_(std::move(ranges)) {
  if (ranges_.size() != schema_.attribute_count()) {
    throw SchemaError("numeric range table does not match the schema");
  }
  for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
    const auto& attr = schema_.attribute(a);
    AttributeBlock block{columns_.size(), attr.is_nominal() ? attr.values.size() : 1};
    if (attr.is_nominal()) {
      for (std::size_t v = 0; v < attr.values.size(); ++v) columns_.push_back({a, v});
    } else {
      columns_.push_back({a, std::nullopt});
    }
    blocks_.push_back(block);
  }
}

Encoding Encoding::fit(const RawDataset& raw) {
  std::vector<NumericRange> ranges(raw.schema.attribute_count());
  for (std::size_t a = 0; a < raw.schema.attribute_count(); ++a) {
    if (raw.schema.attribute(a).is_nominal() || raw.rows.empty()) continue;
    double lo = std::get<double>(raw.rows.front()[a]);
    double hi = lo;
    for (const auto& row : raw.rows) {
      const double x = std::get<double>(row[a]);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    ranges[a] = {lo, hi};
  }
  return Encoding(raw.schema, std::move(ranges));
}

double Encoding::scale(std::size_t attribute, double x) const {
  const auto& r = ranges_[attribute];
  if (!(r.max > r.min)) return 0.0;
  return std::clamp((x - r.min) / (r.max - r.min), 0.0, 1.0);
}

double Encoding::unscale(std::size_t attribute, double scaled) const {
  const auto& r = ranges_[attribute];
  return r.min + scaled * (r.max - r.min);
}

void Encoding::encode_into(const Record& record, std::span<double> out) const {
  if (record.size() != schema_.attribute_count() || out.size() != dimension()) {
    throw SchemaError("record does not match the encoding layout");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t a = 0; a < record.size(); ++a) {
    const auto& b = blocks_[a];
    if (schema_.attribute(a).is_nominal()) {
      const auto v = std::get<std::size_t>(record[a]);
      out[b.first_column + v] = 1.0;
    } else {
      out[b.first_column] = scale(a, std::get<double>(record[a]));
    }
  }
}

std::vector<double> Encoding::encode(const Record& record) const {
  std::vector<double> out(dimension());
  encode_into(record, out);
  return out;
}

std::size_t Encoding::active_value(std::span<const double> row, std::size_t attribute) const {
  const auto& b = blocks_.at(attribute);
  std::size_t best = 0;
  for (std::size_t v = 1; v < b.width; ++v) {
    if (row[b.first_column + v] > row[b.first_column + best]) best = v;
  }
  return best;
}

double Encoding::attribute_value(std::span<const double> row, std::size_t attribute) const {
  if (schema_.attribute(attribute).is_nominal()) {
    return static_cast<double>(active_value(row, attribute));
  }
  return row[blocks_.at(attribute).first_column];
}

EncodedDataset::EncodedDataset(std::shared_ptr<const Encoding> encoding,
                               std::vector<double> features, std::vector<std::size_t> labels,
                               std::vector<std::size_t> row_ids)
    : encoding_(std::move(encoding)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      row_ids_(std::move(row_ids)) {
  const std::size_t n = labels_.size();
  if (features_.size() != n * encoding_->dimension() || row_ids_.size() != n) {
    throw DataError("encoded dataset arrays have inconsistent sizes");
  }
  const std::size_t m = schema().attribute_count();
  attribute_values_.resize(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      attribute_values_[i * m + a] = encoding_->attribute_value(row(i), a);
    }
  }
}

std::vector<std::size_t> EncodedDataset::class_counts() const {
  std::vector<std::size_t> counts(class_count(), 0);
  for (auto l : labels_) ++counts[l];
  return counts;
}

EncodedDataset EncodedDataset::subset(std::span<const std::size_t> indices) const {
  const std::size_t d = dimension();
  std::vector<double> features;
  features.reserve(indices.size() * d);
  std::vector<std::size_t> labels;
  std::vector<std::size_t> ids;
  labels.reserve(indices.size());
  ids.reserve(indices.size());
  for (auto i : indices) {
    const auto r = row(i);
    features.insert(features.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
    ids.push_back(row_ids_[i]);
  }
  return EncodedDataset(encoding_, std::move(features), std::move(labels), std::move(ids));
}

EncodedDataset encode(const RawDataset& raw, std::shared_ptr<const Encoding> encoding) {
  if (!raw.labeled()) throw DataError("encoding requires a class label for every row");
  const std::size_t d = encoding->dimension();
  std::vector<double> features(raw.size() * d);
  std::vector<std::size_t> ids(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    encoding->encode_into(raw.rows[i], std::span<double>(features.data() + i * d, d));
    ids[i] = i;
  }
  return EncodedDataset(std::move(encoding), std::move(features), raw.labels, std::move(ids));
}

EncodedDataset encode(const RawDataset& raw, const RawDataset* ranges_from) {
  auto encoding = std::make_shared<const Encoding>(Encoding::fit(ranges_from ? *ranges_from : raw));
  return encode(raw, std::move(encoding));
}

SplitIndices stratified_split_indices(std::span<const std::size_t> labels,
                                      std::size_t class_count, double test_fraction,
                                      std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw SplitError("test fraction must lie strictly between 0 and 1");
  }
  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class.at(labels[i]).push_back(i);

  Rng rng(seed);
  SplitIndices out;
  for (std::size_t c = 0; c < class_count; ++c) {
    auto& members = by_class[c];
    if (members.empty()) continue;
    if (members.size() < 2) {
      throw SplitError("class " + std::to_string(c) + " has fewer than 2 examples");
    }
    const auto n = members.size();
    auto take = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    take = std::clamp<std::size_t>(take, 1, n - 1);
    rng.shuffle(members.begin(), members.end());
    out.test.insert(out.test.end(), members.begin(), members.begin() + take);
    out.train.insert(out.train.end(), members.begin() + take, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<EncodedDataset, EncodedDataset> stratified_split(const EncodedDataset& data,
                                                           double test_fraction,
                                                           std::uint64_t seed) {
  const auto split =
      stratified_split_indices(data.labels(), data.class_count(), test_fraction, seed);
  return {data.subset(split.train), data.subset(split.test)};
}

}  // namespace rulemine
