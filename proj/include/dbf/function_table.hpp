#ifndef DBF_FUNCTION_TABLE_HPP
#define DBF_FUNCTION_TABLE_HPP

// A function GF(q^n)* -> GF(q) stored as a value list indexed by discrete log:
// entry i is f(theta^i), kept as a compact subfield index in [0, q).

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "dbf/field.hpp"

namespace dbf {

class FunctionTable {
 public:
  FunctionTable(std::shared_ptr<const FieldSpec> spec, std::vector<uint16_t> value_indices)
      : spec_(std::move(spec)), values_(std::move(value_indices)) {
    if (!spec_) throw std::invalid_argument("FunctionTable requires a field spec");
    if (static_cast<int64_t>(values_.size()) != spec_->order())
      throw std::invalid_argument("value list must have length q^n - 1");
    for (uint16_t v : values_)
      if (v >= spec_->subfield_order())
        throw std::invalid_argument("value index outside GF(q)");
  }

  static FunctionTable from_elements(std::shared_ptr<const FieldSpec> spec,
                                     const std::vector<FieldElement>& values) {
    std::vector<uint16_t> idx;
    idx.reserve(values.size());
    for (const FieldElement& e : values) {
      spec->require_same(e);
      int32_t i = spec->subfield_index_of_log(e.log());
      if (i < 0) throw std::invalid_argument("function value outside GF(q)");
      idx.push_back(static_cast<uint16_t>(i));
    }
    return FunctionTable(std::move(spec), std::move(idx));
  }

  const std::shared_ptr<const FieldSpec>& spec_ptr() const { return spec_; }
  const FieldSpec& field() const { return *spec_; }
  int64_t size() const { return static_cast<int64_t>(values_.size()); }

  uint16_t value_index(int64_t i) const { return values_[static_cast<size_t>(i)]; }
  FieldElement value(int64_t i) const {
    return spec_->subfield_element(values_[static_cast<size_t>(i)]);
  }
  const std::vector<uint16_t>& value_indices() const { return values_; }

  friend bool operator==(const FunctionTable& a, const FunctionTable& b) {
    return a.spec_->describes_same_field(*b.spec_) && a.values_ == b.values_;
  }

  nlohmann::json to_json() const {
    nlohmann::json vals = nlohmann::json::array();
    for (uint16_t v : values_) {
      int32_t log = spec_->subfield_log(static_cast<int32_t>(v));
      if (log == kZeroLog)
        vals.push_back(nullptr);
      else
        vals.push_back(log);
    }
    return nlohmann::json{{"field", spec_->to_json()}, {"values", vals}};
  }

  static FunctionTable from_json(const nlohmann::json& j) {
    auto spec = FieldSpec::from_json(j.at("field"));
    const auto& vals = j.at("values");
    std::vector<uint16_t> idx;
    idx.reserve(vals.size());
    for (const auto& v : vals) {
      if (v.is_null()) {
        idx.push_back(0);
      } else {
        int32_t i = spec->subfield_index_of_log(v.get<int32_t>());
        if (i < 0) throw std::invalid_argument("serialized value outside GF(q)");
        idx.push_back(static_cast<uint16_t>(i));
      }
    }
    return FunctionTable(std::move(spec), std::move(idx));
  }

 private:
  std::shared_ptr<const FieldSpec> spec_;
  std::vector<uint16_t> values_;
};

}  // namespace dbf

#endif  // DBF_FUNCTION_TABLE_HPP
