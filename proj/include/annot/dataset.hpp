#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "annot/errors.hpp"

namespace annot {

struct LabeledDataset {
  std::vector<std::vector<double>> features;  // n rows, d columns
  std::vector<int> labels;                    // n values in 0..m-1
  std::vector<std::string> class_names;       // m names

  std::size_t size() const { return features.size(); }
  std::size_t dim() const { return features.empty() ? 0 : features[0].size(); }
  std::size_t class_count() const { return class_names.size(); }

  void validate() const {
    if (features.empty()) throw EmptyDataset("dataset has no rows");
    if (labels.size() != features.size()) {
      throw DimensionMismatch("label count does not match row count");
    }
    const std::size_t d = features[0].size();
    for (const auto& row : features) {
      if (row.size() != d) throw DimensionMismatch("ragged feature rows");
      for (double v : row) {
        if (!std::isfinite(v)) throw DegenerateInput("non-finite feature value");
      }
    }
    for (int label : labels) {
      if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
        throw DegenerateInput("label out of range");
      }
    }
  }
};

}  // namespace annot
