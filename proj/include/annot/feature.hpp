#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "annot/errors.hpp"

namespace annot {

enum class DescriptorKind { Ehd, Scd, CldRaw, CldReduced };

inline std::size_t dimension_of(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::Ehd: return 80;
    case DescriptorKind::Scd: return 256;
    case DescriptorKind::CldRaw: return 192;
    case DescriptorKind::CldReduced: return 64;
  }
  throw Error("unknown descriptor kind");
}

inline std::string kind_name(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::Ehd: return "EHD";
    case DescriptorKind::Scd: return "SCD";
    case DescriptorKind::CldRaw: return "CLD_RAW";
    case DescriptorKind::CldReduced: return "CLD_REDUCED";
  }
  throw Error("unknown descriptor kind");
}

inline DescriptorKind parse_kind(const std::string& name) {
  if (name == "EHD") return DescriptorKind::Ehd;
  if (name == "SCD") return DescriptorKind::Scd;
  if (name == "CLD_RAW") return DescriptorKind::CldRaw;
  if (name == "CLD_REDUCED") return DescriptorKind::CldReduced;
  throw FormatError("unknown descriptor name: " + name);
}

struct FeatureVector {
  DescriptorKind kind;
  std::vector<double> values;
};

}  // namespace annot
