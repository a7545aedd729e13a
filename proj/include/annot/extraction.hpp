#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "annot/corpus.hpp"
#include "annot/descriptors.hpp"
#include "annot/errors.hpp"
#include "annot/feature.hpp"
#include "annot/feature_table.hpp"
#include "annot/image_io.hpp"

namespace annot {

inline FeatureVector extract_feature(const RasterImage& img, DescriptorKind kind,
                                     const EhdParams& params = {}) {
  switch (kind) {
    case DescriptorKind::Ehd: return extract_ehd(img, params);
    case DescriptorKind::Scd: return extract_scd(img);
    case DescriptorKind::CldRaw: return extract_cld_raw(img);
    case DescriptorKind::CldReduced:
      throw Error("reduced color layout comes from projecting CLD_RAW, not extraction");
  }
  throw Error("unknown descriptor kind");
}

struct ExtractionResult {
  FeatureTable table;                  // one row per successfully processed entry
  std::vector<double> row_seconds;     // wall time per row, aligned with table.rows
  std::vector<SkippedFile> failures;   // entries that decoded at scan time but failed here
};

/// Extract one descriptor for every corpus entry, in index order, recording
/// per-image wall time. Per-file failures are collected, not fatal.
inline ExtractionResult extract_corpus_features(const std::filesystem::path& root,
                                                const CorpusIndex& index,
                                                DescriptorKind kind,
                                                const EhdParams& params = {}) {
  using clock = std::chrono::steady_clock;
  ExtractionResult result;
  result.table.kind = kind;
  for (const CorpusEntry& entry : index.entries) {
    try {
      const auto start = clock::now();
      const RasterImage img = load_image(root / entry.rel_path);
      FeatureVector fv = extract_feature(img, kind, params);
      const std::chrono::duration<double> elapsed = clock::now() - start;
      result.table.rows.push_back({entry.rel_path, entry.label, std::move(fv.values)});
      result.row_seconds.push_back(elapsed.count());
    } catch (const Error& e) {
      result.failures.push_back({entry.rel_path, e.what()});
    }
  }
  return result;
}

}  // namespace annot
