#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "annot/errors.hpp"
#include "annot/image_io.hpp"

namespace annot {

struct CorpusEntry {
  std::string rel_path;  // "<class>/<file>", '/' separators
  int label = 0;
};

enum class SplitTag : std::uint8_t { Train, Test };

struct CorpusIndex {
  std::vector<std::string> classes;  // lexicographic folder order
  std::vector<CorpusEntry> entries;  // sorted by (class, filename)
  std::vector<std::vector<SplitTag>> splits;  // [phase][entry]
};

struct SkippedFile {
  std::string rel_path;
  std::string reason;
};

struct CorpusScan {
  CorpusIndex index;
  std::vector<SkippedFile> skipped;
};

/// Walk a directory-per-class corpus. Every regular file is probed by
/// actually decoding it; files that fail (or are smaller than 8x8) land in
/// the skipped list instead of the index. Classes whose files all fail are
/// dropped entirely.
inline CorpusScan scan_corpus(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::exists(root) || !fs::is_directory(root)) {
    throw EmptyCorpus("corpus root is not a directory: " + root.string());
  }

  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  if (class_dirs.size() < 2) {
    throw TooFewClasses("need at least 2 class folders, found " +
                        std::to_string(class_dirs.size()));
  }

  CorpusScan scan;
  for (const fs::path& dir : class_dirs) {
    const std::string class_name = dir.filename().string();
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path().filename().string());
    }
    std::sort(files.begin(), files.end());

    bool any = false;
    for (const std::string& file : files) {
      const std::string rel = class_name + "/" + file;
      try {
        const RasterImage img = load_image(dir / file);
        if (img.width < 8 || img.height < 8) {
          scan.skipped.push_back({rel, "smaller than 8x8"});
          continue;
        }
      } catch (const DecodeError& e) {
        scan.skipped.push_back({rel, e.what()});
        continue;
      } catch (const IoError& e) {
        scan.skipped.push_back({rel, e.what()});
        continue;
      }
      if (!any) {
        scan.index.classes.push_back(class_name);
        any = true;
      }
      scan.index.entries.push_back(
          {rel, static_cast<int>(scan.index.classes.size()) - 1});
    }
  }

  if (scan.index.entries.empty()) throw EmptyCorpus("no decodable images under " + root.string());
  if (scan.index.classes.size() < 2) {
    throw TooFewClasses("need at least 2 classes with decodable images, found " +
                        std::to_string(scan.index.classes.size()));
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Deterministic splits
// ---------------------------------------------------------------------------

struct SplitSpec {
  double fraction = -1.0;   // train fraction, used when counts is empty
  std::vector<int> counts;  // per-class train counts, in class order

  bool by_counts() const { return !counts.empty(); }

  static SplitSpec of_fraction(double f) { return {f, {}}; }
  static SplitSpec of_counts(std::vector<int> c) { return {-1.0, std::move(c)}; }
};

namespace detail {

// engine-independent uniform draw in [0, n)
inline std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

// Fisher-Yates with explicit draws so results don't depend on the standard
// library's std::shuffle implementation.
template <class T>
inline void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& gen) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_draw(gen, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace detail

/// Assign TRAIN/TEST tags for one phase: each class's items are shuffled by
/// a generator seeded from (seed, phase) and the first train-count go to
/// TRAIN. Identical (labels, spec, phase, seed) give identical tags on any
/// platform.
inline std::vector<SplitTag> split_phase(const std::vector<int>& labels,
                                         std::size_t class_count, const SplitSpec& spec,
                                         int phase, std::uint64_t seed) {
  if (spec.by_counts()) {
    if (spec.counts.size() != class_count) {
      throw FormatError("train-count list has " + std::to_string(spec.counts.size()) +
                        " entries for " + std::to_string(class_count) + " classes");
    }
  } else if (!(spec.fraction > 0.0 && spec.fraction < 1.0)) {
    throw FormatError("train fraction must be in (0,1)");
  }

  std::vector<std::vector<int>> per_class(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    per_class[labels[i]].push_back(static_cast<int>(i));
  }

  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(phase)};
  std::mt19937_64 gen(seq);

  std::vector<SplitTag> tags(labels.size(), SplitTag::Test);
  for (std::size_t c = 0; c < class_count; ++c) {
    auto& items = per_class[c];
    detail::deterministic_shuffle(items, gen);
    const std::size_t train_count =
        spec.by_counts()
            ? static_cast<std::size_t>(spec.counts[c])
            : static_cast<std::size_t>(spec.fraction * items.size());
    if (train_count > items.size()) {
      throw SplitTooLarge("class " + std::to_string(c) + " has " +
                          std::to_string(items.size()) + " items, train count " +
                          std::to_string(train_count) + " requested");
    }
    for (std::size_t i = 0; i < train_count; ++i) tags[items[i]] = SplitTag::Train;
  }
  return tags;
}

inline CorpusIndex make_splits(CorpusIndex index, const SplitSpec& spec, int phases,
                               std::uint64_t seed) {
  if (phases < 1) throw FormatError("phase count must be at least 1");
  std::vector<int> labels;
  labels.reserve(index.entries.size());
  for (const CorpusEntry& e : index.entries) labels.push_back(e.label);

  index.splits.clear();
  index.splits.reserve(phases);
  for (int p = 0; p < phases; ++p) {
    index.splits.push_back(split_phase(labels, index.classes.size(), spec, p, seed));
  }
  return index;
}

}  // namespace annot
