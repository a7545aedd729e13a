#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "annot/corpus.hpp"
#include "annot/dataset.hpp"
#include "annot/decision_tree.hpp"
#include "annot/descriptors.hpp"
#include "annot/errors.hpp"
#include "annot/extraction.hpp"
#include "annot/feature_table.hpp"
#include "annot/model_io.hpp"
#include "annot/naive_bayes.hpp"
#include "annot/pca.hpp"

namespace annot {

inline double accuracy(std::size_t correct, std::size_t total) {
  if (total == 0) throw EmptyDataset("accuracy of zero annotated images");
  return static_cast<double>(correct) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Shared training/prediction pipeline
// ---------------------------------------------------------------------------

struct TrainedModel {
  std::optional<PcaModel> pca;
  std::optional<NbModel> nb;
  std::unique_ptr<TreeNode> tree;
};

/// Fit the requested classifier; when reduce_to is set, PCA is fitted on the
/// same training data first and the classifier sees the projected vectors.
inline TrainedModel train_on(const LabeledDataset& data, const std::string& classifier,
                             std::optional<int> reduce_to = std::nullopt) {
  TrainedModel tm;
  const LabeledDataset* fit_data = &data;
  LabeledDataset reduced;
  if (reduce_to) {
    tm.pca = fit_pca(data.features, *reduce_to);
    reduced.class_names = data.class_names;
    reduced.labels = data.labels;
    reduced.features.reserve(data.size());
    for (const auto& f : data.features) reduced.features.push_back(project(*tm.pca, f));
    fit_data = &reduced;
  }
  if (classifier == "nb") {
    tm.nb = fit_nb(*fit_data);
  } else if (classifier == "c45") {
    tm.tree = fit_c45(*fit_data);
  } else {
    throw FormatError("unknown classifier '" + classifier + "' (use nb or c45)");
  }
  return tm;
}

inline int predict_label(const TrainedModel& tm, const std::vector<double>& x) {
  if (tm.pca) return tm.nb ? nb_predict(*tm.nb, project(*tm.pca, x))
                           : tree_predict(*tm.tree, project(*tm.pca, x));
  return tm.nb ? nb_predict(*tm.nb, x) : tree_predict(*tm.tree, x);
}

struct Prediction {
  int label = 0;
  double confidence = 0.0;  // max posterior (nb) or leaf purity (c45), in [0,1]
};

inline Prediction predict_full(const TrainedModel& tm, const std::vector<double>& x) {
  const std::vector<double>* v = &x;
  std::vector<double> projected;
  if (tm.pca) {
    projected = project(*tm.pca, x);
    v = &projected;
  }
  if (tm.nb) {
    const int label = nb_predict(*tm.nb, *v);
    return {label, nb_posterior(*tm.nb, *v)[label]};
  }
  const TreeNode& leaf = tree_leaf(*tm.tree, *v);
  return {leaf.label, leaf.purity};
}

// ---------------------------------------------------------------------------
// Evaluation run
// ---------------------------------------------------------------------------

struct DescriptorChoice {
  std::string token;  // CLI name
  DescriptorKind kind;
  std::optional<int> reduce_to;  // projection applied after extraction
};

inline DescriptorChoice parse_descriptor_token(const std::string& token) {
  if (token == "ehd") return {token, DescriptorKind::Ehd, std::nullopt};
  if (token == "scd") return {token, DescriptorKind::Scd, std::nullopt};
  if (token == "cld") return {token, DescriptorKind::CldRaw, 64};
  throw FormatError("unknown descriptor '" + token + "' (use ehd, scd or cld)");
}

struct EvalOptions {
  std::filesystem::path corpus;
  std::vector<std::string> descriptors;  // ehd/scd/cld
  std::vector<std::string> classifiers;  // nb/c45
  int phases = 10;
  std::uint64_t seed = 0;
  SplitSpec split = SplitSpec::of_fraction(0.9);
  EhdParams ehd;
};

struct PairResult {
  std::string descriptor;
  std::string classifier;
  std::vector<double> accuracy_per_phase;
  std::vector<double> predict_seconds_per_phase;   // annotation only
  std::vector<double> extract_seconds_per_phase;   // feature extraction, test rows
  std::vector<double> train_seconds_per_phase;     // projection fit + classifier fit
  std::vector<double> total_seconds_per_phase;     // extract + predict
  std::vector<double> first_class_fraction_per_phase;  // nb degeneracy diagnostic
  double mean_accuracy = 0.0;
  double accuracy_stddev = 0.0;
  double mean_predict_seconds = 0.0;
  double mean_total_seconds = 0.0;
  double mean_train_plus_predict_seconds = 0.0;
};

struct RunReport {
  Json config;
  std::vector<PairResult> pairs;
  std::vector<SkippedFile> skipped;
  bool failed = false;
  std::string failure;
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

inline double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace detail

/// Run the full protocol: scan, extract every selected descriptor once,
/// re-split per phase, train every (descriptor, classifier) pair on the
/// train rows and annotate the test rows. `report` is filled in as work
/// completes so a thrown error still leaves the finished part behind.
inline void evaluate_corpus(const EvalOptions& options, RunReport& report) {
  using clock = std::chrono::steady_clock;
  if (options.descriptors.empty()) throw FormatError("no descriptors selected");
  if (options.classifiers.empty()) throw FormatError("no classifiers selected");

  report.config = Json{{"corpus", options.corpus.string()},
                       {"descriptors", options.descriptors},
                       {"classifiers", options.classifiers},
                       {"phases", options.phases},
                       {"seed", options.seed},
                       {"train_fraction", options.split.by_counts() ? Json() : Json(options.split.fraction)},
                       {"train_counts", options.split.by_counts() ? Json(options.split.counts) : Json()},
                       {"edge_threshold", options.ehd.edge_threshold},
                       {"target_block_count", options.ehd.target_block_count}};

  std::vector<DescriptorChoice> choices;
  for (const std::string& token : options.descriptors) {
    choices.push_back(parse_descriptor_token(token));
  }
  for (const std::string& c : options.classifiers) {
    if (c != "nb" && c != "c45") {
      throw FormatError("unknown classifier '" + c + "' (use nb or c45)");
    }
  }

  CorpusScan scan = scan_corpus(options.corpus);
  report.skipped = scan.skipped;

  // one extraction pass per descriptor, rows keyed by relative path
  struct Extracted {
    std::map<std::string, std::size_t> row_of;
    ExtractionResult result;
  };
  std::vector<Extracted> extracted;
  for (const DescriptorChoice& choice : choices) {
    Extracted e;
    e.result = extract_corpus_features(options.corpus, scan.index, choice.kind, options.ehd);
    for (std::size_t i = 0; i < e.result.table.rows.size(); ++i) {
      e.row_of[e.result.table.rows[i].path] = i;
    }
    for (const SkippedFile& f : e.result.failures) report.skipped.push_back(f);
    extracted.push_back(std::move(e));
  }

  // keep only entries every selected descriptor managed to featurize
  CorpusIndex usable;
  usable.classes = scan.index.classes;
  for (const CorpusEntry& entry : scan.index.entries) {
    bool everywhere = true;
    for (const Extracted& e : extracted) {
      if (!e.row_of.count(entry.rel_path)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) usable.entries.push_back(entry);
  }
  if (usable.entries.empty()) throw EmptyCorpus("no image survived feature extraction");

  usable = make_splits(std::move(usable), options.split, options.phases, options.seed);

  for (std::size_t d = 0; d < choices.size(); ++d) {
    const DescriptorChoice& choice = choices[d];
    const Extracted& ex = extracted[d];

    for (const std::string& classifier : options.classifiers) {
      PairResult pair;
      pair.descriptor = choice.token;
      pair.classifier = classifier;

      for (int phase = 0; phase < options.phases; ++phase) {
        const std::vector<SplitTag>& tags = usable.splits[phase];

        LabeledDataset train;
        train.class_names = usable.classes;
        std::vector<const FeatureTable::Row*> test_rows;
        double extract_seconds = 0.0;
        for (std::size_t i = 0; i < usable.entries.size(); ++i) {
          const std::size_t row = ex.row_of.at(usable.entries[i].rel_path);
          if (tags[i] == SplitTag::Train) {
            train.features.push_back(ex.result.table.rows[row].values);
            train.labels.push_back(usable.entries[i].label);
          } else {
            test_rows.push_back(&ex.result.table.rows[row]);
            extract_seconds += ex.result.row_seconds[row];
          }
        }
        if (test_rows.empty()) {
          throw DegenerateInput("phase " + std::to_string(phase) + " has no test images");
        }

        const auto t0 = clock::now();
        const TrainedModel tm = train_on(train, classifier, choice.reduce_to);
        const auto t1 = clock::now();

        std::size_t correct = 0;
        std::size_t first_class = 0;
        for (const FeatureTable::Row* row : test_rows) {
          const int label = predict_label(tm, row->values);
          correct += (label == row->label);
          first_class += (label == 0);
        }
        const auto t2 = clock::now();

        const double train_seconds = std::chrono::duration<double>(t1 - t0).count();
        const double predict_seconds = std::chrono::duration<double>(t2 - t1).count();
        pair.accuracy_per_phase.push_back(accuracy(correct, test_rows.size()));
        pair.train_seconds_per_phase.push_back(train_seconds);
        pair.predict_seconds_per_phase.push_back(predict_seconds);
        pair.extract_seconds_per_phase.push_back(extract_seconds);
        pair.total_seconds_per_phase.push_back(extract_seconds + predict_seconds);
        if (classifier == "nb") {
          pair.first_class_fraction_per_phase.push_back(
              static_cast<double>(first_class) / test_rows.size());
        }
      }

      pair.mean_accuracy = detail::mean_of(pair.accuracy_per_phase);
      pair.accuracy_stddev = detail::sample_stddev(pair.accuracy_per_phase);
      pair.mean_predict_seconds = detail::mean_of(pair.predict_seconds_per_phase);
      pair.mean_total_seconds = detail::mean_of(pair.total_seconds_per_phase);
      double tp = 0.0;
      for (std::size_t i = 0; i < pair.predict_seconds_per_phase.size(); ++i) {
        tp += pair.train_seconds_per_phase[i] + pair.predict_seconds_per_phase[i];
      }
      pair.mean_train_plus_predict_seconds =
          pair.predict_seconds_per_phase.empty()
              ? 0.0
              : tp / pair.predict_seconds_per_phase.size();
      report.pairs.push_back(std::move(pair));
    }
  }
}

inline Json report_to_json(const RunReport& report) {
  Json pairs = Json::object();
  for (const PairResult& pair : report.pairs) {
    Json p{{"accuracy_per_phase", pair.accuracy_per_phase},
           {"mean_accuracy", pair.mean_accuracy},
           {"accuracy_stddev", pair.accuracy_stddev},
           {"predict_seconds_per_phase", pair.predict_seconds_per_phase},
           {"extract_seconds_per_phase", pair.extract_seconds_per_phase},
           {"train_seconds_per_phase", pair.train_seconds_per_phase},
           {"total_seconds_per_phase", pair.total_seconds_per_phase},
           {"mean_predict_seconds", pair.mean_predict_seconds},
           {"mean_total_seconds", pair.mean_total_seconds},
           {"mean_train_plus_predict_seconds", pair.mean_train_plus_predict_seconds}};
    if (!pair.first_class_fraction_per_phase.empty()) {
      p["first_class_fraction_per_phase"] = pair.first_class_fraction_per_phase;
      p["mean_first_class_fraction"] = detail::mean_of(pair.first_class_fraction_per_phase);
    }
    pairs[pair.descriptor + "/" + pair.classifier] = std::move(p);
  }

  Json skipped = Json::array();
  for (const SkippedFile& f : report.skipped) {
    skipped.push_back(Json{{"path", f.rel_path}, {"reason", f.reason}});
  }

  Json j{{"config", report.config}, {"pairs", std::move(pairs)},
         {"skipped_files", std::move(skipped)}};
  if (report.failed) j["failure"] = report.failure;
  return j;
}

/// Plain-text rendering of the same numbers the JSON carries.
inline std::string render_report_table(const RunReport& report) {
  char buf[256];
  std::string out;
  out += "pair         mean_acc  acc_sd    predict_s  train+pred_s  total_s\n";
  for (const PairResult& pair : report.pairs) {
    const std::string name = pair.descriptor + "/" + pair.classifier;
    std::snprintf(buf, sizeof(buf), "%-12s %-9.4f %-9.4f %-10.4f %-13.4f %-8.4f\n",
                  name.c_str(), pair.mean_accuracy, pair.accuracy_stddev,
                  pair.mean_predict_seconds, pair.mean_train_plus_predict_seconds,
                  pair.mean_total_seconds);
    out += buf;
    if (!pair.first_class_fraction_per_phase.empty()) {
      std::snprintf(buf, sizeof(buf), "%12s mean first-class fraction %.4f\n", "",
                    detail::mean_of(pair.first_class_fraction_per_phase));
      out += buf;
    }
  }
  if (!report.skipped.empty()) {
    out += "skipped files: " + std::to_string(report.skipped.size()) + "\n";
  }
  if (report.failed) out += "RUN FAILED: " + report.failure + "\n";
  return out;
}

}  // namespace annot
