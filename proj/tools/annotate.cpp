// Command-line front end: extract feature tables, train model bundles,
// annotate images, and run the multi-phase evaluation protocol.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annot/annot.hpp"

namespace fs = std::filesystem;
using namespace annot;

namespace {

DescriptorKind extract_kind(const std::string& token) {
  // `cld` writes the raw 192-value rows; the projection is fitted at
  // training time so it never sees test data.
  return parse_descriptor_token(token).kind;
}

std::vector<std::string> class_names_from_rows(const std::vector<FeatureTable::Row>& rows,
                                               std::size_t class_count) {
  std::vector<std::string> names(class_count);
  for (std::size_t c = 0; c < class_count; ++c) names[c] = "class" + std::to_string(c);
  std::vector<bool> seen(class_count, false);
  for (const auto& row : rows) {
    const auto c = static_cast<std::size_t>(row.label);
    if (c >= class_count || seen[c]) continue;
    const std::size_t slash = row.path.find('/');
    if (slash != std::string::npos && slash > 0) {
      names[c] = row.path.substr(0, slash);
      seen[c] = true;
    }
  }
  return names;
}

template <class Fn>
void write_or_remove(const fs::path& path, Fn write) {
  try {
    write();
  } catch (...) {
    std::error_code ec;
    fs::remove(path, ec);
    throw;
  }
}

struct ExtractArgs {
  std::string corpus, descriptor, out;
  EhdParams ehd;
};

int run_extract(const ExtractArgs& args) {
  const DescriptorKind kind = extract_kind(args.descriptor);
  const CorpusScan scan = scan_corpus(args.corpus);
  ExtractionResult extraction =
      extract_corpus_features(args.corpus, scan.index, kind, args.ehd);

  for (const SkippedFile& f : scan.skipped) {
    std::cerr << "skipped " << f.rel_path << ": " << f.reason << "\n";
  }
  for (const SkippedFile& f : extraction.failures) {
    std::cerr << "skipped " << f.rel_path << ": " << f.reason << "\n";
  }
  write_or_remove(args.out, [&] { write_table(extraction.table, args.out); });
  std::cerr << "extracted " << extraction.table.rows.size() << " images ("
            << scan.skipped.size() + extraction.failures.size() << " skipped) -> "
            << args.out << "\n";
  return 0;
}

struct TrainArgs {
  std::vector<std::string> tables;
  std::string classifier, out;
  std::vector<int> train_counts;
  double train_fraction = -1.0;
  int phase = 0;
  std::uint64_t seed = 0;
  EhdParams ehd;
};

int run_train(const TrainArgs& args) {
  FeatureTable merged;
  for (std::size_t i = 0; i < args.tables.size(); ++i) {
    FeatureTable t = read_table(args.tables[i]);
    if (i == 0) {
      merged = std::move(t);
      continue;
    }
    if (t.kind != merged.kind) {
      throw FormatError("cannot merge " + kind_name(t.kind) + " rows into a " +
                        kind_name(merged.kind) + " table");
    }
    for (auto& row : t.rows) merged.rows.push_back(std::move(row));
  }
  if (merged.rows.empty()) throw DegenerateInput("training table has no rows");

  int max_label = 0;
  for (const auto& row : merged.rows) max_label = std::max(max_label, row.label);
  const std::size_t class_count = static_cast<std::size_t>(max_label) + 1;
  if (class_count < 2) throw DegenerateInput("training table has a single class");

  const SplitSpec spec = args.train_counts.empty()
                             ? SplitSpec::of_fraction(args.train_fraction)
                             : SplitSpec::of_counts(args.train_counts);
  std::vector<int> labels;
  labels.reserve(merged.rows.size());
  for (const auto& row : merged.rows) labels.push_back(row.label);
  const std::vector<SplitTag> tags =
      split_phase(labels, class_count, spec, args.phase, args.seed);

  LabeledDataset train;
  train.class_names = class_names_from_rows(merged.rows, class_count);
  for (std::size_t i = 0; i < merged.rows.size(); ++i) {
    if (tags[i] != SplitTag::Train) continue;
    train.features.push_back(merged.rows[i].values);
    train.labels.push_back(merged.rows[i].label);
  }

  const bool reduce = merged.kind == DescriptorKind::CldRaw;
  TrainedModel tm = train_on(train, args.classifier,
                             reduce ? std::optional<int>(64) : std::nullopt);

  ModelBundle bundle;
  bundle.kind = reduce ? DescriptorKind::CldReduced : merged.kind;
  bundle.class_names = train.class_names;
  bundle.ehd_params = args.ehd;
  bundle.pca = std::move(tm.pca);
  bundle.classifier = args.classifier;
  bundle.nb = std::move(tm.nb);
  bundle.tree = std::move(tm.tree);
  write_or_remove(args.out, [&] { save_bundle(bundle, args.out); });
  std::cerr << "trained " << args.classifier << " on " << train.features.size()
            << " rows -> " << args.out << "\n";
  return 0;
}

struct PredictArgs {
  std::string model, image, table;
};

int run_predict(const PredictArgs& args) {
  const ModelBundle bundle = load_bundle(args.model);

  auto predict_values = [&](const std::vector<double>& raw, bool apply_projection) {
    const std::vector<double>* v = &raw;
    std::vector<double> projected;
    if (apply_projection && bundle.pca) {
      projected = project(*bundle.pca, raw);
      v = &projected;
    }
    if (bundle.nb) {
      const int label = nb_predict(*bundle.nb, *v);
      return Prediction{label, nb_posterior(*bundle.nb, *v)[label]};
    }
    const TreeNode& leaf = tree_leaf(*bundle.tree, *v);
    return Prediction{leaf.label, leaf.purity};
  };
  auto announce = [&](const std::string& name, const Prediction& p) {
    std::printf("%s,%s,%.2f,%.2f\n", name.c_str(), bundle.class_names[p.label].c_str(),
                p.confidence * 100.0, (1.0 - p.confidence) * 100.0);
  };

  std::printf("path,annotation,confidence_percent,error_percent\n");
  std::size_t annotated = 0;
  if (!args.image.empty()) {
    try {
      const RasterImage img = load_image(args.image);
      const DescriptorKind ek = bundle.kind == DescriptorKind::CldReduced
                                    ? DescriptorKind::CldRaw
                                    : bundle.kind;
      const FeatureVector fv = extract_feature(img, ek, bundle.ehd_params);
      announce(args.image, predict_values(fv.values, true));
      ++annotated;
    } catch (const Error& e) {
      std::cerr << args.image << ": " << e.what() << "\n";
    }
  } else {
    const FeatureTable table = read_table(args.table);
    // a CLD_REDUCED table holds already-projected rows; everything else must
    // match what the bundle extracts
    const bool already_reduced = bundle.kind == DescriptorKind::CldReduced &&
                                 table.kind == DescriptorKind::CldReduced;
    if (!already_reduced) {
      const DescriptorKind expect = bundle.kind == DescriptorKind::CldReduced
                                        ? DescriptorKind::CldRaw
                                        : bundle.kind;
      if (table.kind != expect) {
        throw FormatError("model expects " + kind_name(expect) + " rows, table holds " +
                          kind_name(table.kind));
      }
    }
    for (const auto& row : table.rows) {
      try {
        announce(row.path, predict_values(row.values, !already_reduced));
        ++annotated;
      } catch (const Error& e) {
        std::cerr << row.path << ": " << e.what() << "\n";
      }
    }
  }
  return annotated > 0 ? 0 : 1;
}

struct EvaluateArgs {
  EvalOptions options;
  std::string report_path;
};

int run_evaluate(EvaluateArgs& args) {
  RunReport report;
  auto write_report = [&] {
    std::ofstream out(args.report_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + args.report_path);
    out << report_to_json(report).dump(2) << "\n";
    if (!out) throw IoError("failed writing " + args.report_path);
  };

  try {
    evaluate_corpus(args.options, report);
  } catch (const Error& e) {
    report.failed = true;
    report.failure = e.what();
    write_report();
    throw;
  }
  write_report();
  std::cout << render_report_table(report);
  std::cerr << "report -> " << args.report_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPEG-7 descriptor image annotation"};
  app.require_subcommand(1);

  ExtractArgs xargs;
  CLI::App* extract = app.add_subcommand("extract", "write a feature table for a corpus");
  extract->add_option("--corpus", xargs.corpus, "corpus root (one folder per class)")->required();
  extract->add_option("--descriptor", xargs.descriptor, "ehd, scd or cld")->required();
  extract->add_option("--out", xargs.out, "output CSV table")->required();
  extract->add_option("--edge-threshold", xargs.ehd.edge_threshold, "edge strength cutoff");
  extract->add_option("--blocks", xargs.ehd.target_block_count, "target blocks per image");

  TrainArgs targs;
  CLI::App* train = app.add_subcommand("train", "fit a model bundle from feature tables");
  train->add_option("--table", targs.tables, "feature table(s), same kind")
      ->required()
      ->delimiter(',');
  train->add_option("--classifier", targs.classifier, "nb or c45")->required();
  auto* opt_counts =
      train->add_option("--train-counts", targs.train_counts, "per-class train counts")
          ->delimiter(',');
  auto* opt_fraction =
      train->add_option("--train-fraction", targs.train_fraction, "train fraction in (0,1)");
  opt_counts->excludes(opt_fraction);
  train->add_option("--phase", targs.phase, "split phase index");
  train->add_option("--seed", targs.seed, "split seed");
  train->add_option("--out", targs.out, "output model bundle (JSON)")->required();
  train->add_option("--edge-threshold", targs.ehd.edge_threshold,
                    "edge cutoff recorded for later annotation");
  train->add_option("--blocks", targs.ehd.target_block_count,
                    "block target recorded for later annotation");

  PredictArgs pargs;
  CLI::App* predict = app.add_subcommand("predict", "annotate images with a model bundle");
  predict->add_option("--model", pargs.model, "model bundle path")->required();
  auto* opt_image = predict->add_option("--image", pargs.image, "single image to annotate");
  auto* opt_table = predict->add_option("--table", pargs.table, "feature table to annotate");
  opt_image->excludes(opt_table);

  EvaluateArgs eargs;
  std::vector<int> eval_counts;
  double eval_fraction = 0.9;
  CLI::App* evaluate = app.add_subcommand("evaluate", "multi-phase accuracy/timing comparison");
  evaluate->add_option("--corpus", eargs.options.corpus, "corpus root")->required();
  evaluate
      ->add_option("--descriptors", eargs.options.descriptors, "comma list of ehd,scd,cld")
      ->required()
      ->delimiter(',');
  evaluate
      ->add_option("--classifiers", eargs.options.classifiers, "comma list of nb,c45")
      ->required()
      ->delimiter(',');
  evaluate->add_option("--phases", eargs.options.phases, "number of re-split phases");
  evaluate->add_option("--seed", eargs.options.seed, "split seed");
  evaluate->add_option("--report", eargs.report_path, "output report JSON")->required();
  auto* eval_counts_opt =
      evaluate->add_option("--train-counts", eval_counts, "per-class train counts")
          ->delimiter(',');
  auto* eval_fraction_opt =
      evaluate->add_option("--train-fraction", eval_fraction, "train fraction, default 0.9");
  eval_counts_opt->excludes(eval_fraction_opt);
  evaluate->add_option("--edge-threshold", eargs.options.ehd.edge_threshold,
                       "edge strength cutoff");
  evaluate->add_option("--blocks", eargs.options.ehd.target_block_count,
                       "target blocks per image");

  try {
    app.parse(argc, argv);

    if (extract->parsed()) return run_extract(xargs);
    if (train->parsed()) {
      if (targs.train_counts.empty() && targs.train_fraction < 0.0) {
        throw FormatError("train needs --train-counts or --train-fraction");
      }
      return run_train(targs);
    }
    if (predict->parsed()) {
      if (pargs.image.empty() == pargs.table.empty()) {
        throw FormatError("predict needs exactly one of --image or --table");
      }
      return run_predict(pargs);
    }
    if (evaluate->parsed()) {
      eargs.options.split = eval_counts.empty() ? SplitSpec::of_fraction(eval_fraction)
                                                : SplitSpec::of_counts(eval_counts);
      return run_evaluate(eargs);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const EmptyClass& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
