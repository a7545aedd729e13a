#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "annot/decision_tree.hpp"
#include "annot/descriptors.hpp"
#include "annot/errors.hpp"
#include "annot/feature.hpp"
#include "annot/naive_bayes.hpp"
#include "annot/pca.hpp"

namespace annot {

using Json = nlohmann::ordered_json;

/// Everything needed to annotate a fresh image: descriptor choice and its
/// parameters, the optional projection, the fitted classifier, class names.
struct ModelBundle {
  DescriptorKind kind = DescriptorKind::Ehd;  // CLD_REDUCED = extract raw, then project
  std::vector<std::string> class_names;
  EhdParams ehd_params;
  std::optional<PcaModel> pca;
  std::string classifier;  // "nb" | "c45"
  std::optional<NbModel> nb;
  std::unique_ptr<TreeNode> tree;
};

namespace detail {

inline Json tree_to_json(const TreeNode& node) {
  Json j;
  j["leaf"] = node.is_leaf;
  if (node.is_leaf) {
    j["label"] = node.label;
    j["support"] = node.support;
    j["purity"] = node.purity;
  } else {
    j["feature"] = node.feature;
    j["threshold"] = node.threshold;
    j["below"] = tree_to_json(*node.below);
    j["above_or_equal"] = tree_to_json(*node.above_or_equal);
  }
  return j;
}

inline std::unique_ptr<TreeNode> tree_from_json(const Json& j) {
  auto node = std::make_unique<TreeNode>();
  node->is_leaf = j.at("leaf").get<bool>();
  if (node->is_leaf) {
    node->label = j.at("label").get<int>();
    node->support = j.at("support").get<int>();
    node->purity = j.at("purity").get<double>();
  } else {
    node->feature = j.at("feature").get<int>();
    node->threshold = j.at("threshold").get<double>();
    node->below = tree_from_json(j.at("below"));
    node->above_or_equal = tree_from_json(j.at("above_or_equal"));
  }
  return node;
}

}  // namespace detail

inline void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  if (bundle.kind == DescriptorKind::CldReduced && !bundle.pca) {
    throw FormatError("a reduced color-layout bundle needs its projection");
  }
  Json j;
  j["descriptor"] = kind_name(bundle.kind);
  j["class_names"] = bundle.class_names;
  j["extraction"] = {{"target_block_count", bundle.ehd_params.target_block_count},
                     {"edge_threshold", bundle.ehd_params.edge_threshold}};
  if (bundle.pca) {
    j["pca"] = {{"requested_components", bundle.pca->requested_components},
                {"mean", bundle.pca->mean},
                {"basis", bundle.pca->basis},
                {"eigenvalues", bundle.pca->eigenvalues}};
  }
  j["classifier"] = bundle.classifier;
  if (bundle.classifier == "nb") {
    if (!bundle.nb) throw FormatError("bundle marked nb but holds no model");
    j["nb"] = {{"priors", bundle.nb->priors},
               {"means", bundle.nb->means},
               {"variances", bundle.nb->variances},
               {"variance_floor", bundle.nb->variance_floor}};
  } else if (bundle.classifier == "c45") {
    if (!bundle.tree) throw FormatError("bundle marked c45 but holds no model");
    j["tree"] = detail::tree_to_json(*bundle.tree);
  } else {
    throw FormatError("unknown classifier '" + bundle.classifier + "'");
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file << j.dump(2) << '\n';
  if (!file) throw IoError("failed writing " + path.string());
}

inline ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string());
  Json j;
  try {
    file >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }

  ModelBundle bundle;
  try {
    bundle.kind = parse_kind(j.at("descriptor").get<std::string>());
    bundle.class_names = j.at("class_names").get<std::vector<std::string>>();
    const Json& ex = j.at("extraction");
    bundle.ehd_params.target_block_count = ex.at("target_block_count").get<int>();
    bundle.ehd_params.edge_threshold = ex.at("edge_threshold").get<double>();
    if (j.contains("pca")) {
      PcaModel pca;
      const Json& p = j.at("pca");
      pca.requested_components = p.at("requested_components").get<int>();
      pca.mean = p.at("mean").get<std::vector<double>>();
      pca.basis = p.at("basis").get<std::vector<std::vector<double>>>();
      pca.eigenvalues = p.at("eigenvalues").get<std::vector<double>>();
      bundle.pca = std::move(pca);
    }
    bundle.classifier = j.at("classifier").get<std::string>();
    if (bundle.classifier == "nb") {
      NbModel nb;
      const Json& n = j.at("nb");
      nb.priors = n.at("priors").get<std::vector<double>>();
      nb.means = n.at("means").get<std::vector<std::vector<double>>>();
      nb.variances = n.at("variances").get<std::vector<std::vector<double>>>();
      nb.variance_floor = n.at("variance_floor").get<double>();
      bundle.nb = std::move(nb);
    } else if (bundle.classifier == "c45") {
      bundle.tree = detail::tree_from_json(j.at("tree"));
    } else {
      throw FormatError(path.string() + ": unknown classifier '" + bundle.classifier + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }

  if (bundle.class_names.empty()) throw FormatError(path.string() + ": no class names");
  if (bundle.kind == DescriptorKind::CldReduced && !bundle.pca) {
    throw FormatError(path.string() + ": reduced color layout bundle lacks its projection");
  }
  return bundle;
}

}  // namespace annot
