#include <filesystem>
#include <fstream>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "annot/model_io.hpp"
#include "support/synthetic.hpp"

using namespace annot;
namespace fs = std::filesystem;

namespace {

LabeledDataset tiny_dataset(std::uint64_t seed, std::size_t n, std::size_t d) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 3.0);
  LabeledDataset data;
  data.class_names = {"first", "second"};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(d);
    for (double& v : x) v = dist(gen);
    const int label = static_cast<int>(i % 2);
    x[0] += label * 10.0;  // keep the classes separable
    data.features.push_back(std::move(x));
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace

TEST_CASE("gaussian models round-trip bit for bit") {
  const fs::path dir = testsupport::fresh_scratch_dir("bundle-nb");
  const LabeledDataset data = tiny_dataset(31, 12, 5);

  ModelBundle bundle;
  bundle.kind = DescriptorKind::Scd;
  bundle.class_names = data.class_names;
  bundle.classifier = "nb";
  bundle.nb = fit_nb(data);
  save_bundle(bundle, dir / "m.json");

  const ModelBundle back = load_bundle(dir / "m.json");
  CHECK(back.kind == DescriptorKind::Scd);
  CHECK(back.class_names == bundle.class_names);
  CHECK(back.classifier == "nb");
  REQUIRE(back.nb.has_value());
  CHECK_FALSE(back.pca.has_value());
  CHECK(back.nb->priors == bundle.nb->priors);
  CHECK(back.nb->means == bundle.nb->means);
  CHECK(back.nb->variances == bundle.nb->variances);
  CHECK(back.nb->variance_floor == bundle.nb->variance_floor);
  fs::remove_all(dir);
}

TEST_CASE("tree models round-trip structurally") {
  const fs::path dir = testsupport::fresh_scratch_dir("bundle-tree");
  const LabeledDataset data = tiny_dataset(32, 40, 4);

  ModelBundle bundle;
  bundle.kind = DescriptorKind::Ehd;
  bundle.class_names = data.class_names;
  bundle.classifier = "c45";
  bundle.tree = fit_c45(data);
  bundle.ehd_params.edge_threshold = 9.5;
  bundle.ehd_params.target_block_count = 512;
  save_bundle(bundle, dir / "t.json");

  const ModelBundle back = load_bundle(dir / "t.json");
  REQUIRE(back.tree != nullptr);
  CHECK(back.ehd_params.edge_threshold == 9.5);
  CHECK(back.ehd_params.target_block_count == 512);

  // identical predictions and identical serialized form
  std::mt19937_64 gen(8);
  std::normal_distribution<double> dist(0.0, 5.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(4);
    for (double& v : x) v = dist(gen);
    CHECK(tree_predict(*back.tree, x) == tree_predict(*bundle.tree, x));
  }
  save_bundle(back, dir / "t2.json");
  std::ifstream a(dir / "t.json", std::ios::binary), b(dir / "t2.json", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  fs::remove_all(dir);
}

TEST_CASE("projected models carry their projection") {
  const fs::path dir = testsupport::fresh_scratch_dir("bundle-pca");
  const LabeledDataset data = tiny_dataset(33, 10, 6);

  ModelBundle bundle;
  bundle.kind = DescriptorKind::CldReduced;
  bundle.class_names = data.class_names;
  bundle.classifier = "nb";
  bundle.pca = fit_pca(data.features, 3);
  LabeledDataset reduced = data;
  reduced.features.clear();
  for (const auto& x : data.features) reduced.features.push_back(project(*bundle.pca, x));
  bundle.nb = fit_nb(reduced);
  save_bundle(bundle, dir / "p.json");

  const ModelBundle back = load_bundle(dir / "p.json");
  REQUIRE(back.pca.has_value());
  CHECK(back.pca->mean == bundle.pca->mean);
  CHECK(back.pca->basis == bundle.pca->basis);
  CHECK(back.pca->eigenvalues == bundle.pca->eigenvalues);
  CHECK(back.pca->requested_components == 3);
  fs::remove_all(dir);
}

TEST_CASE("a reduced model without its projection is rejected") {
  const fs::path dir = testsupport::fresh_scratch_dir("bundle-bad");
  const LabeledDataset data = tiny_dataset(34, 8, 4);
  ModelBundle bundle;
  bundle.kind = DescriptorKind::CldReduced;
  bundle.class_names = data.class_names;
  bundle.classifier = "nb";
  bundle.nb = fit_nb(data);
  CHECK_THROWS_AS(save_bundle(bundle, dir / "x.json"), FormatError);
  fs::remove_all(dir);
}

TEST_CASE("garbage model files are rejected") {
  const fs::path dir = testsupport::fresh_scratch_dir("bundle-garbage");
  {
    std::ofstream out(dir / "g.json", std::ios::binary);
    out << "{ definitely not a model ";
  }
  CHECK_THROWS_AS(load_bundle(dir / "g.json"), FormatError);
  {
    std::ofstream out(dir / "h.json", std::ios::binary);
    out << "{\"descriptor\": \"EHD\"}";
  }
  CHECK_THROWS_AS(load_bundle(dir / "h.json"), FormatError);
  CHECK_THROWS_AS(load_bundle(dir / "missing.json"), IoError);
  fs::remove_all(dir);
}
