#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "annot/errors.hpp"

namespace annot {

struct PcaModel {
  int requested_components = 0;  // what the caller asked for, pre-reduction
  std::vector<double> mean;
  std::vector<std::vector<double>> basis;  // rows = components, descending eigenvalue
  std::vector<double> eigenvalues;

  std::size_t input_dim() const { return mean.size(); }
  std::size_t components() const { return basis.size(); }
};

/// Fit PCA on the sample covariance (divisor n-1). k is silently reduced to
/// min(k, d, n-1). Deterministic output: components sorted by descending
/// eigenvalue (equal eigenvalues ordered by the index of their
/// largest-magnitude entry) and each component's largest-magnitude entry
/// made positive.
inline PcaModel fit_pca(const std::vector<std::vector<double>>& samples, int k) {
  const std::size_t n = samples.size();
  if (n < 2) throw DegenerateInput("PCA needs at least 2 samples, got " + std::to_string(n));
  const std::size_t d = samples[0].size();
  for (const auto& s : samples) {
    if (s.size() != d) throw DegenerateInput("PCA samples have mismatched lengths");
  }
  if (d == 0) throw DegenerateInput("PCA samples are empty vectors");

  PcaModel model;
  model.requested_components = k;
  const std::size_t keep = std::min<std::size_t>(
      {static_cast<std::size_t>(std::max(k, 0)), d, n - 1});

  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) x(i, j) = samples[i][j];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd& evals = solver.eigenvalues();   // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();  // columns

  struct Ranked {
    double value;
    int column;
    int anchor;  // index of the largest-magnitude entry
  };
  std::vector<Ranked> ranked;
  ranked.reserve(d);
  for (int c = 0; c < static_cast<int>(d); ++c) {
    int anchor = 0;
    for (int j = 1; j < static_cast<int>(d); ++j) {
      if (std::abs(evecs(j, c)) > std::abs(evecs(anchor, c))) anchor = j;
    }
    ranked.push_back({evals(c), c, anchor});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.anchor < b.anchor;
  });

  model.mean.assign(mean.data(), mean.data() + d);
  model.basis.reserve(keep);
  model.eigenvalues.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const Ranked& r = ranked[i];
    Eigen::VectorXd v = evecs.col(r.column);
    if (v(r.anchor) < 0) v = -v;
    model.basis.emplace_back(v.data(), v.data() + d);
    model.eigenvalues.push_back(r.value < 0 ? 0.0 : r.value);
  }
  return model;
}

inline std::vector<double> project(const PcaModel& model, const std::vector<double>& x) {
  if (x.size() != model.input_dim()) {
    throw DimensionMismatch("project: expected " + std::to_string(model.input_dim()) +
                            " values, got " + std::to_string(x.size()));
  }
  std::vector<double> y(model.components(), 0.0);
  for (std::size_t i = 0; i < model.components(); ++i) {
    double s = 0.0;
    const auto& row = model.basis[i];
    for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * (x[j] - model.mean[j]);
    y[i] = s;
  }
  return y;
}

inline std::vector<double> reconstruct(const PcaModel& model, const std::vector<double>& y) {
  if (y.size() != model.components()) {
    throw DimensionMismatch("reconstruct: expected " + std::to_string(model.components()) +
                            " values, got " + std::to_string(y.size()));
  }
  std::vector<double> x(model.mean);
  for (std::size_t i = 0; i < model.components(); ++i) {
    const auto& row = model.basis[i];
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += row[j] * y[i];
  }
  return x;
}

}  // namespace annot
