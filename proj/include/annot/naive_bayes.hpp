#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "annot/dataset.hpp"
#include "annot/errors.hpp"

namespace annot {

struct NbModel {
  std::vector<double> priors;                  // m, sums to 1
  std::vector<std::vector<double>> means;      // m x d
  std::vector<std::vector<double>> variances;  // m x d, floored
  double variance_floor = 0.0;

  std::size_t class_count() const { return priors.size(); }
  std::size_t dim() const { return means.empty() ? 0 : means[0].size(); }
};

/// Per-class Gaussian fit: priors are class frequencies, means/variances are
/// per-class per-feature population statistics. Variances are floored at
/// 1e-9 times the largest global feature variance (1e-9 if everything is
/// constant) so constant features don't produce zero-width densities.
inline NbModel fit_nb(const LabeledDataset& data) {
  data.validate();
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  const std::size_t m = data.class_count();

  std::vector<std::size_t> counts(m, 0);
  for (int label : data.labels) ++counts[label];
  for (std::size_t c = 0; c < m; ++c) {
    if (counts[c] == 0) {
      throw EmptyClass("class " + data.class_names[c] + " has no training samples");
    }
  }

  NbModel model;
  model.priors.resize(m);
  model.means.assign(m, std::vector<double>(d, 0.0));
  model.variances.assign(m, std::vector<double>(d, 0.0));

  for (std::size_t i = 0; i < n; ++i) {
    auto& mu = model.means[data.labels[i]];
    for (std::size_t j = 0; j < d; ++j) mu[j] += data.features[i][j];
  }
  for (std::size_t c = 0; c < m; ++c) {
    model.priors[c] = static_cast<double>(counts[c]) / n;
    for (std::size_t j = 0; j < d; ++j) model.means[c][j] /= counts[c];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int c = data.labels[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = data.features[i][j] - model.means[c][j];
      model.variances[c][j] += diff * diff;
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t j = 0; j < d; ++j) model.variances[c][j] /= counts[c];
  }

  // global per-feature variance sets the floor scale
  std::vector<double> gmean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) gmean[j] += data.features[i][j];
  }
  for (std::size_t j = 0; j < d; ++j) gmean[j] /= n;
  double max_gvar = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double gv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = data.features[i][j] - gmean[j];
      gv += diff * diff;
    }
    max_gvar = std::max(max_gvar, gv / n);
  }
  model.variance_floor = max_gvar > 0.0 ? 1e-9 * max_gvar : 1e-9;
  for (auto& row : model.variances) {
    for (double& v : row) v = std::max(v, model.variance_floor);
  }
  return model;
}

/// Unnormalized per-class log posterior: log prior + sum of Gaussian
/// log-densities.
inline std::vector<double> nb_log_scores(const NbModel& model, const std::vector<double>& x) {
  if (x.size() != model.dim()) {
    throw DimensionMismatch("expected " + std::to_string(model.dim()) +
                            " features, got " + std::to_string(x.size()));
  }
  const std::size_t m = model.class_count();
  std::vector<double> scores(m);
  for (std::size_t c = 0; c < m; ++c) {
    double s = std::log(model.priors[c]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = model.variances[c][j];
      const double diff = x[j] - model.means[c][j];
      s += -0.5 * std::log(2.0 * std::numbers::pi * var) - diff * diff / (2.0 * var);
    }
    scores[c] = s;
  }
  return scores;
}

/// Log-sum-exp normalization of a log-score vector into probabilities.
inline std::vector<double> nb_posterior(std::vector<double> scores) {
  const double peak = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - peak);
    total += s;
  }
  for (double& s : scores) s /= total;
  return scores;
}

inline std::vector<double> nb_posterior(const NbModel& model, const std::vector<double>& x) {
  return nb_posterior(nb_log_scores(model, x));
}

/// Argmax posterior; exact ties go to the smallest class index.
inline int nb_predict(const NbModel& model, const std::vector<double>& x) {
  const std::vector<double> scores = nb_log_scores(model, x);
  int best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = static_cast<int>(c);
  }
  return best;
}

}  // namespace annot
