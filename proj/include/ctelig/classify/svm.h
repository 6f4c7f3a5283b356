#pragma once

#include <cstdint>
#include <json.hpp>
#include <memory>
#include <span>

#include "ctelig/classify/classifier.h"
#include "ctelig/classify/encoder.h"

namespace ctelig::classify {

struct SvmHyper {
  double c = 1.0;
  double gamma = 1.0;
  double tolerance = 1e-3;
  bool shrinking = true;
  std::size_t cacheMegabytes = 200;
  // Larger training sets are refused; RBF SMO cost grows quadratically.
  std::size_t budget = 50'000;
  std::uint64_t maxIterations = 10'000'000;

  void validate() const;
  nlohmann::json toJson() const;
  static SvmHyper fromJson(const nlohmann::json& j);
};

double rbfKernel(std::span<const double> x, std::span<const double> y,
                 double gamma);

// Dual solution of the soft-margin RBF SVM.
struct SvmSolution {
  std::vector<double> alpha;  // one per training point, in [0, C]
  double bias = 0.0;          // decision = sum alpha_i y_i k(x_i, x) + bias
  std::uint64_t iterations = 0;
  // Final max_{I_up}(-y G) - min_{I_low}(-y G); below tolerance on success.
  double gap = 0.0;
};

// Sequential minimal optimization with maximal-violating-pair selection.
// y holds +1/-1. Shrinking narrows the working-set search only; the
// gradient is kept for every point, and optimality is always confirmed on
// the full set. Throws DataError for a single class, BudgetError when the
// set exceeds hyper.budget.
SvmSolution solveSvm(const FeatureMatrix& x, std::span<const int> y,
                     const SvmHyper& hyper);

// Kernel expansion over support vectors, usable without embeddings.
class SvmMachine {
 public:
  SvmMachine() = default;
  SvmMachine(FeatureMatrix supportVectors, std::vector<double> coefficients,
             double bias, double gamma);
  // Keeps the points with alpha > 0.
  static SvmMachine fromSolution(const FeatureMatrix& x, std::span<const int> y,
                                 const SvmSolution& solution, double gamma);

  double decision(std::span<const double> x) const;
  const FeatureMatrix& supportVectors() const { return supportVectors_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double bias() const { return bias_; }
  double gamma() const { return gamma_; }

 private:
  FeatureMatrix supportVectors_;
  std::vector<double> coefficients_;  // alpha_i * y_i
  double bias_ = 0.0;
  double gamma_ = 1.0;
};

// Eligible is the positive class. Scores are the logistic of the margin.
class SvmModel : public Classifier {
 public:
  SvmModel(SvmMachine machine, EmbeddingSource embeddings, SvmHyper hyper);

  ModelKind kind() const override { return ModelKind::Svm; }
  Prediction predict(std::string_view text) const override;
  void store(ModelFile& file) const override;
  static std::unique_ptr<SvmModel> restore(const ModelFile& file,
                                           EmbeddingSource embeddings);

  const SvmMachine& machine() const { return machine_; }
  const SvmHyper& hyper() const { return hyper_; }

 private:
  SvmMachine machine_;
  EmbeddingSource embeddings_;
  SvmHyper hyper_;
};

std::unique_ptr<SvmModel> trainSvm(const Dataset& dataset,
                                   EmbeddingSource embeddings,
                                   const SvmHyper& hyper,
                                   SvmSolution* solution = nullptr);

}  // namespace ctelig::classify
