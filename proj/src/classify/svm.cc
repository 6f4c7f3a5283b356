#include "ctelig/classify/svm.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <list>
#include <unordered_map>

#include "ctelig/common/errors.h"

namespace ctelig::classify {

void SvmHyper::validate() const {
  if (!(c > 0)) throw ConfigError("svm: C must be positive");
  if (!(gamma > 0)) throw ConfigError("svm: gamma must be positive");
  if (!(tolerance > 0)) throw ConfigError("svm: tolerance must be positive");
  if (budget < 2) throw ConfigError("svm: budget must allow at least two points");
}

nlohmann::json SvmHyper::toJson() const {
  return {{"c", c},
          {"gamma", gamma},
          {"tolerance", tolerance},
          {"shrinking", shrinking},
          {"cache_mb", cacheMegabytes},
          {"budget", budget},
          {"max_iterations", maxIterations}};
}

SvmHyper SvmHyper::fromJson(const nlohmann::json& j) {
  SvmHyper h;
  h.c = j.at("c").get<double>();
  h.gamma = j.at("gamma").get<double>();
  h.tolerance = j.at("tolerance").get<double>();
  h.shrinking = j.at("shrinking").get<bool>();
  h.cacheMegabytes = j.at("cache_mb").get<std::size_t>();
  h.budget = j.at("budget").get<std::size_t>();
  h.maxIterations = j.at("max_iterations").get<std::uint64_t>();
  return h;
}

double rbfKernel(std::span<const double> x, std::span<const double> y, double gamma) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    d += diff * diff;
  }
  return std::exp(-gamma * d);
}

namespace {

// Rows of Q_ij = y_i y_j k(x_i, x_j), computed on demand and kept in an LRU
// cache bounded in bytes.
class KernelRows {
 public:
  KernelRows(const FeatureMatrix& x, std::span<const int> y, double gamma,
             std::size_t cacheBytes)
      : x_(x), y_(y), gamma_(gamma), squaredNorms_(x.rowwise().squaredNorm()) {
    const std::size_t rowBytes = sizeof(double) * static_cast<std::size_t>(x.rows());
    capacity_ = std::max<std::size_t>(2, cacheBytes / std::max<std::size_t>(1, rowBytes));
  }

  const std::vector<double>& row(std::size_t i) {
    const auto it = rows_.find(i);
    if (it != rows_.end()) {
      recent_.splice(recent_.begin(), recent_, it->second.second);
      return it->second.first;
    }
    if (rows_.size() >= capacity_) {
      rows_.erase(recent_.back());
      recent_.pop_back();
    }
    recent_.push_front(i);
    auto& entry = rows_[i];
    entry.second = recent_.begin();
    compute(i, entry.first);
    return entry.first;
  }

 private:
  void compute(std::size_t i, std::vector<double>& out) const {
    const auto n = static_cast<std::size_t>(x_.rows());
    const Eigen::VectorXd dots = x_ * x_.row(static_cast<Eigen::Index>(i)).transpose();
    out.resize(n);
    const double si = squaredNorms_[static_cast<Eigen::Index>(i)];
    for (std::size_t k = 0; k < n; ++k) {
      const double d2 = std::max(0.0, si + squaredNorms_[static_cast<Eigen::Index>(k)] -
                                          2.0 * dots[static_cast<Eigen::Index>(k)]);
      out[k] = (k == i ? 1.0 : std::exp(-gamma_ * d2)) * y_[i] * y_[k];
    }
  }

  const FeatureMatrix& x_;
  std::span<const int> y_;
  double gamma_;
  Eigen::VectorXd squaredNorms_;
  std::size_t capacity_;
  std::list<std::size_t> recent_;
  std::unordered_map<std::size_t,
                     std::pair<std::vector<double>, std::list<std::size_t>::iterator>>
      rows_;
};

}  // namespace

SvmSolution solveSvm(const FeatureMatrix& x, std::span<const int> y, const SvmHyper& hyper) {
  hyper.validate();
  const auto n = static_cast<std::size_t>(x.rows());
  if (y.size() != n) {
    throw std::invalid_argument("svm: label count does not match points");
  }
  if (n > hyper.budget) {
    throw BudgetError("svm: " + std::to_string(n) + " training points exceed the budget of " +
                      std::to_string(hyper.budget) +
                      "; subsample the training set or raise the budget explicitly");
  }
  const bool hasPos = std::count(y.begin(), y.end(), 1) > 0;
  const bool hasNeg = std::count(y.begin(), y.end(), -1) > 0;
  if (!hasPos || !hasNeg) {
    throw DataError("svm: training data must contain both classes");
  }

  const double c = hyper.c;
  const double tau = 1e-12;
  KernelRows q(x, y, hyper.gamma, hyper.cacheMegabytes << 20);
  SvmSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto& alpha = sol.alpha;

  auto inUp = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0);
  };
  auto inLow = [&](std::size_t t) {
    return (y[t] == -1 && alpha[t] < c) || (y[t] == 1 && alpha[t] > 0);
  };

  std::vector<std::size_t> active(n);
  for (std::size_t t = 0; t < n; ++t) active[t] = t;
  const std::uint64_t shrinkEvery = std::min<std::uint64_t>(n, 1000);
  std::uint64_t untilShrink = shrinkEvery;

  // Maximal violating pair over a candidate set: i maximizes -y G over I_up,
  // j minimizes -y G over I_low.
  auto select = [&](const std::vector<std::size_t>& set, std::size_t& i, std::size_t& j,
                    double& gmax, double& gmin) {
    gmax = -std::numeric_limits<double>::infinity();
    gmin = std::numeric_limits<double>::infinity();
    i = j = n;
    for (auto t : set) {
      const double v = -y[t] * grad[t];
      if (inUp(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (inLow(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
  };

  std::vector<std::size_t> all = active;
  for (;;) {
    std::size_t i, j;
    double gmax, gmin;
    select(active, i, j, gmax, gmin);
    if (i == n || j == n || gmax - gmin < hyper.tolerance) {
      if (active.size() == n) {
        sol.gap = (i == n || j == n) ? 0.0 : gmax - gmin;
        break;
      }
      // Optimal on the shrunk set; confirm on every point.
      active = all;
      untilShrink = shrinkEvery;
      continue;
    }
    if (sol.iterations >= hyper.maxIterations) {
      sol.gap = gmax - gmin;
      std::cerr << "warning: svm stopped after " << sol.iterations
                << " iterations with gap " << sol.gap << "\n";
      break;
    }
    ++sol.iterations;

    const auto& qi = q.row(i);
    const auto& qj = q.row(j);
    const double oldI = alpha[i];
    const double oldJ = alpha[j];
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * qi[j];
      if (quad <= 0) quad = tau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * qi[j];
      if (quad <= 0) quad = tau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
    }
    const double dI = alpha[i] - oldI;
    const double dJ = alpha[j] - oldJ;
    for (std::size_t k = 0; k < n; ++k) {
      grad[k] += qi[k] * dI + qj[k] * dJ;
    }

    if (hyper.shrinking && --untilShrink == 0) {
      untilShrink = shrinkEvery;
      // Drop bounded points that cannot join a violating pair at the
      // current gap.
      double up = -std::numeric_limits<double>::infinity();
      double low = -std::numeric_limits<double>::infinity();
      for (auto t : active) {
        if (inUp(t)) up = std::max(up, -y[t] * grad[t]);
        if (inLow(t)) low = std::max(low, y[t] * grad[t]);
      }
      std::vector<std::size_t> kept;
      kept.reserve(active.size());
      for (auto t : active) {
        bool shrink = false;
        if (alpha[t] >= c) {
          shrink = y[t] == 1 ? -grad[t] > up : -grad[t] > low;
        } else if (alpha[t] <= 0) {
          shrink = y[t] == 1 ? grad[t] > low : grad[t] > up;
        }
        if (!shrink) kept.push_back(t);
      }
      active.swap(kept);
    }
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double sumFree = 0.0;
  std::size_t free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] == 1) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      ++free;
      sumFree += yg;
    }
  }
  const double rho = free > 0 ? sumFree / static_cast<double>(free) : (upper + lower) / 2;
  sol.bias = -rho;
  return sol;
}

SvmMachine::SvmMachine(FeatureMatrix supportVectors, std::vector<double> coefficients,
                       double bias, double gamma)
    : supportVectors_(std::move(supportVectors)),
      coefficients_(std::move(coefficients)),
      bias_(bias),
      gamma_(gamma) {}

SvmMachine SvmMachine::fromSolution(const FeatureMatrix& x, std::span<const int> y,
                                    const SvmSolution& solution, double gamma) {
  std::vector<Eigen::Index> keep;
  std::vector<double> coef;
  for (std::size_t t = 0; t < solution.alpha.size(); ++t) {
    if (solution.alpha[t] > 0) {
      keep.push_back(static_cast<Eigen::Index>(t));
      coef.push_back(solution.alpha[t] * y[t]);
    }
  }
  FeatureMatrix sv(static_cast<Eigen::Index>(keep.size()), x.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    sv.row(static_cast<Eigen::Index>(r)) = x.row(keep[r]);
  }
  return SvmMachine(std::move(sv), std::move(coef), solution.bias, gamma);
}

double SvmMachine::decision(std::span<const double> x) const {
  double f = bias_;
  const auto dim = static_cast<std::size_t>(supportVectors_.cols());
  for (std::size_t r = 0; r < coefficients_.size(); ++r) {
    f += coefficients_[r] *
         rbfKernel(std::span<const double>(supportVectors_.data() + r * dim, dim), x, gamma_);
  }
  return f;
}

SvmModel::SvmModel(SvmMachine machine, EmbeddingSource embeddings, SvmHyper hyper)
    : machine_(std::move(machine)), embeddings_(std::move(embeddings)), hyper_(hyper) {
  setEmbeddingOrigin(embeddings_.path, embeddings_.checksum);
}

Prediction SvmModel::predict(std::string_view text) const {
  bool oov = false;
  const auto x = sentenceFeatures(*embeddings_.model, text, &oov);
  const double f =
      machine_.decision(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  Prediction p;
  const double eligible = 1.0 / (1.0 + std::exp(-f));
  p.scores = {1.0 - eligible, eligible};
  p.label = f > 0 ? Label::Eligible : Label::NotEligible;
  p.lowConfidence = oov;
  return p;
}

void SvmModel::store(ModelFile& file) const {
  file.header["hyper"] = hyper_.toJson();
  file.header["bias"] = machine_.bias();
  const auto& sv = machine_.supportVectors();
  file.blobs["support_vectors"] =
      Blob{{static_cast<std::uint64_t>(sv.rows()), static_cast<std::uint64_t>(sv.cols())},
           std::vector<double>(sv.data(), sv.data() + sv.size())};
  file.blobs["coefficients"] = Blob{{machine_.coefficients().size()}, machine_.coefficients()};
}

std::unique_ptr<SvmModel> SvmModel::restore(const ModelFile& file, EmbeddingSource embeddings) {
  const auto& sv = file.blob("support_vectors");
  const auto& coef = file.blob("coefficients").doubles();
  if (sv.shape.size() != 2 || sv.shape[0] != coef.size()) {
    throw DataError("svm model file: inconsistent shapes");
  }
  const auto hyper = SvmHyper::fromJson(file.header.at("hyper"));
  FeatureMatrix points = Eigen::Map<const FeatureMatrix>(
      sv.doubles().data(), static_cast<Eigen::Index>(sv.shape[0]),
      static_cast<Eigen::Index>(sv.shape[1]));
  if (embeddings.model->dim() != points.cols()) {
    throw DataError("svm model file: embedding dimension does not match support vectors");
  }
  return std::make_unique<SvmModel>(
      SvmMachine(std::move(points), coef, file.header.at("bias").get<double>(), hyper.gamma),
      std::move(embeddings), hyper);
}

std::unique_ptr<SvmModel> trainSvm(const Dataset& dataset, EmbeddingSource embeddings,
                                   const SvmHyper& hyper, SvmSolution* solution) {
  if (!embeddings.model) {
    throw ConfigError("svm needs word embeddings");
  }
  if (dataset.size() > hyper.budget) {
    throw BudgetError("svm: " + std::to_string(dataset.size()) +
                      " training statements exceed the budget of " +
                      std::to_string(hyper.budget) +
                      "; subsample the training set or raise the budget explicitly");
  }
  const auto x = datasetFeatures(*embeddings.model, dataset);
  std::vector<int> y;
  y.reserve(dataset.size());
  for (const auto& s : dataset) {
    y.push_back(s.label == Label::Eligible ? 1 : -1);
  }
  auto sol = solveSvm(x, y, hyper);
  auto machine = SvmMachine::fromSolution(x, y, sol, hyper.gamma);
  if (solution) {
    *solution = std::move(sol);
  }
  return std::make_unique<SvmModel>(std::move(machine), std::move(embeddings), hyper);
}

}  // namespace ctelig::classify
