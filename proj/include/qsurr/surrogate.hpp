#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace qsurr {

struct TrainingPoint {
  std::vector<double> theta;
  double y = 0.0;
};

struct TrainingSet {
  int dim = 0;
  std::vector<TrainingPoint> points;
};

// Merges points whose inputs coincide within `tol` in the infinity norm; the
// merged target is the arithmetic mean. Interpolation needs one target per
// node, while the archive may re-evaluate the same angles.
TrainingSet dedupe(const std::vector<TrainingPoint>& points, int dim,
                   double tol = 1e-12);

struct TooFewPoints : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the interpolation system cannot be solved to exactness, e.g.
// for affinely degenerate centers. Never silently regularized.
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RbfConfig {
  // Affine polynomial tail with orthogonality side conditions (the classical
  // well-posed thin-plate formulation). The plain kernel-only system is kept
  // for fidelity comparisons.
  bool affine_tail = true;
};

// Exact thin-plate RBF interpolant phi(r) = r^2 ln r over the training set,
// with an optional affine tail. Immutable once fitted; safe for concurrent
// evaluation.
class RbfSurrogate {
 public:
  static RbfSurrogate fit(const TrainingSet& training, const RbfConfig& config = {});

  double evaluate(const std::vector<double>& theta) const;

  int dim() const { return dim_; }
  const std::vector<std::vector<double>>& centers() const { return centers_; }
  const std::vector<double>& rbf_weights() const { return rbf_weights_; }
  // (constant, linear...) when the affine tail is enabled, empty otherwise.
  const std::vector<double>& poly_weights() const { return poly_weights_; }

  // Debug dump; not a stability-guaranteed format.
  nlohmann::json dump() const;

 private:
  int dim_ = 0;
  std::vector<std::vector<double>> centers_;
  std::vector<double> rbf_weights_;
  std::vector<double> poly_weights_;
};

// phi(r) = r^2 ln r evaluated from the squared radius, with phi(0) = 0.
double thin_plate(double r_squared);

}  // namespace qsurr
