#include "qsurr/surrogate.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace qsurr {

double thin_plate(double r_squared) {
  // r^2 ln r = 0.5 r^2 ln r^2, continuous limit 0 at r = 0
  return r_squared > 0.0 ? 0.5 * r_squared * std::log(r_squared) : 0.0;
}

namespace {

double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

TrainingSet dedupe(const std::vector<TrainingPoint>& points, int dim,
                   double tol) {
  TrainingSet out;
  out.dim = dim;
  std::vector<double> sums;  // running target sum per kept point
  std::vector<int> counts;
  for (const auto& pt : points) {
    if (static_cast<int>(pt.theta.size()) != dim)
      throw std::invalid_argument("training point dimension mismatch");
    int match = -1;
    for (std::size_t k = 0; k < out.points.size() && match < 0; ++k) {
      bool close = true;
      for (int c = 0; c < dim && close; ++c)
        close = std::abs(pt.theta[c] - out.points[k].theta[c]) <= tol;
      if (close) match = static_cast<int>(k);
    }
    if (match < 0) {
      out.points.push_back(pt);
      sums.push_back(pt.y);
      counts.push_back(1);
    } else {
      sums[match] += pt.y;
      ++counts[match];
      out.points[match].y = sums[match] / counts[match];
    }
  }
  return out;
}

RbfSurrogate RbfSurrogate::fit(const TrainingSet& training,
                               const RbfConfig& config) {
  const int d = training.dim;
  const int m = static_cast<int>(training.points.size());
  if (d < 1) throw std::invalid_argument("training dimension must be >= 1");
  if (m < d + 2)
    throw TooFewPoints("thin-plate fit needs at least dim + 2 points, got " +
                       std::to_string(m));

  const int tail = config.affine_tail ? d + 1 : 0;
  const int nsys = m + tail;

  // Augmented symmetric system [Phi P; P^T 0] [w; c] = [y; 0], column-major.
  std::vector<double> a(static_cast<std::size_t>(nsys) * nsys, 0.0);
  auto at = [&](int r, int c) -> double& {
    return a[static_cast<std::size_t>(c) * nsys + r];
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      const double phi = thin_plate(
          dist_sq(training.points[i].theta, training.points[j].theta));
      at(i, j) = phi;
      at(j, i) = phi;
    }
  for (int i = 0; i < m && tail > 0; ++i) {
    at(i, m) = 1.0;
    at(m, i) = 1.0;
    for (int c = 0; c < d; ++c) {
      at(i, m + 1 + c) = training.points[i].theta[c];
      at(m + 1 + c, i) = training.points[i].theta[c];
    }
  }

  std::vector<double> rhs(nsys, 0.0);
  for (int i = 0; i < m; ++i) rhs[i] = training.points[i].y;

  // Bunch-Kaufman symmetric-indefinite factorization with partial pivoting.
  // The interpolation is exact by construction: no smoothing term is added,
  // and failures are surfaced rather than regularized away. Near-coincident
  // noisy centers make the system ill-conditioned, so the factorization is
  // followed by iterative refinement against the unfactored matrix; the
  // refined solution still solves the original system, only more accurately.
  const std::vector<double> a_orig = a;
  std::vector<lapack_int> ipiv(nsys);
  lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', nsys, a.data(), nsys,
                                   ipiv.data());
  if (info > 0)
    throw SingularSystem("thin-plate system is singular (degenerate centers)");
  if (info < 0)
    throw std::logic_error("invalid argument to dsytrf: " + std::to_string(info));

  std::vector<double> x = rhs;
  info = LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', nsys, 1, a.data(), nsys,
                        ipiv.data(), x.data(), nsys);
  if (info != 0)
    throw std::logic_error("invalid argument to dsytrs: " + std::to_string(info));

  // Interpolation residual of the candidate solution, accumulated in
  // extended precision: rows 0..m-1 of rhs - A x are exactly the training
  // residuals y_k - s(center_k).
  std::vector<double> residual(nsys);
  auto compute_residual = [&] {
    double worst = 0.0;
    for (int r = 0; r < nsys; ++r) {
      long double acc = rhs[r];
      for (int c = 0; c < nsys; ++c)
        acc -= static_cast<long double>(
                   a_orig[static_cast<std::size_t>(c) * nsys + r]) *
               x[c];
      residual[r] = static_cast<double>(acc);
      if (r < m)
        worst = std::max(worst,
                         std::abs(residual[r]) / std::max(1.0, std::abs(rhs[r])));
    }
    return worst;
  };

  double worst = compute_residual();
  for (int sweep = 0; sweep < 4 && worst > 1e-10; ++sweep) {
    info = LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', nsys, 1, a.data(), nsys,
                          ipiv.data(), residual.data(), nsys);
    if (info != 0) break;
    for (int r = 0; r < nsys; ++r) x[r] += residual[r];
    worst = compute_residual();
  }
  if (worst > 1e-8)
    throw SingularSystem("thin-plate fit failed to reproduce training data");

  RbfSurrogate s;
  s.dim_ = d;
  s.centers_.reserve(m);
  for (const auto& pt : training.points) s.centers_.push_back(pt.theta);
  s.rbf_weights_.assign(x.begin(), x.begin() + m);
  if (tail > 0) s.poly_weights_.assign(x.begin() + m, x.end());
  return s;
}

double RbfSurrogate::evaluate(const std::vector<double>& theta) const {
  if (static_cast<int>(theta.size()) != dim_)
    throw std::invalid_argument("evaluation point dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < centers_.size(); ++k)
    acc += rbf_weights_[k] * thin_plate(dist_sq(theta, centers_[k]));
  if (!poly_weights_.empty()) {
    acc += poly_weights_[0];
    for (int c = 0; c < dim_; ++c) acc += poly_weights_[c + 1] * theta[c];
  }
  return acc;
}

nlohmann::json RbfSurrogate::dump() const {
  return {{"basis", "thin_plate"},
          {"dim", dim_},
          {"centers", centers_},
          {"rbf_weights", rbf_weights_},
          {"poly_weights", poly_weights_}};
}

}  // namespace qsurr
