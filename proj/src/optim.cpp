#include "qsurr/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsurr/rng.hpp"

namespace qsurr {

bool BoundBox::contains(const std::vector<double>& theta) const {
  if (theta.size() != lower.size()) return false;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i] < lower[i] || theta[i] > upper[i]) return false;
  return true;
}

void BoundBox::clip(std::vector<double>& theta) const {
  for (std::size_t i = 0; i < theta.size(); ++i)
    theta[i] = std::clamp(theta[i], lower[i], upper[i]);
}

void BoundBox::validate() const {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("bound box needs matching nonempty lower/upper");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("bound box needs lower < upper");
}

BoundBox BoundBox::maxcut_default(int p) {
  const double hp = std::numbers::pi / 2.0, qp = std::numbers::pi / 4.0;
  BoundBox b;
  b.lower.assign(2 * p, 0.0);
  b.upper.assign(2 * p, 0.0);
  for (int i = 0; i < p; ++i) {
    b.lower[i] = -hp;
    b.upper[i] = hp;
    b.lower[p + i] = -qp;
    b.upper[p + i] = qp;
  }
  return b;
}

BoundBox BoundBox::heavy_hex_default(int p) {
  const double hp = std::numbers::pi / 2.0;
  BoundBox b;
  b.lower.assign(2 * p, -hp);
  b.upper.assign(2 * p, hp);
  return b;
}

namespace {

void check_finite(const std::vector<double>& values, const char* who) {
  for (double v : values)
    if (!std::isfinite(v))
      throw std::runtime_error(std::string(who) +
                               ": non-finite objective value encountered");
}

// Evaluations are independent; results land in preallocated slots.
void evaluate_all(const Objective& f,
                  const std::vector<std::vector<double>>& xs,
                  std::vector<double>& out) {
  const std::int64_t m = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < m; ++i) out[i] = f(xs[i]);
}

}  // namespace

OptimizerReport differential_evolution(const Objective& objective,
                                       const BoundBox& bounds,
                                       const DeConfig& config) {
  bounds.validate();
  const int d = bounds.dim();
  const int npop = config.npop > 0 ? config.npop : 20 * std::max(1, d / 2);
  if (npop < 4) throw std::invalid_argument("DE needs npop >= 4");
  if (config.mutation <= 0.0 || config.mutation >= 2.0)
    throw std::invalid_argument("DE mutation factor must be in (0, 2)");
  if (config.crossover < 0.0 || config.crossover > 1.0)
    throw std::invalid_argument("DE crossover rate must be in [0, 1]");

  Rng rng(config.seed);
  std::vector<std::vector<double>> pop(npop, std::vector<double>(d));
  for (auto& x : pop)
    for (int c = 0; c < d; ++c)
      x[c] = rng.uniform(bounds.lower[c], bounds.upper[c]);

  std::vector<double> fitness(npop);
  evaluate_all(objective, pop, fitness);
  check_finite(fitness, "differential_evolution");
  long long evaluations = npop;

  int best = static_cast<int>(
      std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
  std::vector<double> best_history{fitness[best]};

  OptimizerReport report;
  report.terminated_by = TerminationReason::max_gens;

  std::vector<std::vector<double>> trials(npop, std::vector<double>(d));
  std::vector<double> trial_fitness(npop);

  int gen = 0;
  for (gen = 1; gen <= config.max_gens; ++gen) {
    for (int i = 0; i < npop; ++i) {
      int r1, r2, r3;
      do r1 = static_cast<int>(rng.below(npop)); while (r1 == i);
      do r2 = static_cast<int>(rng.below(npop)); while (r2 == i || r2 == r1);
      do r3 = static_cast<int>(rng.below(npop));
      while (r3 == i || r3 == r1 || r3 == r2);
      const int jrand = static_cast<int>(rng.below(d));
      auto& u = trials[i];
      for (int c = 0; c < d; ++c) {
        if (c == jrand || rng.uniform() < config.crossover)
          u[c] = pop[r1][c] + config.mutation * (pop[r2][c] - pop[r3][c]);
        else
          u[c] = pop[i][c];
      }
      bounds.clip(u);
    }
    evaluate_all(objective, trials, trial_fitness);
    check_finite(trial_fitness, "differential_evolution");
    evaluations += npop;

    for (int i = 0; i < npop; ++i)
      if (trial_fitness[i] <= fitness[i]) {
        pop[i] = trials[i];
        fitness[i] = trial_fitness[i];
        if (fitness[i] < fitness[best]) best = i;
      }
    best_history.push_back(fitness[best]);

    if (gen >= config.gtol &&
        best_history[gen - config.gtol] - best_history[gen] < config.ftol) {
      report.terminated_by = TerminationReason::ftol_gtol;
      break;
    }
  }

  report.generations = std::min(gen, config.max_gens);
  report.evaluations = evaluations;
  report.best_theta = pop[best];
  report.best_value = fitness[best];
  report.best_history = std::move(best_history);
  return report;
}

OptimizerReport nelder_mead(const Objective& objective, const BoundBox& bounds,
                            const std::vector<double>& start, int max_iters) {
  bounds.validate();
  const int d = bounds.dim();
  if (static_cast<int>(start.size()) != d)
    throw std::invalid_argument("start point dimension mismatch");
  if (max_iters <= 0) max_iters = 400 * d;

  // Initial simplex: start plus one step along each axis, kept in the box.
  std::vector<std::vector<double>> simplex(d + 1, start);
  bounds.clip(simplex[0]);
  for (int c = 0; c < d; ++c) {
    double h = 0.1 * (bounds.upper[c] - bounds.lower[c]);
    if (simplex[c + 1][c] + h > bounds.upper[c]) h = -h;
    simplex[c + 1][c] += h;
    bounds.clip(simplex[c + 1]);
  }

  std::vector<double> fval(d + 1);
  for (int v = 0; v <= d; ++v) fval[v] = objective(simplex[v]);
  check_finite(fval, "nelder_mead");
  long long evaluations = d + 1;

  auto order = [&] {
    std::vector<int> idx(d + 1);
    for (int v = 0; v <= d; ++v) idx[v] = v;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return fval[a] < fval[b]; });
    std::vector<std::vector<double>> s2(d + 1);
    std::vector<double> f2(d + 1);
    for (int v = 0; v <= d; ++v) {
      s2[v] = simplex[idx[v]];
      f2[v] = fval[idx[v]];
    }
    simplex.swap(s2);
    fval.swap(f2);
  };
  auto probe = [&](const std::vector<double>& centroid, double coef) {
    std::vector<double> x(d);
    for (int c = 0; c < d; ++c)
      x[c] = centroid[c] + coef * (centroid[c] - simplex[d][c]);
    bounds.clip(x);
    return x;
  };

  int iter = 0;
  for (iter = 0; iter < max_iters; ++iter) {
    order();
    if (std::abs(fval[d] - fval[0]) <=
        1e-12 * (1.0 + std::abs(fval[0])) + 1e-14)
      break;

    std::vector<double> centroid(d, 0.0);
    for (int v = 0; v < d; ++v)
      for (int c = 0; c < d; ++c) centroid[c] += simplex[v][c] / d;

    const auto xr = probe(centroid, 1.0);  // reflection
    const double fr = objective(xr);
    ++evaluations;
    if (fr < fval[0]) {
      const auto xe = probe(centroid, 2.0);  // expansion
      const double fe = objective(xe);
      ++evaluations;
      simplex[d] = fe < fr ? xe : xr;
      fval[d] = std::min(fe, fr);
    } else if (fr < fval[d - 1]) {
      simplex[d] = xr;
      fval[d] = fr;
    } else {
      const auto xc = probe(centroid, fr < fval[d] ? 0.5 : -0.5);  // contraction
      const double fc = objective(xc);
      ++evaluations;
      if (fc < std::min(fr, fval[d])) {
        simplex[d] = xc;
        fval[d] = fc;
      } else {  // shrink toward the best vertex
        for (int v = 1; v <= d; ++v) {
          for (int c = 0; c < d; ++c)
            simplex[v][c] = simplex[0][c] + 0.5 * (simplex[v][c] - simplex[0][c]);
          bounds.clip(simplex[v]);
          fval[v] = objective(simplex[v]);
          ++evaluations;
        }
      }
    }
    if (!std::isfinite(fval[d]))
      throw std::runtime_error("nelder_mead: non-finite objective value encountered");
  }
  order();

  OptimizerReport report;
  report.best_theta = simplex[0];
  report.best_value = fval[0];
  report.generations = iter;
  report.evaluations = evaluations;
  report.terminated_by = iter < max_iters ? TerminationReason::ftol_gtol
                                          : TerminationReason::max_gens;
  return report;
}

OptimizerReport multistart_local(const Objective& objective,
                                 const BoundBox& bounds, int n_starts,
                                 std::uint64_t seed) {
  bounds.validate();
  if (n_starts < 1) throw std::invalid_argument("multistart needs n_starts >= 1");
  const int d = bounds.dim();
  Rng rng(seed);

  OptimizerReport best;
  long long evaluations = 0;
  int iterations = 0;
  for (int s = 0; s < n_starts; ++s) {
    std::vector<double> start(d);
    for (int c = 0; c < d; ++c)
      start[c] = rng.uniform(bounds.lower[c], bounds.upper[c]);
    auto report = nelder_mead(objective, bounds, start);
    evaluations += report.evaluations;
    iterations += report.generations;
    if (s == 0 || report.best_value < best.best_value) best = std::move(report);
  }
  best.evaluations = evaluations;
  best.generations = iterations;
  return best;
}

Objective rescale_objective(Objective objective, int n) {
  if (n < 1) throw std::invalid_argument("rescale needs n >= 1");
  return [objective = std::move(objective), n](const std::vector<double>& theta) {
    return objective(theta) / n;
  };
}

}  // namespace qsurr
