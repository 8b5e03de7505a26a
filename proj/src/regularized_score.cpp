#include "landau/regularized_score.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "landau/parallel.hpp"

namespace landau {
namespace {

// Below this unnormalized density the factorized sum loses relative
// precision to underflow and the log-sum-exp path is used instead.
constexpr double kDirectSumFloor = 1e-250;

double log_norm(int dim, double eps) {
  return -0.5 * dim * std::log(2.0 * std::numbers::pi * eps);
}

void require_positive_mass(const ParticleEnsemble& e) {
  for (double w : e.weights)
    if (w > 0.0) return;
  throw ZeroWeight("ensemble '" + e.species.label + "' has zero total weight");
}

// Tensor-product evaluation of the score for one query. e[k][a] holds
// exp(-(v_k - g_k[a])^2 / (2 eps)) and d[k][a] the offset v_k - g_k[a].
void score_2d(const QuadratureGrid& g, std::span<const double> L, const double* e0,
              const double* d0, const double* e1, const double* d1, double* out) {
  const int n = g.n;
  double f0 = 0.0, f1 = 0.0;
  for (int a = 0; a < n; ++a) {
    if (e0[a] == 0.0) continue;
    const double* row = L.data() + static_cast<std::size_t>(a) * n;
    double s = 0.0, t = 0.0;
    for (int b = 0; b < n; ++b) {
      const double el = e1[b] * row[b];
      s += el;
      t += d1[b] * el;
    }
    f0 += d0[a] * e0[a] * s;
    f1 += e0[a] * t;
  }
  out[0] = f0;
  out[1] = f1;
}

void score_3d(const QuadratureGrid& g, std::span<const double> L, const double* e0,
              const double* d0, const double* e1, const double* d1, const double* e2,
              const double* d2, double* out) {
  const int n = g.n;
  double f0 = 0.0, f1 = 0.0, f2 = 0.0;
  for (int a = 0; a < n; ++a) {
    if (e0[a] == 0.0) continue;
    double sa = 0.0, s1 = 0.0, s2 = 0.0;
    for (int b = 0; b < n; ++b) {
      if (e1[b] == 0.0) continue;
      const double* row = L.data() + (static_cast<std::size_t>(a) * n + b) * n;
      double s = 0.0, t = 0.0;
      for (int c = 0; c < n; ++c) {
        const double el = e2[c] * row[c];
        s += el;
        t += d2[c] * el;
      }
      sa += e1[b] * s;
      s1 += d1[b] * e1[b] * s;
      s2 += e1[b] * t;
    }
    f0 += d0[a] * e0[a] * sa;
    f1 += e0[a] * s1;
    f2 += e0[a] * s2;
  }
  out[0] = f0;
  out[1] = f1;
  out[2] = f2;
}

}  // namespace

double mollifier(std::span<const double> x, double eps) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::exp(log_norm(static_cast<int>(x.size()), eps) - r2 / (2.0 * eps));
}

std::vector<double> log_blob_density(const ParticleEnsemble& ensemble,
                                     std::span<const double> points) {
  require_positive_mass(ensemble);
  const int d = ensemble.dim;
  const double eps = ensemble.species.epsilon;
  const double inv2eps = 1.0 / (2.0 * eps);
  const double lnorm = log_norm(d, eps);
  const std::size_t N = ensemble.size();
  const std::size_t M = points.size() / d;

  // Only particles with positive weight contribute.
  std::vector<double> logw;
  std::vector<double> vel;
  logw.reserve(N);
  vel.reserve(N * d);
  for (std::size_t r = 0; r < N; ++r) {
    if (!(ensemble.weights[r] > 0.0)) continue;
    logw.push_back(std::log(ensemble.weights[r]));
    const auto v = ensemble.velocity(r);
    vel.insert(vel.end(), v.begin(), v.end());
  }
  const std::size_t K = logw.size();

  std::vector<double> out(M);
  parallel_for(M, [&](std::size_t begin, std::size_t end) {
    std::vector<double> expo(K);
    for (std::size_t m = begin; m < end; ++m) {
      const double* x = points.data() + m * d;
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < K; ++r) {
        const double* v = vel.data() + r * d;
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double dz = x[k] - v[k];
          r2 += dz * dz;
        }
        expo[r] = logw[r] - r2 * inv2eps;
        if (expo[r] > top) top = expo[r];
      }
      double sum = 0.0;
      for (std::size_t r = 0; r < K; ++r) sum += std::exp(expo[r] - top);
      out[m] = lnorm + top + std::log(sum);
    }
  });
  return out;
}

std::vector<double> blob_density(const ParticleEnsemble& ensemble,
                                 std::span<const double> points) {
  const int d = ensemble.dim;
  const double eps = ensemble.species.epsilon;
  const double inv2eps = 1.0 / (2.0 * eps);
  const double norm = std::exp(log_norm(d, eps));
  const std::size_t N = ensemble.size();
  const std::size_t M = points.size() / d;
  std::vector<double> out(M);
  parallel_for(M, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const double* x = points.data() + m * d;
      double sum = 0.0;
      for (std::size_t r = 0; r < N; ++r) {
        const double w = ensemble.weights[r];
        if (w == 0.0) continue;
        const double* v = ensemble.velocities.data() + r * d;
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
          const double dz = x[k] - v[k];
          r2 += dz * dz;
        }
        sum += w * std::exp(-r2 * inv2eps);
      }
      out[m] = norm * sum;
    }
  });
  return out;
}

std::vector<double> grid_log_density(const ParticleEnsemble& ensemble, const QuadratureGrid& grid) {
  require_positive_mass(ensemble);
  const int d = grid.dim;
  const int n = grid.n;
  const double eps = ensemble.species.epsilon;
  const double inv2eps = 1.0 / (2.0 * eps);
  const std::size_t M = grid.size();

  // psi factorizes over axes on the tensor grid:
  //   f~(x_ab) = C sum_r w_r E0[r][a] E1[r][b],  Ek[r][a] = exp(-(g_k[a] - v_rk)^2 / (2 eps)).
  std::vector<std::size_t> active;
  for (std::size_t r = 0; r < ensemble.size(); ++r)
    if (ensemble.weights[r] > 0.0) active.push_back(r);
  const std::size_t K = active.size();
  std::vector<double> factors(K * d * n);
  parallel_for(K, [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const auto v = ensemble.velocity(active[a]);
      for (int k = 0; k < d; ++k) {
        double* row = factors.data() + (a * d + k) * n;
        for (int c = 0; c < n; ++c) {
          const double off = grid.axes[k][c] - v[k];
          row[c] = std::exp(-off * off * inv2eps);
        }
      }
    }
  });

  // Rows of the output (first-axis index) are independent; each sums r ascending.
  const std::size_t row_len = M / n;
  std::vector<double> density(M, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      double* out = density.data() + a * row_len;
      for (std::size_t ar = 0; ar < K; ++ar) {
        const double* e = factors.data() + ar * d * n;
        const double c0 = ensemble.weights[active[ar]] * e[a];
        if (c0 == 0.0) continue;
        const double* e1 = e + n;
        if (d == 2) {
#pragma omp simd
          for (int b = 0; b < n; ++b) out[b] += c0 * e1[b];
        } else {
          const double* e2 = e + 2 * n;
          for (int b = 0; b < n; ++b) {
            const double c1 = c0 * e1[b];
            if (c1 == 0.0) continue;
            double* line = out + static_cast<std::size_t>(b) * n;
#pragma omp simd
            for (int c = 0; c < n; ++c) line[c] += c1 * e2[c];
          }
        }
      }
    }
  });

  const double lnorm = log_norm(d, eps);
  std::vector<double> out(M);
  std::vector<double> fallback_points;
  std::vector<std::size_t> fallback_index;
  for (std::size_t m = 0; m < M; ++m) {
    if (density[m] > kDirectSumFloor) {
      out[m] = lnorm + std::log(density[m]);
    } else {
      fallback_index.push_back(m);
      const auto c = grid.center(m);
      fallback_points.insert(fallback_points.end(), c.begin(), c.end());
    }
  }
  if (!fallback_index.empty()) {
    const auto exact = log_blob_density(ensemble, fallback_points);
    for (std::size_t k = 0; k < fallback_index.size(); ++k) out[fallback_index[k]] = exact[k];
  }
  return out;
}

std::vector<double> score_from_grid_log(const QuadratureGrid& grid, std::span<const double> log_density,
                                        double eps, std::span<const double> queries) {
  const int d = grid.dim;
  const int n = grid.n;
  const std::size_t Q = queries.size() / d;
  const double inv2eps = 1.0 / (2.0 * eps);
  // grad psi(x) = -(x / eps) psi(x)
  const double prefactor = -grid.cell_volume * std::exp(log_norm(d, eps)) / eps;

  std::vector<double> out(queries.size());
  parallel_for(Q, [&](std::size_t begin, std::size_t end) {
    std::vector<double> ebuf(static_cast<std::size_t>(d) * n);
    std::vector<double> dbuf(static_cast<std::size_t>(d) * n);
    for (std::size_t q = begin; q < end; ++q) {
      const double* v = queries.data() + q * d;
      for (int k = 0; k < d; ++k) {
        const auto& axis = grid.axes[k];
        for (int a = 0; a < n; ++a) {
          const double off = v[k] - axis[a];
          dbuf[k * n + a] = off;
          ebuf[k * n + a] = std::exp(-off * off * inv2eps);
        }
      }
      double* f = out.data() + q * d;
      if (d == 2) {
        score_2d(grid, log_density, ebuf.data(), dbuf.data(), ebuf.data() + n, dbuf.data() + n, f);
      } else {
        score_3d(grid, log_density, ebuf.data(), dbuf.data(), ebuf.data() + n, dbuf.data() + n,
                 ebuf.data() + 2 * n, dbuf.data() + 2 * n, f);
      }
      for (int k = 0; k < d; ++k) f[k] *= prefactor;
    }
  });
  return out;
}

std::vector<double> score(const ParticleEnsemble& ensemble, const QuadratureGrid& grid,
                          std::span<const double> queries) {
  const auto L = grid_log_density(ensemble, grid);
  return score_from_grid_log(grid, L, ensemble.species.epsilon, queries);
}

double discrete_entropy(const ParticleEnsemble& ensemble, const QuadratureGrid& grid) {
  const auto L = grid_log_density(ensemble, grid);
  double sum = 0.0;
  for (double l : L) sum += std::exp(l) * l;
  return grid.cell_volume * sum;
}

}  // namespace landau
