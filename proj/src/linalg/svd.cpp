// Copyright 2026 The GUM Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gum/linalg/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gum/errors.hpp"

namespace gum::linalg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxJacobiSweeps = 80;

// Column-major scratch matrix; the SVD kernels work column by column.
struct ColumnMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  ColumnMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), data(r * c, 0.0) {}

  double* col(std::size_t j) { return data.data() + j * rows; }
  const double* col(std::size_t j) const { return data.data() + j * rows; }
  double& at(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  double at(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
};

ColumnMatrix to_columns(const DenseMatrix& m) {
  ColumnMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c.at(i, j) = m(i, j);
  return c;
}

ColumnMatrix identity_columns(std::size_t rows, std::size_t cols) {
  ColumnMatrix c(rows, cols);
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) c.at(i, i) = 1.0;
  return c;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double norm2(const double* x, std::size_t n) {
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(x[i]));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x[i] / scale;
    s += y * y;
  }
  return scale * std::sqrt(s);
}

// x' = c x + s y; y' = -s x + c y
void rotate(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = -s * xi + c * yi;
  }
}

struct Givens {
  double c;
  double s;
  double r;
};

// (c, s) with -s*y + c*z = 0 and c*y + s*z = r >= 0.
Givens givens(double y, double z) {
  if (z == 0.0) return {y >= 0.0 ? 1.0 : -1.0, 0.0, std::abs(y)};
  const double r = std::hypot(y, z);
  return {y / r, z / r, r};
}

// Re-orthonormalizes u's columns in order with two passes of modified
// Gram-Schmidt. A column that collapses (zero or numerically dependent) is
// replaced by the first coordinate vector that survives orthogonalization.
void orthonormalize_columns(ColumnMatrix& u) {
  const std::size_t m = u.rows;
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < u.cols; ++j) {
    double* uj = u.col(j);
    const double original = norm2(uj, m);
    auto project_out = [&] {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          const double* uk = u.col(k);
          const double p = dot(uk, uj, m);
          for (std::size_t i = 0; i < m; ++i) uj[i] -= p * uk[i];
        }
      }
    };
    if (original > 0.0) {
      for (std::size_t i = 0; i < m; ++i) uj[i] /= original;
      project_out();
    }
    double n = norm2(uj, m);
    while (n < 0.5) {
      if (next_basis >= m) {
        throw InvalidInput("svd: failed to complete orthonormal basis");
      }
      std::fill(uj, uj + m, 0.0);
      uj[next_basis++] = 1.0;
      project_out();
      n = norm2(uj, m);
    }
    for (std::size_t i = 0; i < m; ++i) uj[i] /= n;
  }
}

// Orders triplets by nonincreasing singular value (stable), applies the sign
// convention, and packs the result. `u` is m x k, `v` is n x k.
SvdResult finalize(ColumnMatrix u, std::vector<double> s, ColumnMatrix v) {
  const std::size_t k = s.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

  ColumnMatrix us(u.rows, k);
  ColumnMatrix vs(v.rows, k);
  std::vector<double> ss(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::copy_n(u.col(order[j]), u.rows, us.col(j));
    std::copy_n(v.col(order[j]), v.rows, vs.col(j));
    ss[j] = s[order[j]];
  }
  orthonormalize_columns(us);

  SvdResult out{DenseMatrix(us.rows, k), std::move(ss), DenseMatrix(vs.rows, k)};
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < us.rows; ++i)
      if (std::abs(us.at(i, j)) > std::abs(us.at(arg, j))) arg = i;
    const double sign = us.at(arg, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < us.rows; ++i) out.u(i, j) = sign * us.at(i, j);
    for (std::size_t i = 0; i < vs.rows; ++i) out.v(i, j) = sign * vs.at(i, j);
  }
  return out;
}

// Swaps the roles of u and v for a result computed on the transpose. The
// sign convention is defined on u, so it is re-applied.
SvdResult transpose_result(SvdResult t) {
  ColumnMatrix u(t.v.rows(), t.k());
  ColumnMatrix v(t.u.rows(), t.k());
  for (std::size_t j = 0; j < t.k(); ++j) {
    for (std::size_t i = 0; i < t.v.rows(); ++i) u.at(i, j) = t.v(i, j);
    for (std::size_t i = 0; i < t.u.rows(); ++i) v.at(i, j) = t.u(i, j);
  }
  return finalize(std::move(u), std::move(t.s), std::move(v));
}

void require_valid(const DenseMatrix& m, const char* what) {
  require_finite(m, what);
}

// Jacobi on a tall (rows >= cols) matrix.
SvdResult jacobi_tall(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  ColumnMatrix w = to_columns(m);
  ColumnMatrix v = identity_columns(n, n);
  const double tol = kEps * static_cast<double>(rows);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* wp = w.col(p);
        double* wq = w.col(q);
        const double alpha = dot(wp, wp, rows);
        const double beta = dot(wq, wq, rows);
        const double gamma = dot(wp, wq, rows);
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // Sign flip relative to rotate(): w_p' = c w_p - s w_q.
        rotate(wp, wq, rows, c, -s);
        rotate(v.col(p), v.col(q), n, c, -s);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) {
    s[j] = norm2(w.col(j), rows);
    if (s[j] > 0.0) {
      double* wj = w.col(j);
      for (std::size_t i = 0; i < rows; ++i) wj[i] /= s[j];
    }
  }
  return finalize(std::move(w), std::move(s), std::move(v));
}

// Householder reflector H = I - beta v v^T mapping x to alpha e_1.
struct Householder {
  std::vector<double> v;
  double beta = 0.0;
  double alpha = 0.0;
};

Householder make_householder(std::vector<double> x) {
  Householder h;
  const double norm = norm2(x.data(), x.size());
  if (norm == 0.0) {
    h.v = std::move(x);
    return h;
  }
  h.alpha = x[0] > 0.0 ? -norm : norm;
  x[0] -= h.alpha;
  const double vv = dot(x.data(), x.data(), x.size());
  h.beta = vv > 0.0 ? 2.0 / vv : 0.0;
  h.v = std::move(x);
  return h;
}

// Golub-Kahan-Reinsch on a tall (rows >= cols) matrix.
SvdResult golub_kahan_tall(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  ColumnMatrix a = to_columns(m);
  std::vector<Householder> left(n);
  std::vector<Householder> right(n > 1 ? n - 1 : 0);
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n > 1 ? n - 1 : 0, 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    // Left reflector annihilates a[k+1:, k].
    std::vector<double> x(a.col(k) + k, a.col(k) + rows);
    Householder h = make_householder(std::move(x));
    if (h.beta != 0.0) {
      for (std::size_t j = k; j < n; ++j) {
        double* col = a.col(j) + k;
        const double p = h.beta * dot(h.v.data(), col, rows - k);
        for (std::size_t i = 0; i < rows - k; ++i) col[i] -= p * h.v[i];
      }
    }
    d[k] = a.at(k, k);
    left[k] = std::move(h);

    if (k + 1 < n) {
      // Right reflector annihilates a[k, k+2:].
      std::vector<double> y(n - k - 1);
      for (std::size_t j = k + 1; j < n; ++j) y[j - k - 1] = a.at(k, j);
      Householder g = make_householder(std::move(y));
      if (g.beta != 0.0) {
        for (std::size_t i = k; i < rows; ++i) {
          double p = 0.0;
          for (std::size_t j = k + 1; j < n; ++j) p += a.at(i, j) * g.v[j - k - 1];
          p *= g.beta;
          for (std::size_t j = k + 1; j < n; ++j) a.at(i, j) -= p * g.v[j - k - 1];
        }
      }
      e[k] = a.at(k, k + 1);
      right[k] = std::move(g);
    }
  }

  // U = H_0 ... H_{n-1} [I_n; 0], V = G_0 ... G_{n-2}.
  ColumnMatrix u = identity_columns(rows, n);
  for (std::size_t kk = n; kk-- > 0;) {
    const Householder& h = left[kk];
    if (h.beta == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double* col = u.col(j) + kk;
      const double p = h.beta * dot(h.v.data(), col, rows - kk);
      for (std::size_t i = 0; i < rows - kk; ++i) col[i] -= p * h.v[i];
    }
  }
  ColumnMatrix v = identity_columns(n, n);
  for (std::size_t kk = right.size(); kk-- > 0;) {
    const Householder& g = right[kk];
    if (g.beta == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double* col = v.col(j) + kk + 1;
      const double p = g.beta * dot(g.v.data(), col, n - kk - 1);
      for (std::size_t i = 0; i < n - kk - 1; ++i) col[i] -= p * g.v[i];
    }
  }

  // Implicit-shift QR on the upper bidiagonal (d, e).
  double bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bnorm = std::max(bnorm, std::abs(d[i]) + (i + 1 < n ? std::abs(e[i]) : 0.0));
  }
  const double zero_tol = kEps * bnorm;
  const std::size_t max_iter = 100 * n * n + 100;
  std::size_t iter = 0;

  std::size_t hi = n == 0 ? 0 : n - 1;
  while (hi > 0) {
    for (std::size_t i = 0; i < hi; ++i) {
      if (std::abs(e[i]) <= kEps * (std::abs(d[i]) + std::abs(d[i + 1])) ||
          std::abs(e[i]) <= std::numeric_limits<double>::min()) {
        e[i] = 0.0;
      }
    }
    if (e[hi - 1] == 0.0) {
      --hi;
      continue;
    }
    std::size_t lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0) --lo;

    if (++iter > max_iter) {
      throw InvalidInput("svd_golub_kahan: no convergence");
    }

    // A zero on the diagonal of the unreduced block splits it after
    // rotating its superdiagonal neighbour away.
    bool split = false;
    for (std::size_t i = lo; i <= hi; ++i) {
      if (std::abs(d[i]) > zero_tol) continue;
      d[i] = 0.0;
      split = true;
      if (i < hi) {
        double f = e[i];
        e[i] = 0.0;
        for (std::size_t j = i + 1; j <= hi && f != 0.0; ++j) {
          const Givens g = givens(d[j], f);
          d[j] = g.r;
          rotate(u.col(j), u.col(i), rows, g.c, g.s);
          if (j < hi) {
            f = -g.s * e[j];
            e[j] = g.c * e[j];
          }
        }
      } else {
        double f = e[hi - 1];
        e[hi - 1] = 0.0;
        for (std::size_t j = hi; j-- > lo && f != 0.0;) {
          const Givens g = givens(d[j], f);
          d[j] = g.r;
          rotate(v.col(j), v.col(hi), n, g.c, g.s);
          if (j > lo) {
            f = -g.s * e[j - 1];
            e[j - 1] = g.c * e[j - 1];
          }
        }
      }
      break;
    }
    if (split) continue;

    // Wilkinson shift from the trailing 2x2 block of B^T B.
    const double dm = d[hi - 1];
    const double dn = d[hi];
    const double em = e[hi - 1];
    const double emm = hi - 1 > lo ? e[hi - 2] : 0.0;
    const double t11 = dm * dm + emm * emm;
    const double t12 = dm * em;
    const double t22 = dn * dn + em * em;
    const double delta = 0.5 * (t11 - t22);
    double mu = t22;
    if (t12 != 0.0) {
      const double denom =
          delta + (delta >= 0.0 ? 1.0 : -1.0) * std::hypot(delta, t12);
      mu = t22 - t12 * t12 / denom;
    }

    double y = d[lo] * d[lo] - mu;
    double z = d[lo] * e[lo];
    for (std::size_t k = lo; k < hi; ++k) {
      const Givens r1 = givens(y, z);
      if (k > lo) e[k - 1] = r1.r;
      double dk = d[k];
      double ek = e[k];
      const double dk1 = d[k + 1];
      d[k] = r1.c * dk + r1.s * ek;
      e[k] = -r1.s * dk + r1.c * ek;
      const double bulge = r1.s * dk1;
      d[k + 1] = r1.c * dk1;
      rotate(v.col(k), v.col(k + 1), n, r1.c, r1.s);

      const Givens r2 = givens(d[k], bulge);
      d[k] = r2.r;
      ek = e[k];
      dk = d[k + 1];
      e[k] = r2.c * ek + r2.s * dk;
      d[k + 1] = -r2.s * ek + r2.c * dk;
      rotate(u.col(k), u.col(k + 1), rows, r2.c, r2.s);
      if (k + 1 < hi) {
        z = r2.s * e[k + 1];
        e[k + 1] = r2.c * e[k + 1];
        y = e[k];
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (d[j] < 0.0) {
      d[j] = -d[j];
      double* vj = v.col(j);
      for (std::size_t i = 0; i < n; ++i) vj[i] = -vj[i];
    }
  }
  return finalize(std::move(u), std::move(d), std::move(v));
}

}  // namespace

DenseMatrix SvdResult::reconstruct() const {
  DenseMatrix us = u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < k(); ++j) us(i, j) *= s[j];
  return matmul_nt(us, v);
}

SvdResult svd_jacobi(const DenseMatrix& m) {
  require_valid(m, "svd_jacobi");
  if (m.rows() >= m.cols()) return jacobi_tall(m);
  return transpose_result(jacobi_tall(m.transpose()));
}

SvdResult svd_golub_kahan(const DenseMatrix& m) {
  require_valid(m, "svd_golub_kahan");
  if (m.rows() >= m.cols()) return golub_kahan_tall(m);
  return transpose_result(golub_kahan_tall(m.transpose()));
}

SvdResult svd_thin(const DenseMatrix& m) {
  if (std::min(m.rows(), m.cols()) <= kJacobiMaxDim) return svd_jacobi(m);
  return svd_golub_kahan(m);
}

}  // namespace gum::linalg
