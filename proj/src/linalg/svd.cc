// src/linalg/svd.cc

// Copyright 2026  The tiny-transducer Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tt/svd.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tt {

namespace {

using Column = std::vector<double>;

double Dot(const Column &a, const Column &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// One-sided Jacobi on a tall (rows >= cols) matrix given as columns.
// On return cols[j] = sigma_j * u_j and v holds the right singular vectors
// as columns.
void JacobiSweeps(std::vector<Column> *cols, std::vector<Column> *v) {
  const std::size_t n = cols->size();
  const double eps = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Column &ap = (*cols)[p], &aq = (*cols)[q];
        double alpha = Dot(ap, ap), beta = Dot(aq, aq), gamma = Dot(ap, aq);
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = (zeta >= 0 ? 1.0 : -1.0) /
                   (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (std::size_t i = 0; i < ap.size(); ++i) {
          double x = ap[i], y = aq[i];
          ap[i] = c * x - s * y;
          aq[i] = s * x + c * y;
        }
        Column &vp = (*v)[p], &vq = (*v)[q];
        for (std::size_t i = 0; i < vp.size(); ++i) {
          double x = vp[i], y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
}

// Replaces the columns flagged in `null` by unit vectors orthogonal to every
// other column (Gram-Schmidt over the standard basis).
void CompleteBasis(std::vector<Column> *u, const std::vector<bool> &null) {
  const std::size_t m = u->empty() ? 0 : (*u)[0].size();
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < u->size(); ++j) {
    if (!null[j]) continue;
    while (next_basis < m) {
      Column e(m, 0.0);
      e[next_basis++] = 1.0;
      // Twice is enough for numerical orthogonality.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < u->size(); ++k) {
          if (k == j || (null[k] && k > j)) continue;
          double d = Dot(e, (*u)[k]);
          for (std::size_t i = 0; i < m; ++i) e[i] -= d * (*u)[k][i];
        }
      }
      double norm = std::sqrt(Dot(e, e));
      if (norm > 1e-6) {
        for (double &x : e) x /= norm;
        (*u)[j] = std::move(e);
        break;
      }
    }
  }
}

SvdFactors TallSvd(const Matrix &m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Column> a(cols, Column(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a[c][r] = m(r, c);
  std::vector<Column> v(cols, Column(cols, 0.0));
  for (std::size_t c = 0; c < cols; ++c) v[c][c] = 1.0;

  JacobiSweeps(&a, &v);

  std::vector<double> sigma(cols);
  for (std::size_t c = 0; c < cols; ++c) sigma[c] = std::sqrt(Dot(a[c], a[c]));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return sigma[x] > sigma[y];
  });

  double smax = cols ? sigma[order[0]] : 0.0;
  std::vector<Column> u(cols);
  std::vector<bool> null(cols, false);
  SvdFactors f;
  f.s.resize(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::size_t src = order[j];
    f.s[j] = sigma[src];
    if (sigma[src] <= smax * 1e-13 || sigma[src] == 0.0) {
      null[j] = true;
      u[j] = Column(rows, 0.0);
    } else {
      u[j] = a[src];
      for (double &x : u[j]) x /= sigma[src];
    }
  }
  CompleteBasis(&u, null);

  f.u = Matrix(rows, cols);
  f.vt = Matrix(cols, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t r = 0; r < rows; ++r)
      f.u(r, j) = static_cast<float>(u[j][r]);
    for (std::size_t c = 0; c < cols; ++c)
      f.vt(j, c) = static_cast<float>(v[order[j]][c]);
  }
  return f;
}

}  // namespace

SvdFactors Svd(const Matrix &m) {
  if (m.empty()) throw ShapeError("Svd: empty matrix");
  if (m.rows() >= m.cols()) return TallSvd(m);
  SvdFactors t = TallSvd(m.Transpose());
  SvdFactors f;
  f.u = t.vt.Transpose();
  f.s = std::move(t.s);
  f.vt = t.u.Transpose();
  return f;
}

SvdFactors Truncate(const SvdFactors &f, std::size_t k) {
  if (k > f.rank()) throw ShapeError("Truncate: k exceeds rank");
  SvdFactors out;
  out.u = Matrix(f.u.rows(), k);
  out.vt = Matrix(k, f.vt.cols());
  out.s.assign(f.s.begin(), f.s.begin() + k);
  for (std::size_t r = 0; r < f.u.rows(); ++r)
    for (std::size_t j = 0; j < k; ++j) out.u(r, j) = f.u(r, j);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < f.vt.cols(); ++c) out.vt(j, c) = f.vt(j, c);
  return out;
}

Matrix Reconstruct(const SvdFactors &f) {
  Matrix out(f.u.rows(), f.vt.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < f.rank(); ++j)
        acc += static_cast<double>(f.u(r, j)) * f.s[j] * f.vt(j, c);
      out(r, c) = static_cast<float>(acc);
    }
  }
  return out;
}

std::size_t RankForEnergy(const std::vector<double> &s, double energy) {
  if (!(energy > 0.0 && energy <= 1.0))
    throw DomainError("RankForEnergy: energy must lie in (0, 1]");
  double total = 0.0;
  for (double x : s) total += x * x;
  if (s.empty()) return 0;
  if (total == 0.0) return 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    acc += s[k] * s[k];
    // Relative slack absorbs rounding in the running sum when energy = 1.
    if (acc >= energy * total * (1.0 - 1e-12)) return k + 1;
  }
  return s.size();
}

}  // namespace tt
