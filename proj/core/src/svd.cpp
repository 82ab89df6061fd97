#include "hsl/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hsl {

namespace {

constexpr double kPairTol = 1e-14;
constexpr int kMaxSweeps = 64;

// Hestenes one-sided Jacobi on a tall matrix a (rows >= cols). Works on
// t = a^T so that each column of a is a contiguous row. Rotations that
// orthogonalize rows of t are mirrored into vt (starts as identity), which
// ends up holding V^T.
struct JacobiState {
  DenseMatrix t;   // cols x rows, row i = column i of a
  DenseMatrix vt;  // cols x cols
  std::vector<double> sq_norms;
};

void jacobi_orthogonalize(JacobiState& st) {
  const std::size_t n = st.t.rows();
  const std::size_t m = st.t.cols();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    // Norms drift under the incremental updates; refresh each sweep.
    double scale_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      st.sq_norms[i] = dot({st.t.row(i), m}, {st.t.row(i), m});
      scale_sq = std::max(scale_sq, st.sq_norms[i]);
    }
    if (scale_sq == 0.0) return;
    // Rows this far below the dominant one are cancellation residue; pairing
    // them keeps producing junk rotations that never settle.
    const double zero_floor = 1e-30 * scale_sq;

    std::size_t rotations = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = st.sq_norms[i];
        const double beta = st.sq_norms[j];
        if (alpha <= zero_floor || beta <= zero_floor) continue;
        const double ab = alpha * beta;
        double* ti = st.t.row(i);
        double* tj = st.t.row(j);
        const double g = dot({ti, m}, {tj, m});
        if (std::abs(g) <= kPairTol * std::sqrt(ab)) continue;

        const double zeta = (beta - alpha) / (2.0 * g);
        const double tan =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cos = 1.0 / std::sqrt(1.0 + tan * tan);
        const double sin = cos * tan;

        for (std::size_t c = 0; c < m; ++c) {
          const double x = ti[c];
          const double y = tj[c];
          ti[c] = cos * x - sin * y;
          tj[c] = sin * x + cos * y;
        }
        double* vi = st.vt.row(i);
        double* vj = st.vt.row(j);
        for (std::size_t c = 0; c < n; ++c) {
          const double x = vi[c];
          const double y = vj[c];
          vi[c] = cos * x - sin * y;
          vj[c] = sin * x + cos * y;
        }
        st.sq_norms[i] = cos * cos * alpha - 2.0 * cos * sin * g + sin * sin * beta;
        st.sq_norms[j] = sin * sin * alpha + 2.0 * cos * sin * g + cos * cos * beta;
        ++rotations;
      }
    }
    if (rotations == 0) return;
  }
  throw std::runtime_error("svd: Jacobi sweeps did not converge within cap");
}

// Fill U columns whose singular value vanished with vectors orthonormal to
// the columns already present, so U keeps full orthonormal width.
void complete_basis(DenseMatrix& u, std::size_t from_col) {
  const std::size_t m = u.rows();
  const std::size_t r = u.cols();
  std::size_t axis = 0;
  for (std::size_t c = from_col; c < r; ++c) {
    while (true) {
      if (axis >= m) throw std::runtime_error("svd: basis completion exhausted axes");
      std::vector<double> v(m, 0.0);
      v[axis] = 1.0;
      ++axis;
      for (std::size_t b = 0; b < c; ++b) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += u(i, b) * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= proj * u(i, b);
      }
      const double nrm = vector_l2_norm(v);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) u(i, c) = v[i] / nrm;
        break;
      }
    }
  }
}

SvdResult svd_tall(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  JacobiState st{transpose(a), DenseMatrix::identity(n), std::vector<double>(n, 0.0)};
  jacobi_orthogonalize(st);

  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i)
    sigma[i] = vector_l2_norm({st.t.row(i), m});

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out;
  out.singular_values.resize(n);
  out.U = DenseMatrix(m, n);
  out.Vt = DenseMatrix(n, n);

  const double sigma_max = sigma[order[0]];
  const double rank_tol = sigma_max * 1e-13 * static_cast<double>(std::max(m, n));
  std::size_t effective = n;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.singular_values[c] = sigma[src];
    const double* vrow = st.vt.row(src);
    std::copy(vrow, vrow + n, out.Vt.row(c));
    if (sigma[src] > rank_tol) {
      const double* trow = st.t.row(src);
      for (std::size_t i = 0; i < m; ++i) out.U(i, c) = trow[i] / sigma[src];
    } else if (effective == n) {
      effective = c;
    }
  }
  if (effective < n) complete_basis(out.U, effective);
  return out;
}

}  // namespace

DenseMatrix SvdResult::reconstruct() const { return truncated(singular_values.size()); }

DenseMatrix SvdResult::truncated(std::size_t k) const {
  k = std::min(k, singular_values.size());
  DenseMatrix m(U.rows(), Vt.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double* mi = m.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      const double w = U(i, c) * singular_values[c];
      if (w == 0.0) continue;
      const double* v = Vt.row(c);
      for (std::size_t j = 0; j < m.cols(); ++j) mi[j] += w * v[j];
    }
  }
  return m;
}

SvdResult svd(const DenseMatrix& m) {
  if (m.empty()) throw std::invalid_argument("svd: empty matrix");
  if (m.rows() >= m.cols()) return svd_tall(m);
  // m = (m^T)^T = V' S U'^T for m^T = U' S V'^T.
  SvdResult t = svd_tall(transpose(m));
  SvdResult out;
  out.singular_values = std::move(t.singular_values);
  out.U = transpose(t.Vt);
  out.Vt = transpose(t.U);
  return out;
}

std::vector<double> singular_values(const DenseMatrix& m) {
  if (m.empty()) throw std::invalid_argument("svd: empty matrix");
  const DenseMatrix& a = m;
  JacobiState st{m.rows() >= m.cols() ? transpose(a) : a,
                 DenseMatrix::identity(std::min(m.rows(), m.cols())),
                 std::vector<double>(std::min(m.rows(), m.cols()), 0.0)};
  jacobi_orthogonalize(st);
  std::vector<double> sigma(st.t.rows());
  for (std::size_t i = 0; i < sigma.size(); ++i)
    sigma[i] = vector_l2_norm({st.t.row(i), st.t.cols()});
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

}  // namespace hsl
