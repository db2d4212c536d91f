#pragma once

#include "atlas/scalar.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace atlas {

inline constexpr double kDefaultEps = 1e-9;

// Dense symmetric matrix over a single scalar backend.  Symmetry is enforced
// on construction; the rational backend requires it exactly, the float
// backend symmetrizes after checking the defect against `eps`.
template <typename Scalar>
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(MatX<Scalar> m, double eps = kDefaultEps) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw std::invalid_argument("symmetric matrix must be square of order >= 1");
    if constexpr (scalar_traits<Scalar>::is_exact) {
      for (Eigen::Index i = 0; i < m_.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
          if (m_(i, j) != m_(j, i)) throw std::invalid_argument("matrix is not symmetric");
    } else {
      const double scale = std::max(1.0, m_.template lpNorm<Eigen::Infinity>());
      for (Eigen::Index i = 0; i < m_.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
          if (std::abs(m_(i, j) - m_(j, i)) > eps * scale)
            throw std::invalid_argument("matrix is not symmetric");
      m_ = ((m_ + m_.transpose()) / Scalar(2)).eval();
    }
  }

  static SymmetricMatrix Zero(int order) {
    return SymmetricMatrix(MatX<Scalar>::Zero(order, order));
  }
  static SymmetricMatrix Identity(int order) {
    return SymmetricMatrix(MatX<Scalar>::Identity(order, order));
  }

  int order() const { return static_cast<int>(m_.rows()); }
  const MatX<Scalar>& mat() const { return m_; }
  const Scalar& operator()(int i, int j) const { return m_(i, j); }

  Scalar form(const VecX<Scalar>& v, const VecX<Scalar>& w) const {
    if (v.size() != m_.rows() || w.size() != m_.rows())
      throw std::invalid_argument("vector dimension does not match matrix order");
    return v.dot(m_ * w);
  }

  // Largest absolute entry; used to scale float tolerances.
  double abs_scale() const {
    double s = 0;
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = 0; j < m_.cols(); ++j) s = std::max(s, std::abs(to_double(m_(i, j))));
    return s;
  }

 private:
  MatX<Scalar> m_;
};

using SymmetricMatrixQ = SymmetricMatrix<Rat>;
using SymmetricMatrixD = SymmetricMatrix<double>;

struct Inertia {
  int n_pos = 0;
  int n_neg = 0;
  int n_zero = 0;

  bool operator==(const Inertia&) const = default;
};

using IndexSet = std::vector<int>;  // sorted, distinct

namespace detail {

// Symmetric congruence reduction (diagonal pivots with 2x2 blocks when all
// candidate diagonal pivots vanish).  Exact on rationals; also returns the
// congruence transform and a direction of positive form value when one exists.
struct CongruenceResult {
  Inertia inertia;
  MatQ transform;  // columns form the reducing basis
  std::optional<VecQ> positive_direction;
};

inline CongruenceResult congruence_reduce(const MatQ& input) {
  const int r = static_cast<int>(input.rows());
  MatQ a = input;
  MatQ s = MatQ::Identity(r, r);
  std::vector<char> active(r, 1);
  CongruenceResult out;
  out.transform = MatQ::Identity(r, r);

  int remaining = r;
  while (remaining > 0) {
    int piv = -1;
    for (int i = 0; i < r; ++i)
      if (active[i] && a(i, i) != 0) {
        piv = i;
        break;
      }
    if (piv >= 0) {
      const Rat d = a(piv, piv);
      if (d > 0) {
        ++out.inertia.n_pos;
        if (!out.positive_direction) out.positive_direction = s.col(piv);
      } else {
        ++out.inertia.n_neg;
      }
      const VecQ col = a.col(piv);
      for (int j = 0; j < r; ++j) {
        if (!active[j] || j == piv || col(j) == 0) continue;
        const Rat f = col(j) / d;
        for (int k = 0; k < r; ++k)
          if (active[k] && k != piv) a(j, k) -= f * col(k);
        s.col(j) -= f * s.col(piv);
      }
      for (int k = 0; k < r; ++k) {
        if (k == piv) continue;
        a(piv, k) = 0;
        a(k, piv) = 0;
      }
      active[piv] = 0;
      --remaining;
      continue;
    }

    // No nonzero diagonal pivot: look for an off-diagonal 2x2 block.
    int bi = -1, bj = -1;
    for (int i = 0; i < r && bi < 0; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < r; ++j)
        if (active[j] && a(i, j) != 0) {
          bi = i;
          bj = j;
          break;
        }
    }
    if (bi < 0) {
      out.inertia.n_zero += remaining;
      break;
    }
    const Rat alpha = a(bi, bj);  // block [[0, alpha], [alpha, 0]], det < 0
    ++out.inertia.n_pos;
    ++out.inertia.n_neg;
    if (!out.positive_direction)
      out.positive_direction = (s.col(bi) + (alpha > 0 ? Rat(1) : Rat(-1)) * s.col(bj)).eval();
    const VecQ ci = a.col(bi);
    const VecQ cj = a.col(bj);
    for (int k = 0; k < r; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const Rat p = cj(k) / alpha;
      const Rat q = ci(k) / alpha;
      if (p == 0 && q == 0) continue;
      for (int l = 0; l < r; ++l)
        if (active[l] && l != bi && l != bj) a(k, l) -= p * ci(l) + q * cj(l);
      s.col(k) -= p * s.col(bi) + q * s.col(bj);
    }
    for (int k = 0; k < r; ++k) {
      if (k != bi) { a(bi, k) = 0; a(k, bi) = 0; }
      if (k != bj) { a(bj, k) = 0; a(k, bj) = 0; }
    }
    active[bi] = active[bj] = 0;
    remaining -= 2;
  }
  out.transform = s;
  return out;
}

}  // namespace detail

// All eigenvalues of a float symmetric matrix by cyclic Jacobi rotations,
// sorted ascending.  Independent of Eigen's eigensolver so it can serve as a
// cross-check.
inline std::vector<double> jacobi_eigenvalues(const SymmetricMatrixD& m,
                                              double eps = kDefaultEps,
                                              int max_sweeps = 100) {
  MatX<double> a = m.mat();
  const int r = m.order();
  const double scale = std::max(1.0, m.abs_scale());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= eps * scale) {
      std::vector<double> ev(r);
      for (int i = 0; i < r; ++i) ev[i] = a(i, i);
      std::sort(ev.begin(), ev.end());
      return ev;
    }
    for (int p = 0; p < r; ++p) {
      for (int q = p + 1; q < r; ++q) {
        if (a(p, q) == 0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (int k = 0; k < r; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < r; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  throw std::runtime_error("jacobi_eigenvalues: no convergence within sweep cap");
}

// Counts of positive/negative/zero eigenvalues.  Exact congruence reduction
// on the rational backend; Jacobi eigenvalues with an eps zero-band (relative
// to the largest absolute entry) on the float backend.
template <typename Scalar>
Inertia inertia(const SymmetricMatrix<Scalar>& m, double eps = kDefaultEps) {
  if constexpr (scalar_traits<Scalar>::is_exact) {
    (void)eps;
    return detail::congruence_reduce(m.mat()).inertia;
  } else {
    const double scale = m.abs_scale();
    Inertia in;
    if (scale == 0) {
      in.n_zero = m.order();
      return in;
    }
    for (double ev : jacobi_eigenvalues(m, eps)) {
      if (std::abs(ev) <= eps * scale)
        ++in.n_zero;
      else if (ev > 0)
        ++in.n_pos;
      else
        ++in.n_neg;
    }
    return in;
  }
}

// (OPE): at most one positive eigenvalue.
template <typename Scalar>
bool check_ope(const SymmetricMatrix<Scalar>& m, double eps = kDefaultEps) {
  return inertia(m, eps).n_pos <= 1;
}

// Indices whose row contains a nonzero entry.
template <typename Scalar>
IndexSet support(const SymmetricMatrix<Scalar>& m, double eps = kDefaultEps) {
  IndexSet out;
  const int r = m.order();
  const double scale = std::max(1.0, m.abs_scale());
  for (int i = 0; i < r; ++i) {
    bool nonzero = false;
    for (int j = 0; j < r && !nonzero; ++j) {
      if constexpr (scalar_traits<Scalar>::is_exact)
        nonzero = m(i, j) != 0;
      else
        nonzero = std::abs(m(i, j)) > eps * scale;
    }
    if (nonzero) out.push_back(i);
  }
  return out;
}

// (Irr): the graph on supp(M) with edges {i,j : M_ij != 0} is connected.
// Empty support counts as irreducible.
template <typename Scalar>
bool irreducible_on_support(const SymmetricMatrix<Scalar>& m, double eps = kDefaultEps) {
  const IndexSet supp = support(m, eps);
  if (supp.empty()) return true;
  const double scale = std::max(1.0, m.abs_scale());
  auto connected = [&](int i, int j) {
    if constexpr (scalar_traits<Scalar>::is_exact)
      return m(i, j) != 0;
    else
      return std::abs(m(i, j)) > eps * scale;
  };
  std::vector<int> stack{supp.front()};
  std::vector<char> seen(m.order(), 0);
  seen[supp.front()] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j : supp) {
      if (seen[j] || !connected(i, j)) continue;
      seen[j] = 1;
      ++reached;
      stack.push_back(j);
    }
  }
  return reached == static_cast<int>(supp.size());
}

// (Hyp) for a single pair: <v,Mw>^2 >= <v,Mv><w,Mw>, vacuously true unless
// <w,Mw> > 0.
template <typename Scalar>
bool check_hyp_pair(const SymmetricMatrix<Scalar>& m, const VecX<Scalar>& v,
                    const VecX<Scalar>& w, double eps = kDefaultEps) {
  const Scalar ww = m.form(w, w);
  if (!(ww > Scalar(0))) return true;
  const Scalar vw = m.form(v, w);
  const Scalar vv = m.form(v, v);
  if constexpr (scalar_traits<Scalar>::is_exact) {
    (void)eps;
    return vw * vw >= vv * ww;
  } else {
    const double lhs = vw * vw, rhs = vv * ww;
    return lhs - rhs >= -eps * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  }
}

// Batch (Hyp) sampler: structured vectors (standard basis, all-ones, pairwise
// +/- combinations) plus n_random seeded pseudo-random vectors.  Sampling can
// only miss violations, never invent them; check_ope stays authoritative.
template <typename Scalar>
bool check_hyp_sampled(const SymmetricMatrix<Scalar>& m, int n_random = 64,
                       std::uint64_t seed = 0, double eps = kDefaultEps) {
  const int r = m.order();
  std::vector<VecX<Scalar>> vs;
  for (int i = 0; i < r; ++i) vs.push_back(VecX<Scalar>::Unit(r, i));
  vs.push_back(VecX<Scalar>::Ones(r));
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      vs.push_back(VecX<Scalar>::Unit(r, i) + VecX<Scalar>::Unit(r, j));
      vs.push_back(VecX<Scalar>::Unit(r, i) - VecX<Scalar>::Unit(r, j));
    }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  for (int t = 0; t < n_random; ++t) {
    VecX<Scalar> v(r);
    for (int i = 0; i < r; ++i) {
      if constexpr (scalar_traits<Scalar>::is_exact)
        v(i) = rat(num(rng), den(rng));
      else
        v(i) = static_cast<double>(num(rng)) / den(rng);
    }
    vs.push_back(std::move(v));
  }

  std::vector<VecX<Scalar>> mv;
  std::vector<Scalar> qf;
  mv.reserve(vs.size());
  for (const auto& v : vs) {
    mv.push_back(m.mat() * v);
    qf.push_back(v.dot(mv.back()));
  }
  for (std::size_t wi = 0; wi < vs.size(); ++wi) {
    if (!(qf[wi] > Scalar(0))) continue;
    for (std::size_t vi = 0; vi < vs.size(); ++vi) {
      const Scalar vw = vs[vi].dot(mv[wi]);
      if constexpr (scalar_traits<Scalar>::is_exact) {
        if (vw * vw < qf[vi] * qf[wi]) return false;
      } else {
        const double lhs = vw * vw, rhs = qf[vi] * qf[wi];
        if (lhs - rhs < -eps * std::max({1.0, std::abs(lhs), std::abs(rhs)})) return false;
      }
    }
  }
  return true;
}

namespace detail {

// Inertia of the form restricted to the hyperplane {v : <v, w> = 0}, w != 0.
template <typename Scalar>
Inertia restricted_inertia(const SymmetricMatrix<Scalar>& m, const VecX<Scalar>& w,
                           double eps) {
  const int r = m.order();
  if (r == 1) return Inertia{0, 0, 0};
  int p = 0;
  double best = -1;
  for (int i = 0; i < r; ++i) {
    const double a = std::abs(to_double(w(i)));
    if (a > best) {
      best = a;
      p = i;
    }
  }
  MatX<Scalar> basis = MatX<Scalar>::Zero(r, r - 1);
  int c = 0;
  for (int j = 0; j < r; ++j) {
    if (j == p) continue;
    basis(j, c) = Scalar(1);
    basis(p, c) = -w(j) / w(p);
    ++c;
  }
  const MatX<Scalar> restricted = basis.transpose() * m.mat() * basis;
  return inertia(SymmetricMatrix<Scalar>(restricted, 1e-6), eps);
}

}  // namespace detail

// (NDC): negative semidefinite on the M-orthogonal complement of a direction
// of positive form value.  The witness search tries the dominant eigenvector
// (float) or coordinate/congruence directions (exact) before giving up.
template <typename Scalar>
bool check_ndc(const SymmetricMatrix<Scalar>& m, double eps = kDefaultEps) {
  const int r = m.order();
  std::optional<VecX<Scalar>> g;
  if constexpr (scalar_traits<Scalar>::is_exact) {
    for (int i = 0; i < r && !g; ++i) {
      const VecX<Scalar> e = VecX<Scalar>::Unit(r, i);
      if (m.form(e, e) > Scalar(0)) g = e;
    }
    if (!g) {
      const auto red = detail::congruence_reduce(m.mat());
      if (red.positive_direction) g = *red.positive_direction;
    }
  } else {
    const double scale = m.abs_scale();
    if (scale > 0) {
      Eigen::SelfAdjointEigenSolver<MatX<double>> es(m.mat());
      const int top = r - 1;
      if (es.eigenvalues()(top) > eps * scale) {
        VecX<double> v = es.eigenvectors().col(top);
        if (m.form(v, v) > 0) g = v;
      }
    }
    for (int i = 0; i < r && !g; ++i) {
      const VecX<Scalar> e = VecX<Scalar>::Unit(r, i);
      if (m.form(e, e) > 0) g = e;
    }
  }
  if (!g) return true;  // negative semidefinite, g = 0 works
  const VecX<Scalar> w = m.mat() * (*g);
  return detail::restricted_inertia(m, w, eps).n_pos == 0;
}

// (NDC) with a caller-supplied candidate direction g.
template <typename Scalar>
bool check_ndc_with_direction(const SymmetricMatrix<Scalar>& m, const VecX<Scalar>& g,
                              double eps = kDefaultEps) {
  if (!(m.form(g, g) > Scalar(0)))
    throw std::invalid_argument("check_ndc_with_direction: <g,Mg> must be positive");
  const VecX<Scalar> w = m.mat() * g;
  return detail::restricted_inertia(m, w, eps).n_pos == 0;
}

}  // namespace atlas
