#pragma once

// Closed-form hyperbolic geometry: distances in the four classical models,
// Möbius gyrovector operations on the unit ball, exponential/logarithm maps
// and the Fréchet (Karcher) mean. Everything works on Eigen column vectors of
// any scalar type; points in the Poincaré ball are vectors with norm < 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "hsc/error.hpp"

namespace hsc {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
using VectorOf = VectorX<typename Derived::Scalar>;

struct GeometryConfig {
  double delta = 1e-2;  // margin of the truncated disc H
  double frechet_tol = 1e-9;
  int frechet_max_iter = 100;

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::InvalidInput, "delta must lie in (0, 1)");
    if (!(frechet_tol > 0.0)) fail(ErrorKind::InvalidInput, "frechet_tol must be positive");
    if (frechet_max_iter < 1) fail(ErrorKind::InvalidInput, "frechet_max_iter must be >= 1");
  }
};

/// Norms at or beyond 1 - kBoundaryTrigger are pulled back to 1 - kBoundaryClamp.
inline constexpr double kBoundaryTrigger = 1e-12;
inline constexpr double kBoundaryClamp = 1e-9;

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& x, const char* what) {
  if (!x.allFinite()) fail(ErrorKind::InvalidInput, std::string(what) + ": non-finite coordinate");
}

/// Returns 1 - |x|^2 after checking that x lies strictly inside the unit ball.
template <typename Derived>
typename Derived::Scalar ball_gap(const Eigen::MatrixBase<Derived>& x, const char* what) {
  using Scalar = typename Derived::Scalar;
  require_finite(x, what);
  const Scalar gap = Scalar(1) - x.squaredNorm();
  if (!(gap > Scalar(0))) {
    std::ostringstream os;
    os << what << ": point with norm " << x.norm() << " is not inside the open unit ball";
    fail(ErrorKind::Domain, os.str());
  }
  return gap;
}

/// Distance from p (inside the unit ball) to the unit sphere along unit direction dir.
template <typename Scalar>
Scalar distance_to_sphere(const VectorX<Scalar>& p, const VectorX<Scalar>& dir) {
  const Scalar b = p.dot(dir);
  const Scalar c = Scalar(1) - p.squaredNorm();
  const Scalar root = std::sqrt(b * b + c);
  return b > Scalar(0) ? c / (b + root) : root - b;
}

}  // namespace detail

/// acosh(1 + x) for x >= 0 without the cancellation of the naive form.
template <typename Scalar>
Scalar acosh1p(Scalar x) {
  return std::log1p(x + std::sqrt(x * (x + Scalar(2))));
}

/// x / (|x| + delta); lands strictly inside the unit ball, direction kept.
template <typename Derived>
VectorOf<Derived> embed_to_disc(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar delta) {
  detail::require_finite(x, "embed_to_disc");
  if (!(delta > 0)) fail(ErrorKind::InvalidInput, "embed_to_disc: delta must be positive");
  return x / (x.norm() + delta);
}

/// 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)), the scalar inside both closed forms of the disc metric.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar conformal_ratio(const Eigen::MatrixBase<DerivedA>& x,
                                          const Eigen::MatrixBase<DerivedB>& y) {
  const auto gx = detail::ball_gap(x, "conformal_ratio");
  const auto gy = detail::ball_gap(y, "conformal_ratio");
  return 2 * (x - y).squaredNorm() / (gx * gy);
}

template <typename Scalar>
Scalar disc_distance_from_ratio(Scalar ratio) {
  return 2 * std::asinh(std::sqrt(ratio / 2));
}

/// Poincaré-ball geodesic distance, 2 asinh(sqrt(ratio / 2)).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist_disc(const Eigen::MatrixBase<DerivedA>& x,
                                    const Eigen::MatrixBase<DerivedB>& y) {
  return disc_distance_from_ratio(conformal_ratio(x, y));
}

/// Same distance through acosh(1 + ratio).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist_disc_cosh(const Eigen::MatrixBase<DerivedA>& x,
                                         const Eigen::MatrixBase<DerivedB>& y) {
  return acosh1p(conformal_ratio(x, y));
}

/// Upper half-space distance 2 asinh(|p2 - p1| / (2 sqrt(x_n y_n))).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist_half_space(const Eigen::MatrixBase<DerivedA>& p1,
                                          const Eigen::MatrixBase<DerivedB>& p2) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_finite(p1, "dist_half_space");
  detail::require_finite(p2, "dist_half_space");
  if (p1.size() != p2.size() || p1.size() < 1)
    fail(ErrorKind::InvalidInput, "dist_half_space: dimension mismatch");
  const Scalar xn = p1(p1.size() - 1);
  const Scalar yn = p2(p2.size() - 1);
  if (!(xn > 0) || !(yn > 0))
    fail(ErrorKind::Domain, "dist_half_space: last coordinate must be positive");
  return 2 * std::asinh((p2 - p1).norm() / (2 * std::sqrt(xn * yn)));
}

/// Reflection form 2 log((|p2-p1| + |p2-p1~|) / (2 sqrt(x_n y_n))), p1~ mirrored in x_n = 0.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist_half_space_log(const Eigen::MatrixBase<DerivedA>& p1,
                                              const Eigen::MatrixBase<DerivedB>& p2) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_finite(p1, "dist_half_space_log");
  detail::require_finite(p2, "dist_half_space_log");
  const Eigen::Index n = p1.size();
  const Scalar xn = p1(n - 1);
  const Scalar yn = p2(n - 1);
  if (!(xn > 0) || !(yn > 0))
    fail(ErrorKind::Domain, "dist_half_space_log: last coordinate must be positive");
  VectorX<Scalar> mirrored = p1;
  mirrored(n - 1) = -xn;
  return 2 * std::log(((p2 - p1).norm() + (p2 - mirrored).norm()) / (2 * std::sqrt(xn * yn)));
}

/// Beltrami-Klein distance through the cross ratio of u, v and the two ideal
/// endpoints a, b of the chord through them:
///   d = 1/2 log(|aq| |pb| / (|ap| |qb|)).
/// |ap| and |qb| are measured from each point to the sphere so the result does
/// not lose digits near the boundary, and the formula is symmetric term by term.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist_klein(const Eigen::MatrixBase<DerivedA>& u,
                                     const Eigen::MatrixBase<DerivedB>& v) {
  using Scalar = typename DerivedA::Scalar;
  detail::ball_gap(u, "dist_klein");
  detail::ball_gap(v, "dist_klein");
  const VectorX<Scalar> p = u;
  const VectorX<Scalar> q = v;
  const VectorX<Scalar> diff = q - p;
  const Scalar length = diff.norm();
  if (length == Scalar(0)) return Scalar(0);
  const VectorX<Scalar> dir = diff / length;
  const VectorX<Scalar> back = -dir;
  const Scalar ap = detail::distance_to_sphere<Scalar>(p, back);
  const Scalar qb = detail::distance_to_sphere<Scalar>(q, dir);
  // |aq| = |ap| + L and |pb| = L + |qb|
  return (std::log1p(length / ap) + std::log1p(length / qb)) / 2;
}

/// Minkowski bilinear form -x0 y0 + sum x_i y_i.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar minkowski_dot(const Eigen::MatrixBase<DerivedA>& u,
                                        const Eigen::MatrixBase<DerivedB>& v) {
  const Eigen::Index n = u.size();
  return -u(0) * v(0) + u.tail(n - 1).dot(v.tail(n - 1));
}

namespace detail {
template <typename Derived>
void require_on_sheet(const Eigen::MatrixBase<Derived>& u, const char* what) {
  using Scalar = typename Derived::Scalar;
  require_finite(u, what);
  if (u.size() < 2) fail(ErrorKind::InvalidInput, std::string(what) + ": need at least 2 coordinates");
  const Scalar form = minkowski_dot(u, u);
  const Scalar scale = std::max<Scalar>(Scalar(1), u(0) * u(0));
  if (!(u(0) >= Scalar(1)) || std::abs(form + Scalar(1)) > Scalar(1e-9) * scale)
    fail(ErrorKind::Domain, std::string(what) + ": point is not on the forward sheet B(u,u) = -1");
}
}  // namespace detail

/// Hyperboloid distance acosh(-B(u, v)). -B(u, v) - 1 is evaluated as half the
/// Minkowski norm of u - v, which is exact in structure and avoids cancellation.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist_hyperboloid(const Eigen::MatrixBase<DerivedA>& u,
                                           const Eigen::MatrixBase<DerivedB>& v) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_on_sheet(u, "dist_hyperboloid");
  detail::require_on_sheet(v, "dist_hyperboloid");
  if (u.size() != v.size()) fail(ErrorKind::InvalidInput, "dist_hyperboloid: dimension mismatch");
  const VectorX<Scalar> diff = u - v;
  Scalar excess = minkowski_dot(diff, diff) / 2;  // = -B(u,v) - 1
  if (excess < Scalar(0)) {
    if (excess < -Scalar(1e-12) * std::max<Scalar>(Scalar(1), u(0) * v(0)))
      fail(ErrorKind::NumericalDegeneracy, "dist_hyperboloid: -B(u,v) fell below 1");
    excess = Scalar(0);
  }
  return acosh1p(excess);
}

/// Lifts a Poincaré-ball point onto the hyperboloid sheet.
template <typename Derived>
VectorOf<Derived> disc_to_hyperboloid(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar gap = detail::ball_gap(x, "disc_to_hyperboloid");
  VectorX<Scalar> out(x.size() + 1);
  out(0) = (2 - gap) / gap;
  out.tail(x.size()) = 2 * x / gap;
  return out;
}

/// Maps a Beltrami-Klein point to the Poincaré ball, k / (1 + sqrt(1 - |k|^2)).
template <typename Derived>
VectorOf<Derived> klein_to_disc(const Eigen::MatrixBase<Derived>& k) {
  const auto gap = detail::ball_gap(k, "klein_to_disc");
  return k / (1 + std::sqrt(gap));
}

/// Pulls a vector back inside the ball when its norm reaches 1 - kBoundaryTrigger.
template <typename Scalar>
VectorX<Scalar> clamp_to_ball(VectorX<Scalar> v, Flags* flags = nullptr) {
  const Scalar n = v.norm();
  if (n >= Scalar(1) - Scalar(kBoundaryTrigger)) {
    v *= (Scalar(1) - Scalar(kBoundaryClamp)) / n;
    raise_flag(flags, "boundary-clamp");
  }
  return v;
}

/// Möbius addition on the unit ball (curvature -1):
///   u (+) v = ((1 + 2<u,v> + |v|^2) u + (1 - |u|^2) v) / (1 + 2<u,v> + |u|^2 |v|^2)
template <typename DerivedA, typename DerivedB>
VectorOf<DerivedA> mobius_add(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v,
                              Flags* flags = nullptr) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar gu = detail::ball_gap(u, "mobius_add");
  detail::ball_gap(v, "mobius_add");
  const Scalar uv = u.dot(v);
  const Scalar uu = u.squaredNorm();
  const Scalar vv = v.squaredNorm();
  const Scalar den = 1 + 2 * uv + uu * vv;
  if (std::abs(den) < Scalar(1e-15)) fail(ErrorKind::NumericalDegeneracy, "mobius_add: vanishing denominator");
  VectorX<Scalar> out = ((1 + 2 * uv + vv) * u + gu * v) / den;
  return clamp_to_ball<Scalar>(std::move(out), flags);
}

/// Möbius scalar multiplication r (x) u = tanh(r artanh|u|) u/|u|; the zero vector maps to zero.
template <typename Derived>
VectorOf<Derived> mobius_scalar(typename Derived::Scalar r, const Eigen::MatrixBase<Derived>& u,
                                Flags* flags = nullptr) {
  using Scalar = typename Derived::Scalar;
  detail::ball_gap(u, "mobius_scalar");
  const Scalar n = u.norm();
  if (n == Scalar(0)) return VectorX<Scalar>::Zero(u.size());
  VectorX<Scalar> out = (std::tanh(r * std::atanh(n)) / n) * u;
  return clamp_to_ball<Scalar>(std::move(out), flags);
}

/// Conformal factor 2 / (1 - |p|^2) of the ball metric at p.
template <typename Derived>
typename Derived::Scalar conformal_factor(const Eigen::MatrixBase<Derived>& p) {
  return 2 / detail::ball_gap(p, "conformal_factor");
}

/// Riemannian norm of tangent vector v at p.
template <typename DerivedP, typename DerivedV>
typename DerivedP::Scalar tangent_norm(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedV>& v) {
  return conformal_factor(p) * v.norm();
}

/// exp_p(v) = p (+) (tanh(lambda_p |v| / 2) v / |v|)
template <typename DerivedP, typename DerivedV>
VectorOf<DerivedP> exp_map(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedV>& v,
                           Flags* flags = nullptr) {
  using Scalar = typename DerivedP::Scalar;
  const Scalar lambda = conformal_factor(p);
  detail::require_finite(v, "exp_map");
  const Scalar n = v.norm();
  if (n == Scalar(0)) return p;
  const VectorX<Scalar> step = clamp_to_ball<Scalar>((std::tanh(lambda * n / 2) / n) * v, flags);
  return mobius_add(p, step, flags);
}

/// log_p(y) = (2 / lambda_p) artanh(|w|) w / |w| with w = (-p) (+) y.
template <typename DerivedP, typename DerivedY>
VectorOf<DerivedP> log_map(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedP::Scalar;
  const Scalar lambda = conformal_factor(p);
  const VectorX<Scalar> minus_p = -p;
  const VectorX<Scalar> w = mobius_add(minus_p, y);
  const Scalar n = w.norm();
  if (n == Scalar(0)) return VectorX<Scalar>::Zero(p.size());
  return (2 / lambda) * std::atanh(n) / n * w;
}

struct FrechetInfo {
  int iterations = 0;
  double last_step = 0.0;        // geodesic length of the final update
  double gradient_norm = 0.0;    // Riemannian gradient norm of the (normalised) objective at the result
  bool converged = false;
};

/// Weighted Fréchet mean of the rows of `points` (all inside the unit ball),
/// minimising sum_i w_i d(c, x_i)^2 with the Karcher iteration
/// c <- exp_c(t sum_i w_i log_c(x_i) / sum_i w_i). Starts from the Euclidean
/// weighted mean pulled to norm <= 1 - 1e-6. The step is damped (see below) because
/// the undamped iteration overshoots for spread-out points. An empty `weights`
/// means equal weights.
template <typename Derived>
VectorX<typename Derived::Scalar> frechet_mean(const Eigen::MatrixBase<Derived>& points,
                                               const VectorX<typename Derived::Scalar>& weights,
                                               const GeometryConfig& cfg = {}, FrechetInfo* info = nullptr,
                                               Flags* flags = nullptr) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.rows();
  if (n == 0) fail(ErrorKind::InvalidInput, "frechet_mean: no points");
  VectorX<Scalar> w = weights.size() == 0 ? VectorX<Scalar>::Ones(n) : weights;
  if (w.size() != n) fail(ErrorKind::InvalidInput, "frechet_mean: weight count mismatch");
  if ((w.array() < Scalar(0)).any() || !(w.sum() > Scalar(0)))
    fail(ErrorKind::InvalidInput, "frechet_mean: weights must be nonnegative with positive sum");
  w /= w.sum();
  for (Eigen::Index i = 0; i < n; ++i) detail::ball_gap(points.row(i).transpose(), "frechet_mean");

  VectorX<Scalar> c = (points.transpose() * w);
  const Scalar start_cap = Scalar(1) - Scalar(1e-6);
  if (c.norm() > start_cap) c *= start_cap / c.norm();

  auto objective = [&](const VectorX<Scalar>& at) {
    Scalar f(0);
    for (Eigen::Index i = 0; i < n; ++i)
      if (w(i) != Scalar(0)) {
        const Scalar d = dist_disc(at, points.row(i).transpose());
        f += w(i) * d * d;
      }
    return f;
  };

  FrechetInfo local;
  VectorX<Scalar> grad(points.cols());
  Scalar f = objective(c);
  for (int it = 0; it < cfg.frechet_max_iter; ++it) {
    // The Hessian of d^2/2 is 1 along the geodesic and d coth d across it, so
    // 2 / (1 + L) with L the weighted d coth d is the step that balances both.
    grad.setZero();
    Scalar curvature(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w(i) == Scalar(0)) continue;
      const VectorX<Scalar> v = log_map(c, points.row(i).transpose());
      grad += w(i) * v;
      const Scalar d = tangent_norm(c, v);
      curvature += w(i) * (d > Scalar(1e-8) ? d / std::tanh(d) : Scalar(1));
    }
    // undamped Karcher movement; below tolerance means first-order optimality
    const Scalar movement = tangent_norm(c, grad);
    if (movement < Scalar(cfg.frechet_tol)) {
      local.converged = true;
      break;
    }
    Scalar t = 2 / (1 + curvature);
    VectorX<Scalar> next = clamp_to_ball<Scalar>(exp_map(c, (t * grad).eval(), flags), flags);
    Scalar f_next = objective(next);
    for (int halving = 0; halving < 30 && f_next > f * (1 + Scalar(1e-12)); ++halving) {
      t /= 2;
      next = clamp_to_ball<Scalar>(exp_map(c, (t * grad).eval(), flags), flags);
      f_next = objective(next);
    }
    const Scalar step = dist_disc(c, next);
    c = std::move(next);
    f = f_next;
    local.iterations = it + 1;
    local.last_step = static_cast<double>(step);
  }
  if (c.norm() > Scalar(1) - Scalar(kBoundaryClamp)) c *= (Scalar(1) - Scalar(kBoundaryClamp)) / c.norm();
  if (info) {
    grad.setZero();
    for (Eigen::Index i = 0; i < n; ++i)
      if (w(i) != Scalar(0)) grad += w(i) * log_map(c, points.row(i).transpose());
    local.gradient_norm = 2.0 * static_cast<double>(tangent_norm(c, grad));
    *info = local;
  }
  return c;
}

}  // namespace hsc
