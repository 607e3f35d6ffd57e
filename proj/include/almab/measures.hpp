#ifndef ALMAB_MEASURES_HPP
#define ALMAB_MEASURES_HPP

#include "almab/core.hpp"
#include "almab/group.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace almab
{

// Haar measures on G in the global chart (v,t):
//   d mu_L = e^{-2 Re tr(tJ)} dv dt,   d mu_R = dv dt,   Delta = d mu_L / d mu_R.

inline double left_density(const GroupElement & g)
{
  return std::exp(-2.0 * (g.t() * g.group()->jordan().trace()).real());
}

inline double right_density(const GroupElement &) { return 1.0; }

inline double modular(const GroupElement & g) { return left_density(g) / right_density(g); }

namespace detail
{
/// |det A|^2 = det(A A^*), the real Jacobian of a holomorphic map with
/// complex Jacobian A. Factored as det(A) det(A^*) so that unit-triangular
/// Jacobians evaluate to exactly 1.
inline double real_jacobian_from_complex(const CMatrix & jac)
{
  const Complex det = jac.determinant() * jac.adjoint().determinant();
  return det.real();
}
} // namespace detail

/// Complex Jacobian of left translation x -> g x: e^{sJ} (+) 1, s = g.t.
inline CMatrix left_translation_jacobian(const GroupElement & g)
{
  const int d = g.group()->d();
  CMatrix jac = CMatrix::Identity(d + 1, d + 1);
  jac.topLeftCorner(d, d) = g.group()->exp_tJ(g.t());
  return jac;
}

/// Complex Jacobian of right translation x -> x g at x = [v,t]:
///   | 1  J e^{tJ} u |
///   | 0  1          |
inline CMatrix right_translation_jacobian(const GroupElement & g, const GroupElement & x)
{
  detail::require_same_group(g, x);
  const auto & G = *g.group();
  const int d = G.d();
  CMatrix jac = CMatrix::Identity(d + 1, d + 1);
  jac.topRightCorner(d, 1) = G.J() * (G.exp_tJ(x.t()) * g.v());
  return jac;
}

/// Real Jacobian determinant of x -> g x, namely e^{2 Re tr(sJ)}; independent of x.
inline double real_jacobian_left(const GroupElement & g)
{
  return detail::real_jacobian_from_complex(left_translation_jacobian(g));
}

inline double real_jacobian_right(const GroupElement & g, const GroupElement & x)
{
  return detail::real_jacobian_from_complex(right_translation_jacobian(g, x));
}

/// |mu_L(g x) Jac_R(L_g) - mu_L(x)| / mu_L(x). The density spans many orders
/// of magnitude when Re(t tr J) varies, so the residual is relative.
inline double check_left_invariance(const GroupElement & g, const GroupElement & x)
{
  const GroupElement gx = multiply(g, x);
  const double here = left_density(x);
  return std::abs(left_density(gx) * real_jacobian_left(g) - here) / here;
}

/// |mu_R(x g) Jac_R(R_g) - mu_R(x)|, already relative since mu_R = 1
inline double check_right_invariance(const GroupElement & g, const GroupElement & x)
{
  const GroupElement xg = multiply(x, g);
  return std::abs(right_density(xg) * real_jacobian_right(g, x) - right_density(x));
}

// ---------------------------------------------------------------------------
// Monte Carlo integration over a coordinate box, for demonstrations only.

struct Interval
{
  double lo;
  double hi;
};

/// 2(d+1) real intervals ordered Re v_1, Im v_1, ..., Re v_d, Im v_d, Re t, Im t.
using CoordinateBox = std::vector<Interval>;

struct Estimate
{
  double value;
  double std_error;
};

using ScalarField = std::function<double(const GroupElement &)>;

inline Estimate mc_integrate(const GroupPtr & group, const ScalarField & f, const CoordinateBox & box, Side density,
                             std::int64_t n, std::uint64_t seed)
{
  const int d = group->d();
  if (n < 1) {
    throw std::invalid_argument("mc_integrate: sample count must be at least 1");
  }
  if (box.size() != static_cast<std::size_t>(2 * (d + 1))) {
    throw std::invalid_argument("mc_integrate: box must have 2(d+1) intervals");
  }
  double volume = 1.0;
  for (const auto & iv : box) {
    if (!(iv.hi > iv.lo)) {
      throw std::invalid_argument("mc_integrate: empty box");
    }
    volume *= iv.hi - iv.lo;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(box.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < box.size(); ++c) {
      x[c] = box[c].lo + (box[c].hi - box[c].lo) * unit(rng);
    }
    CVector v(d);
    for (int i = 0; i < d; ++i) {
      v(i) = Complex(x[2 * i], x[2 * i + 1]);
    }
    const GroupElement p(group, std::move(v), Complex(x[2 * d], x[2 * d + 1]));
    const double weight = density == Side::left ? left_density(p) : right_density(p);
    const double y = f(p) * weight;
    sum += y;
    sum_sq += y * y;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = n > 1 ? std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(n - 1)) : 0.0;
  return {volume * mean, volume * std::sqrt(var / static_cast<double>(n))};
}

} // namespace almab

#endif
