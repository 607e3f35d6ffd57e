#ifndef ALMAB_HERMITIAN_HPP
#define ALMAB_HERMITIAN_HPP

#include "almab/core.hpp"
#include "almab/frames.hpp"
#include "almab/group.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace almab
{

/// Invariant Hermitian metric h = h^_ij X^i conj(X^j) with constant
/// coefficients in the left (or right) invariant coframe. Construction
/// enforces Hermitian symmetry and positive definiteness.
class HermitianForm
{
public:
  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kPivotTol = 1e-12;

  explicit HermitianForm(CMatrix coeffs, Side side = Side::left, std::string provenance = {})
    : m_coeffs(std::move(coeffs)), m_side(side), m_provenance(std::move(provenance))
  {
    if (m_coeffs.rows() != m_coeffs.cols() || m_coeffs.rows() == 0) {
      throw std::invalid_argument("metric coefficients must be a non-empty square matrix");
    }
    if (!m_coeffs.allFinite()) {
      throw std::invalid_argument("metric coefficients must be finite");
    }
    const double scale = std::max(1.0, max_abs(m_coeffs));
    if (max_abs(m_coeffs - m_coeffs.adjoint()) > kSymmetryTol * scale) {
      throw std::invalid_argument("metric coefficients are not Hermitian");
    }
    const Eigen::LLT<CMatrix> llt(m_coeffs);
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("metric coefficients are not positive definite");
    }
    const CMatrix L = llt.matrixL();
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
      if (std::norm(L(i, i)) <= kPivotTol) {
        throw std::invalid_argument("metric coefficients are numerically singular");
      }
    }
  }

  static HermitianForm identity(int dim, Side side = Side::left)
  {
    return HermitianForm(CMatrix::Identity(dim, dim), side);
  }

  const CMatrix & coeffs() const { return m_coeffs; }
  Side side() const { return m_side; }
  int dim() const { return static_cast<int>(m_coeffs.rows()); }
  const std::string & provenance() const { return m_provenance; }

private:
  CMatrix m_coeffs;
  Side m_side;
  std::string m_provenance;
};

/// omega = (i/2) h^_ab X^a ^ conj(X^b), stored as omega^ = (i/2) h^.
struct FundamentalForm
{
  CMatrix omega_hat;
  Side side = Side::left;
};

inline FundamentalForm fundamental_form(const HermitianForm & h)
{
  return {Complex(0.0, 0.5) * h.coeffs(), h.side()};
}

/// Inverse of fundamental_form: h^ = -2i omega^.
inline HermitianForm metric_from_fundamental(const FundamentalForm & omega)
{
  return HermitianForm(Complex(0.0, -2.0) * omega.omega_hat, omega.side);
}

namespace detail
{

inline void require_dim(const GroupDescriptor & G, const FundamentalForm & omega)
{
  if (omega.omega_hat.rows() != G.dim() || omega.omega_hat.cols() != G.dim()) {
    throw std::invalid_argument("fundamental form has dimension " + std::to_string(omega.omega_hat.rows()) +
                                ", group has dimension " + std::to_string(G.dim()));
  }
}

/// (-J (+) 0)
inline CMatrix minus_J_padded(const GroupDescriptor & G)
{
  CMatrix m = CMatrix::Zero(G.dim(), G.dim());
  m.topLeftCorner(G.d(), G.d()) = -G.J();
  return m;
}

/// Holomorphic derivatives d/dz^l of the invariant coframe matrix at a point,
/// l = 0..d (z^d = t). The coframe is holomorphic so d/dzbar^l of its
/// conjugate is the conjugate of these.
inline std::vector<CMatrix> coframe_derivatives(const GroupDescriptor & G, Side side, Complex t)
{
  const int d = G.d();
  std::vector<CMatrix> out(static_cast<std::size_t>(d + 1), CMatrix::Zero(d + 1, d + 1));
  if (side == Side::left) {
    // X = e^{-tJ} (+) 1 depends on t only
    out[static_cast<std::size_t>(d)].topLeftCorner(d, d) = -G.J() * G.exp_tJ(-t);
  } else {
    // X = [[1, -Jv], [0, 1]] depends on v only
    for (int l = 0; l < d; ++l) {
      out[static_cast<std::size_t>(l)].topRightCorner(d, 1) = -G.J().col(l);
    }
  }
  return out;
}

} // namespace detail

/// Reduced closure obstruction M = (-J (+) 0)^T omega^.
///
/// For the left side this is the end point of the coordinate reduction of
/// d omega = 0. For the right side the same matrix is assembled row by row
/// from the derivatives of the right coframe at the identity: row l holds
/// the (t, .) entries of (d_l X)^T omega^. In both cases d omega = 0 iff M = 0.
inline CMatrix kahler_obstruction(const GroupDescriptor & G, const FundamentalForm & omega)
{
  detail::require_dim(G, omega);
  if (omega.side == Side::left) {
    return detail::minus_J_padded(G).transpose() * omega.omega_hat;
  }
  const int n = G.dim();
  const auto derivs = detail::coframe_derivatives(G, Side::right, 0.0);
  CMatrix m = CMatrix::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    m.row(l) = (derivs[static_cast<std::size_t>(l)].transpose() * omega.omega_hat).row(n - 1);
  }
  return m;
}

/// Gamma(t) = X^T omega^ conj(X),  X = e^{-tJ} (+) 1.
inline CMatrix gamma_matrix(const GroupDescriptor & G, const FundamentalForm & omega, Complex t)
{
  detail::require_dim(G, omega);
  CMatrix X = CMatrix::Identity(G.dim(), G.dim());
  X.topLeftCorner(G.d(), G.d()) = G.exp_tJ(-t);
  return X.transpose() * omega.omega_hat * X.conjugate();
}

/// Wirtinger derivatives of Gamma(t), using dX/dt = -J e^{-tJ} (+) 0.
struct GammaDerivatives
{
  CMatrix d_t;
  CMatrix d_tbar;
};

inline GammaDerivatives gamma_derivatives(const GroupDescriptor & G, const FundamentalForm & omega, Complex t)
{
  detail::require_dim(G, omega);
  const int d = G.d();
  CMatrix X = CMatrix::Identity(d + 1, d + 1);
  X.topLeftCorner(d, d) = G.exp_tJ(-t);
  CMatrix dX = CMatrix::Zero(d + 1, d + 1);
  dX.topLeftCorner(d, d) = -G.J() * G.exp_tJ(-t);
  return {dX.transpose() * omega.omega_hat * X.conjugate(), X.transpose() * omega.omega_hat * dX.conjugate()};
}

/// d omega on the complexified invariant frame {V_1..V_n, conj V_1..conj V_n},
/// V_n = e_0, using
///   d omega(r,s,t) = -omega([r,s],t) + omega([r,t],s) - omega([s,t],r)
/// with the only nonzero brackets [e_0, V_i] = J V_i and its conjugate.
/// Right-invariant fields carry the opposite bracket sign. Returns the largest
/// absolute value over all frame triples.
inline double domega_structure_constants(const GroupDescriptor & G, const FundamentalForm & omega)
{
  detail::require_dim(G, omega);
  const int n = G.dim();
  const int d = G.d();
  const int N = 2 * n;
  const double sign = omega.side == Side::left ? 1.0 : -1.0;

  // Omega(a, b) = omega(E_a, E_b) on the 2n-element frame.
  CMatrix Omega = CMatrix::Zero(N, N);
  Omega.topRightCorner(n, n) = omega.omega_hat;
  Omega.bottomLeftCorner(n, n) = -omega.omega_hat.transpose();

  // bracket[a][b] = coefficient column of [E_a, E_b].
  std::vector<std::vector<CVector>> bracket(static_cast<std::size_t>(N),
                                            std::vector<CVector>(static_cast<std::size_t>(N), CVector::Zero(N)));
  auto set = [&](int a, int b, const CVector & c) {
    bracket[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = c;
    bracket[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = -c;
  };
  for (int i = 0; i < d; ++i) {
    CVector holo = CVector::Zero(N);
    holo.head(d) = sign * G.J().col(i);
    set(d, i, holo);
    CVector anti = CVector::Zero(N);
    anti.segment(n, d) = sign * G.J().col(i).conjugate();
    set(n + d, n + i, anti);
  }

  auto pair = [&](int a, int b, int c) -> Complex {
    return (bracket[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].transpose() * Omega.col(c))(0);
  };
  double worst = 0.0;
  for (int r = 0; r < N; ++r) {
    for (int s = 0; s < N; ++s) {
      for (int t = 0; t < N; ++t) {
        const Complex value = -pair(r, s, t) + pair(r, t, s) - pair(s, t, r);
        worst = std::max(worst, std::abs(value));
      }
    }
  }
  return worst;
}

/// d omega computed in the coordinate chart at a point and read off in the
/// invariant frame there. With C the coframe matrix and Gamma = C^T omega^ conj(C),
///   d omega(d_l, d_a, dbar_b)    = d_l Gamma_ab - d_a Gamma_lb
///   d omega(d_a, dbar_l, dbar_b) = -(dbar_l Gamma_ab - dbar_b Gamma_al)
/// using analytic derivatives of C. The frame components are point
/// independent, and their maximum matches domega_structure_constants.
inline double domega_coordinates(const GroupDescriptor & G, const FundamentalForm & omega, const GroupElement & point)
{
  detail::require_dim(G, omega);
  if (!same_group(G, *point.group())) {
    throw DescriptorMismatch();
  }
  const int n = G.dim();
  const CMatrix C = frame_at(coframe_kind(omega.side), point);
  const CMatrix F = frame_at(frame_kind(omega.side), point);
  const auto dC = detail::coframe_derivatives(G, omega.side, point.t());

  // holo[l] = d_l Gamma, anti[l] = dbar_l Gamma
  std::vector<CMatrix> holo;
  std::vector<CMatrix> anti;
  for (const auto & D : dC) {
    holo.push_back(D.transpose() * omega.omega_hat * C.conjugate());
    anti.push_back(C.transpose() * omega.omega_hat * D.conjugate());
  }

  const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<Complex> a21(count);
  std::vector<Complex> a12(count);
  auto at = [n](int x, int y, int z) {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(n) + static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(n) +
           static_cast<std::size_t>(z);
  };
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        a21[at(x, y, z)] = holo[static_cast<std::size_t>(x)](y, z) - holo[static_cast<std::size_t>(y)](x, z);
        a12[at(x, y, z)] = -(anti[static_cast<std::size_t>(y)](x, z) - anti[static_cast<std::size_t>(z)](x, y));
      }
    }
  }

  // Components on frame vectors: holomorphic slots take F, barred slots conj(F).
  const CMatrix Ft = F.transpose();
  const CMatrix Fbt = F.conjugate().transpose();
  a21 = detail::mode_product(a21, n, 3, 0, Ft);
  a21 = detail::mode_product(a21, n, 3, 1, Ft);
  a21 = detail::mode_product(a21, n, 3, 2, Fbt);
  a12 = detail::mode_product(a12, n, 3, 0, Ft);
  a12 = detail::mode_product(a12, n, 3, 1, Fbt);
  a12 = detail::mode_product(a12, n, 3, 2, Fbt);

  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    worst = std::max({worst, std::abs(a21[k]), std::abs(a12[k])});
  }
  return worst;
}

struct KahlerVerdict
{
  double obstruction_norm = 0.0;
  double domega_residual = 0.0;
  bool is_kahler = false;
  bool method_agreement = true;
  /// The group is Abelian, outside the non-Abelian hypothesis; a positive
  /// verdict is expected there.
  bool abelian_caveat = false;
  Side side = Side::left;
};

/// Runs both closure checks and records whether they agree. Thresholds are
/// relative to |h^|_F.
inline KahlerVerdict kahler_verdict(const GroupDescriptor & G, const HermitianForm & h, double tol = kDefaultTol)
{
  const FundamentalForm omega = fundamental_form(h);
  KahlerVerdict out;
  out.side = h.side();
  out.obstruction_norm = kahler_obstruction(G, omega).norm();
  out.domega_residual = domega_structure_constants(G, omega);
  const double scale = h.coeffs().norm();
  const bool closed_by_reduction = out.obstruction_norm <= tol * scale;
  const bool closed_by_structure = out.domega_residual <= tol * scale;
  out.method_agreement = closed_by_reduction == closed_by_structure;
  out.is_kahler = closed_by_reduction && closed_by_structure;
  out.abelian_caveat = G.abelian();
  return out;
}

/// As kahler_verdict, but a disagreement between the two checks throws.
inline KahlerVerdict is_kahler(const GroupDescriptor & G, const HermitianForm & h, double tol = kDefaultTol)
{
  KahlerVerdict verdict = kahler_verdict(G, h, tol);
  if (!verdict.method_agreement) {
    throw ConsistencyError("Kahler checks disagree: obstruction norm " + std::to_string(verdict.obstruction_norm) +
                           ", d omega residual " + std::to_string(verdict.domega_residual));
  }
  return verdict;
}

} // namespace almab

#endif
