#ifndef ALMAB_GROUP_HPP
#define ALMAB_GROUP_HPP

#include "almab/core.hpp"
#include "almab/multiplicity.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace almab
{

/// The simply connected group G = C^d x| C with group law
///   [u,s][v,t] = [u + e^{sJ} v, s + t].
/// Shared by every element built on it; immutable after construction.
class GroupDescriptor
{
public:
  static std::shared_ptr<const GroupDescriptor> make(MultiplicityFunction aleph)
  {
    return std::shared_ptr<const GroupDescriptor>(new GroupDescriptor(std::move(aleph)));
  }

  const MultiplicityFunction & aleph() const { return m_aleph; }
  const JordanMatrix & jordan() const { return m_jordan; }
  const CMatrix & J() const { return m_jordan.entries(); }
  int d() const { return m_d; }
  /// Complex dimension of G.
  int dim() const { return m_d + 1; }
  bool abelian() const { return m_abelian; }

  CMatrix exp_tJ(Complex t) const { return jordan_exp(m_jordan, t); }

  friend bool same_group(const GroupDescriptor & a, const GroupDescriptor & b)
  {
    return &a == &b || a.m_aleph == b.m_aleph;
  }

private:
  explicit GroupDescriptor(MultiplicityFunction aleph)
    : m_aleph(std::move(aleph)), m_jordan(m_aleph), m_d(dim_v(m_aleph)), m_abelian(is_abelian(m_aleph))
  {
  }

  MultiplicityFunction m_aleph;
  JordanMatrix m_jordan;
  int m_d;
  bool m_abelian;
};

using GroupPtr = std::shared_ptr<const GroupDescriptor>;

/// Lie algebra element (v, t) of V x| C e_0.
struct AlgebraElement
{
  CVector v;
  Complex t;
};

/// Group element [v, t].
class GroupElement
{
public:
  GroupElement(GroupPtr group, CVector v, Complex t) : m_group(std::move(group)), m_v(std::move(v)), m_t(t)
  {
    if (!m_group) {
      throw std::invalid_argument("group element requires a descriptor");
    }
    if (m_v.size() != m_group->d()) {
      throw std::invalid_argument("element vector has length " + std::to_string(m_v.size()) + ", expected " +
                                  std::to_string(m_group->d()));
    }
    if (!m_v.allFinite() || !std::isfinite(m_t.real()) || !std::isfinite(m_t.imag())) {
      throw std::invalid_argument("element entries must be finite");
    }
  }

  static GroupElement identity(GroupPtr group)
  {
    const int d = group->d();
    return GroupElement(std::move(group), CVector::Zero(d), 0.0);
  }

  const GroupPtr & group() const { return m_group; }
  const CVector & v() const { return m_v; }
  Complex t() const { return m_t; }

private:
  GroupPtr m_group;
  CVector m_v;
  Complex m_t;
};

namespace detail
{
inline void require_same_group(const GroupElement & a, const GroupElement & b)
{
  if (!same_group(*a.group(), *b.group())) {
    throw DescriptorMismatch();
  }
}
} // namespace detail

inline GroupElement multiply(const GroupElement & g, const GroupElement & h)
{
  detail::require_same_group(g, h);
  const auto & G = *g.group();
  return GroupElement(g.group(), g.v() + G.exp_tJ(g.t()) * h.v(), g.t() + h.t());
}

/// [v,t]^{-1} = [-e^{-tJ} v, -t]
inline GroupElement inverse(const GroupElement & g)
{
  return GroupElement(g.group(), -(g.group()->exp_tJ(-g.t()) * g.v()), -g.t());
}

/// (d+2)x(d+2) matrix
///   | 1  0      0 |
///   | v  e^{tJ} 0 |
///   | t  0      1 |
inline CMatrix to_matrix(const GroupElement & g)
{
  const int d = g.group()->d();
  CMatrix m = CMatrix::Zero(d + 2, d + 2);
  m(0, 0) = 1.0;
  m.block(1, 0, d, 1) = g.v();
  m.block(1, 1, d, d) = g.group()->exp_tJ(g.t());
  m(d + 1, 0) = g.t();
  m(d + 1, d + 1) = 1.0;
  return m;
}

/// Algebra element in the same (d+2)x(d+2) representation: the derivative of
/// to_matrix along the curve tau -> [tau v, tau t].
inline CMatrix algebra_matrix(const GroupDescriptor & G, const AlgebraElement & x)
{
  const int d = G.d();
  CMatrix m = CMatrix::Zero(d + 2, d + 2);
  m.block(1, 0, d, 1) = x.v;
  m.block(1, 1, d, d) = x.t * G.J();
  m(d + 1, 0) = x.t;
  return m;
}

/// Exponential on the Abelian subalgebra ker(J) + C, where exp((v,t)) = [v,t].
inline GroupElement exp_restricted(const GroupPtr & group, const AlgebraElement & x, double tol = kDefaultTol)
{
  if (x.v.size() != group->d()) {
    throw std::invalid_argument("algebra element has wrong dimension");
  }
  const double scale = std::max(1.0, max_abs(x.v));
  if (max_abs(group->J() * x.v) > tol * scale) {
    throw std::domain_error("exp_restricted: v is not in ker J(aleph)");
  }
  return GroupElement(group, x.v, x.t);
}

/// Full exponential map via a dense matrix exponential of the algebra
/// representation. The result is read back from the first column.
inline GroupElement exp_full(const GroupPtr & group, const AlgebraElement & x)
{
  if (x.v.size() != group->d()) {
    throw std::invalid_argument("algebra element has wrong dimension");
  }
  const int d = group->d();
  const CMatrix e = algebra_matrix(*group, x).exp();
  return GroupElement(group, e.block(1, 0, d, 1), e(d + 1, 0));
}

/// [(u,s),(v,t)] = (s Jv - t Ju, 0)
inline AlgebraElement bracket(const GroupDescriptor & G, const AlgebraElement & x, const AlgebraElement & y)
{
  if (x.v.size() != G.d() || y.v.size() != G.d()) {
    throw std::invalid_argument("bracket: operands have wrong dimension");
  }
  return {x.t * (G.J() * y.v) - y.t * (G.J() * x.v), 0.0};
}

// ---------------------------------------------------------------------------
// Center

enum class TorusLattice
{
  trivial,
  cyclic,
  full
};

enum class Confidence
{
  exact,
  tolerance_based
};

/// Z(G) = { [u,s] : u in ker J, e^{sJ} = 1 }.
struct CenterDescription
{
  std::vector<CVector> kernel_basis;
  TorusLattice torus = TorusLattice::trivial;
  /// Generator of T_aleph when torus == cyclic.
  Complex generator{0.0, 0.0};
  Confidence confidence = Confidence::exact;
};

namespace detail
{

/// Best rational p/q with q <= max_den and |x - p/q| <= tol, by continued
/// fraction convergents.
inline std::optional<std::pair<long long, long long>> rational_approx(double x, long long max_den, double tol)
{
  long long p_prev = 1, q_prev = 0;
  long long p = static_cast<long long>(std::floor(x)), q = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) <= tol) {
      return std::make_pair(p, q);
    }
    if (frac < 1e-300) break;
    const double inv = 1.0 / frac;
    const auto a = static_cast<long long>(std::floor(inv));
    frac = inv - std::floor(inv);
    const long long p_next = a * p + p_prev;
    const long long q_next = a * q + q_prev;
    if (q_next > max_den) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return std::nullopt;
}

inline constexpr long long kMaxDenominator = 1'000'000;
inline constexpr double kRationalTol = 1e-9;

} // namespace detail

inline CenterDescription center(const GroupDescriptor & G, double tol = kDefaultTol)
{
  CenterDescription out;
  const int d = G.d();
  const auto & layout = G.jordan().layout();

  // ker J is spanned by the leading basis vector of every mu = 0 block.
  for (const auto & block : layout) {
    if (block.mu == Complex(0.0)) {
      CVector u = CVector::Zero(d);
      u(block.offset) = 1.0;
      out.kernel_basis.push_back(std::move(u));
    }
  }

  if (G.abelian()) {
    out.torus = TorusLattice::full;
    return out;
  }
  for (const auto & block : layout) {
    // e^{sJ} has s e^{s mu} on the superdiagonal, forcing s = 0
    if (block.size >= 2) {
      out.torus = TorusLattice::trivial;
      return out;
    }
  }

  std::vector<Complex> eigen;
  for (const auto & block : layout) {
    if (block.mu != Complex(0.0) &&
        std::find(eigen.begin(), eigen.end(), block.mu) == eigen.end()) {
      eigen.push_back(block.mu);
    }
  }

  // e^{s mu_k} = 1  <=>  s w_k in Z  with w_k = mu_k / 2 pi i.
  const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
  const Complex w0 = eigen.front() / two_pi_i;
  long long lcm = 1;
  if (eigen.size() > 1) {
    out.confidence = Confidence::tolerance_based;
  }
  for (std::size_t k = 1; k < eigen.size(); ++k) {
    const Complex ratio = (eigen[k] / two_pi_i) / w0;
    if (std::abs(ratio.imag()) > detail::kRationalTol * std::max(1.0, std::abs(ratio))) {
      out.torus = TorusLattice::trivial;
      return out;
    }
    const auto pq = detail::rational_approx(ratio.real(), detail::kMaxDenominator, detail::kRationalTol);
    if (!pq || pq->first == 0) {
      out.torus = TorusLattice::trivial;
      return out;
    }
    lcm = std::lcm(lcm, pq->second);
    if (lcm > detail::kMaxDenominator) {
      out.torus = TorusLattice::trivial;
      return out;
    }
  }

  Complex s0 = static_cast<double>(lcm) / w0;
  if (s0.real() < 0.0 || (s0.real() == 0.0 && s0.imag() < 0.0)) {
    s0 = -s0;
  }
  // clean signed zeros so the generator prints canonically
  s0 = Complex(s0.real() + 0.0, s0.imag() + 0.0);

  const CMatrix residual = G.exp_tJ(s0) - CMatrix::Identity(d, d);
  if (max_abs(residual) > tol) {
    out.torus = TorusLattice::trivial;
    out.confidence = Confidence::tolerance_based;
    return out;
  }
  out.torus = TorusLattice::cyclic;
  out.generator = s0;
  return out;
}

/// Residuals of the two centrality conditions for [v,t]: |Jv| and |e^{tJ} - 1|.
struct CentralityResiduals
{
  double kernel;
  double torus;
};

inline CentralityResiduals centrality_residuals(const GroupElement & g)
{
  const auto & G = *g.group();
  return {max_abs(G.J() * g.v()), max_abs(G.exp_tJ(g.t()) - CMatrix::Identity(G.d(), G.d()))};
}

inline bool is_central(const GroupElement & g, double tol = kDefaultTol)
{
  const auto r = centrality_residuals(g);
  return r.kernel <= tol && r.torus <= tol;
}

inline const char * to_string(TorusLattice lattice)
{
  switch (lattice) {
  case TorusLattice::trivial: return "trivial";
  case TorusLattice::cyclic: return "cyclic";
  case TorusLattice::full: return "full";
  }
  return "?";
}

inline const char * to_string(Confidence c)
{
  return c == Confidence::exact ? "exact" : "tolerance-based";
}

} // namespace almab

#endif
