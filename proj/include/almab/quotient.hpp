#ifndef ALMAB_QUOTIENT_HPP
#define ALMAB_QUOTIENT_HPP

#include "almab/core.hpp"
#include "almab/frames.hpp"
#include "almab/group.hpp"
#include "almab/hermitian.hpp"
#include "almab/measures.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace almab
{

/// Generators of a central subgroup Gamma of the simply connected group.
/// Only centrality is validated; discreteness is assumed.
class DiscreteSubgroup
{
public:
  const GroupPtr & group() const { return m_group; }
  const std::vector<GroupElement> & generators() const { return m_generators; }
  static constexpr bool discreteness_verified = false;

private:
  DiscreteSubgroup(GroupPtr group, std::vector<GroupElement> generators)
    : m_group(std::move(group)), m_generators(std::move(generators))
  {
  }

  friend DiscreteSubgroup verify_central(const GroupPtr &, const std::vector<GroupElement> &, double);

  GroupPtr m_group;
  std::vector<GroupElement> m_generators;
};

/// A candidate generator failed the centrality test.
class NonCentralGenerator : public std::invalid_argument
{
public:
  NonCentralGenerator(std::size_t index, CentralityResiduals residuals)
    : std::invalid_argument("generator " + std::to_string(index) + " is not central (|Ju| = " +
                            std::to_string(residuals.kernel) + ", |e^{sJ} - 1| = " +
                            std::to_string(residuals.torus) + ")"),
      m_index(index), m_residuals(residuals)
  {
  }

  std::size_t index() const { return m_index; }
  const CentralityResiduals & residuals() const { return m_residuals; }

private:
  std::size_t m_index;
  CentralityResiduals m_residuals;
};

inline constexpr double kCommuteTol = 1e-12;

inline DiscreteSubgroup verify_central(const GroupPtr & group, const std::vector<GroupElement> & candidates,
                                       double tol = kDefaultTol)
{
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!same_group(*group, *candidates[k].group())) {
      throw DescriptorMismatch();
    }
    const auto residuals = centrality_residuals(candidates[k]);
    if (residuals.kernel > tol || residuals.torus > tol) {
      throw NonCentralGenerator(k, residuals);
    }
  }
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      const GroupElement ab = multiply(candidates[a], candidates[b]);
      const GroupElement ba = multiply(candidates[b], candidates[a]);
      const double scale = std::max({1.0, max_abs(ab.v()), std::abs(ab.t())});
      const double gap = std::max(max_abs(ab.v() - ba.v()), std::abs(ab.t() - ba.t()));
      if (gap > kCommuteTol * scale) {
        throw std::invalid_argument("generators " + std::to_string(a) + " and " + std::to_string(b) +
                                    " do not commute");
      }
    }
  }
  return DiscreteSubgroup(group, candidates);
}

/// Coordinate components h_ab(x) = h^_ij C_ia conj(C_jb) of a constant
/// coefficient metric, C the invariant coframe of the metric's side.
inline CMatrix metric_components(const HermitianForm & h, const GroupElement & x)
{
  const CMatrix C = frame_at(coframe_kind(h.side()), x);
  return C.transpose() * h.coeffs() * C.conjugate();
}

/// max over points x and generators gamma of
///   | D^T h(x gamma) conj(D) - h(x) | / max(1, |h(x)|)
/// where D is the complex Jacobian of right translation by gamma at x.
/// Residuals are relative because the components grow like |e^{-tJ}|^2.
inline double check_right_gamma_invariance(const HermitianForm & h, const DiscreteSubgroup & gamma,
                                           const std::vector<GroupElement> & points)
{
  if (h.dim() != gamma.group()->dim()) {
    throw std::invalid_argument("metric dimension does not match group");
  }
  double worst = 0.0;
  for (const auto & x : points) {
    const CMatrix here = metric_components(h, x);
    const double scale = std::max(1.0, max_abs(here));
    for (const auto & g : gamma.generators()) {
      const CMatrix D = right_translation_jacobian(g, x);
      const CMatrix pulled = D.transpose() * metric_components(h, multiply(x, g)) * D.conjugate();
      worst = std::max(worst, max_abs(pulled - here) / scale);
    }
  }
  return worst;
}

inline constexpr const char * kPullbackProvenance = "pulled back along q_Gamma";

/// Pullback along the covering G~ -> G~/Gamma. Both groups share the
/// invariant coframe and q is a local biholomorphism, so constant
/// coefficients transport unchanged. Positivity is re-verified by the
/// HermitianForm constructor.
inline HermitianForm pullback_metric(const HermitianForm & h_on_quotient, const DiscreteSubgroup & gamma)
{
  if (h_on_quotient.dim() != gamma.group()->dim()) {
    throw std::invalid_argument("metric dimension does not match group");
  }
  return HermitianForm(h_on_quotient.coeffs(), h_on_quotient.side(), kPullbackProvenance);
}

/// Descends a left-invariant, right-Gamma-invariant metric on the cover to
/// the quotient; the inverse of pullback_metric on coefficients.
inline HermitianForm pushforward_metric(const HermitianForm & h_on_cover, const DiscreteSubgroup & gamma)
{
  if (h_on_cover.dim() != gamma.group()->dim()) {
    throw std::invalid_argument("metric dimension does not match group");
  }
  return HermitianForm(h_on_cover.coeffs(), h_on_cover.side(), "descended to G/Gamma");
}

/// Kahler verdict for the connected group G~/Gamma, decided on the cover.
inline KahlerVerdict kahler_verdict_connected(const GroupDescriptor & G, const DiscreteSubgroup & gamma,
                                              const HermitianForm & h, double tol = kDefaultTol)
{
  if (!same_group(G, *gamma.group())) {
    throw DescriptorMismatch();
  }
  return is_kahler(G, pullback_metric(h, gamma), tol);
}

} // namespace almab

#endif
