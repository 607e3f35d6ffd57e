#ifndef ALMAB_SELFTEST_HPP
#define ALMAB_SELFTEST_HPP

#include "almab/core.hpp"
#include "almab/frames.hpp"
#include "almab/group.hpp"
#include "almab/hermitian.hpp"
#include "almab/measures.hpp"
#include "almab/multiplicity.hpp"
#include "almab/quotient.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cstdint>
#include <future>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace almab
{

struct NamedGroup
{
  std::string name;
  MultiplicityFunction aleph;
};

/// Reference descriptors, d <= 6: nilpotent, real diagonal, imaginary
/// periodic, repeated imaginary, mixed, and the Abelian control.
inline std::vector<NamedGroup> standard_battery()
{
  const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
  return {
      {"nilpotent N2", MultiplicityFunction({{0.0, 2, 1}})},
      {"real diagonal", MultiplicityFunction({{1.0, 1, 1}})},
      {"periodic 2 pi i", MultiplicityFunction({{two_pi_i, 1, 1}})},
      {"imaginary pair", MultiplicityFunction({{Complex(0.0, 1.0), 1, 2}})},
      {"mixed", MultiplicityFunction({{1.0, 2, 1}, {0.0, 1, 1}})},
      {"abelian control", MultiplicityFunction({{0.0, 1, 2}})},
  };
}

/// Uniform sampling in the chart, components in [-scale, scale].
class ElementSampler
{
public:
  explicit ElementSampler(std::uint64_t seed, double scale = 1.0) : m_rng(seed), m_unit(-scale, scale) {}

  Complex scalar() { return {m_unit(m_rng), m_unit(m_rng)}; }

  CVector vector(int n)
  {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = scalar();
    return v;
  }

  GroupElement element(const GroupPtr & group) { return GroupElement(group, vector(group->d()), scalar()); }

  /// h = A A^* + 1/2, A with entries in the unit box.
  HermitianForm metric(int dim, Side side = Side::left)
  {
    CMatrix A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = scalar();
    return HermitianForm(A * A.adjoint() + 0.5 * CMatrix::Identity(dim, dim), side);
  }

  std::mt19937_64 & rng() { return m_rng; }

private:
  std::mt19937_64 m_rng;
  std::uniform_real_distribution<double> m_unit;
};

struct SelftestResult
{
  std::string name;
  bool passed;
  double worst;
  double threshold;
};

namespace detail
{

inline std::vector<SelftestResult> selftest_group(const NamedGroup & entry, std::uint64_t seed)
{
  const GroupPtr G = GroupDescriptor::make(entry.aleph);
  const int d = G->d();
  ElementSampler sample(seed);
  std::vector<SelftestResult> out;
  auto record = [&](const std::string & what, double worst, double threshold) {
    out.push_back({entry.name + ": " + what, worst <= threshold, worst, threshold});
  };

  double exp_err = 0.0;
  double law_err = 0.0;
  double inv_err = 0.0;
  double haar_l = 0.0;
  double haar_r = 0.0;
  double dual_err = 0.0;
  double frame_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Complex t = sample.scalar();
    exp_err = std::max(exp_err, max_abs(jordan_exp(G->jordan(), t) - (t * G->J()).exp()));
    const GroupElement g = sample.element(G);
    const GroupElement x = sample.element(G);
    // compare the coordinates (v, t) read off the first column of the product
    const GroupElement gx = multiply(g, x);
    const CMatrix m = to_matrix(g) * to_matrix(x);
    law_err = std::max({law_err, max_abs(gx.v() - m.block(1, 0, d, 1)), std::abs(gx.t() - m(d + 1, 0))});
    const GroupElement e = multiply(g, inverse(g));
    inv_err = std::max(inv_err, std::max(max_abs(e.v()), std::abs(e.t())));
    haar_l = std::max(haar_l, check_left_invariance(g, x));
    haar_r = std::max(haar_r, check_right_invariance(g, x));
    for (Side side : {Side::left, Side::right}) {
      dual_err = std::max(dual_err, max_abs(frame_at(coframe_kind(side), x) * frame_at(frame_kind(side), x) -
                                            CMatrix::Identity(d + 1, d + 1)));
      frame_err = std::max(frame_err, check_frame_invariance(frame_kind(side), g, x));
    }
  }
  record("structured exponential vs dense", exp_err, 1e-10);
  record("group law vs matrix product", law_err, 1e-10);
  record("inverse", inv_err, 1e-12);
  record("left Haar invariance", haar_l, 1e-10);
  record("right Haar invariance", haar_r, 1e-12);
  record("frame duality", dual_err, 1e-12);
  record("frame invariance", frame_err, 1e-10);

  int disagreements = 0;
  int wrong_verdicts = 0;
  for (int k = 0; k < 100; ++k) {
    for (Side side : {Side::left, Side::right}) {
      const HermitianForm h = sample.metric(d + 1, side);
      const KahlerVerdict v = kahler_verdict(*G, h);
      if (!v.method_agreement) ++disagreements;
      if (v.is_kahler != G->abelian()) ++wrong_verdicts;
    }
  }
  record("Kahler checks agree", disagreements, 0);
  record("Kahler verdict matches Abelian-ness", wrong_verdicts, 0);
  return out;
}

} // namespace detail

/// Full property battery; one task per descriptor with seed = base + index.
inline std::vector<SelftestResult> run_selftest(std::uint64_t seed)
{
  const auto battery = standard_battery();
  std::vector<std::future<std::vector<SelftestResult>>> tasks;
  for (std::size_t k = 0; k < battery.size(); ++k) {
    tasks.push_back(std::async(std::launch::async, detail::selftest_group, battery[k], seed + k));
  }
  std::vector<SelftestResult> out;
  for (auto & task : tasks) {
    for (auto & r : task.get()) out.push_back(std::move(r));
  }

  // Center of the periodic descriptor.
  const GroupPtr periodic = GroupDescriptor::make(battery[2].aleph);
  const CenterDescription c = center(*periodic);
  const double gen_err = c.torus == TorusLattice::cyclic ? std::abs(c.generator - Complex(1.0)) : 1.0;
  out.push_back({"center: periodic generator", gen_err <= 1e-10, gen_err, 1e-10});
  return out;
}

} // namespace almab

#endif
