// Acceptance battery. One line per criterion; non-zero exit if any fails.

#include "almab/almab.hpp"
#include "almab/selftest.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace almab;

namespace
{

struct Check
{
  std::string what;
  double worst;
  double threshold;
  bool at_most = true; // worst <= threshold, otherwise worst > threshold

  bool passed() const { return at_most ? worst <= threshold : worst > threshold; }
};

struct Criterion
{
  int id;
  std::string title;
  std::vector<Check> checks;

  bool passed() const
  {
    return std::all_of(checks.begin(), checks.end(), [](const Check & c) { return c.passed(); });
  }
};

std::vector<std::pair<NamedGroup, GroupPtr>> battery()
{
  std::vector<std::pair<NamedGroup, GroupPtr>> out;
  for (const auto & entry : standard_battery()) out.emplace_back(entry, GroupDescriptor::make(entry.aleph));
  return out;
}

double coords_gap(const GroupElement & a, const oracle::Coords & b)
{
  return std::max(max_abs(a.v() - b.v), std::abs(a.t() - b.t));
}

double coords_gap(const GroupElement & a, const GroupElement & b)
{
  return std::max(max_abs(a.v() - b.v()), std::abs(a.t() - b.t()));
}

CRowVector coords_row(const oracle::Coords & c)
{
  const auto d = c.v.size();
  CRowVector r(d + 1);
  r.head(d) = c.v.transpose();
  r(d) = c.t;
  return r;
}

Criterion structured_exponential()
{
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  double worst_wide = 0.0;
  const auto groups = battery();
  for (int k = 0; k < 100; ++k) {
    // alternate between battery descriptors and random ones
    const MultiplicityFunction aleph =
        k % 2 == 0 ? groups[static_cast<std::size_t>(k / 2) % groups.size()].first.aleph : gen::random_aleph(rng, 6);
    const JordanMatrix J = build_jordan(aleph);
    const Complex t(unit(rng), unit(rng));
    worst = std::max(worst, max_abs(jordan_exp(J, t) - oracle::dense_exp(t * J.entries())));
    // |t| up to 2 sqrt 2: entries reach e^{4 pi}, so compare relative to the largest
    const Complex wide = 2.0 * Complex(unit(rng), unit(rng));
    const CMatrix dense = oracle::dense_exp(wide * J.entries());
    worst_wide = std::max(worst_wide, max_abs(jordan_exp(J, wide) - dense) / std::max(1.0, max_abs(dense)));
  }
  return {1,
          "structured exponential vs dense oracle",
          {{"max elementwise error, 100 cases, t in unit box", worst, 1e-10},
           {"relative error, t in [-2,2]^2", worst_wide, 1e-10}}};
}

Criterion group_law()
{
  std::mt19937_64 rng(201);
  ElementSampler sample(202);
  const auto groups = battery();
  double law = 0.0;
  double assoc = 0.0;
  double inv = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const GroupPtr G = k % 2 == 0 ? groups[static_cast<std::size_t>(k / 2) % groups.size()].second
                                  : GroupDescriptor::make(gen::random_aleph(rng, 6));
    const GroupElement g = sample.element(G);
    const GroupElement h = sample.element(G);
    const GroupElement x = sample.element(G);
    law = std::max(law, coords_gap(multiply(g, h), oracle::matrix_product(G->J(), {g.v(), g.t()}, {h.v(), h.t()})));
    assoc = std::max(assoc, coords_gap(multiply(multiply(g, h), x), multiply(g, multiply(h, x))));
    const GroupElement e = GroupElement::identity(G);
    inv = std::max({inv, coords_gap(multiply(g, inverse(g)), e), coords_gap(multiply(inverse(g), g), e)});
  }
  return {2,
          "group law",
          {{"multiply vs matrix product, 1000 pairs", law, 1e-10},
           {"associativity", assoc, 1e-10},
           {"g g^-1 and g^-1 g at identity", inv, 1e-12}}};
}

Criterion haar()
{
  ElementSampler sample(301);
  double left = 0.0;
  double right = 0.0;
  double jac_oracle = 0.0;
  double hom = 0.0;
  double nil = 0.0;
  for (const auto & [entry, G] : battery()) {
    for (int k = 0; k < 200; ++k) {
      const GroupElement g = sample.element(G);
      const GroupElement x = sample.element(G);
      left = std::max(left, check_left_invariance(g, x));
      right = std::max(right, check_right_invariance(g, x));
      // left Jacobian from the dense exponential, |det e^{sJ}|^2
      const double dense = std::norm(oracle::dense_exp(g.t() * G->J()).determinant());
      jac_oracle = std::max(jac_oracle, std::abs(real_jacobian_left(g) - dense) / dense);
      const double lhs = modular(multiply(g, x));
      hom = std::max(hom, std::abs(lhs - modular(g) * modular(x)) / lhs);
    }
  }
  const GroupPtr N = GroupDescriptor::make(standard_battery()[0].aleph);
  for (int k = 0; k < 200; ++k) nil = std::max(nil, std::abs(modular(sample.element(N)) - 1.0));
  return {3,
          "Haar invariance",
          {{"left residual (relative), 200 pairs x 6 descriptors", left, 1e-10},
           {"right residual", right, 1e-12},
           {"left Jacobian vs dense determinant (relative)", jac_oracle, 1e-10},
           {"modular homomorphism (relative)", hom, 1e-10},
           {"modular = 1 on nilpotent descriptor", nil, 0.0}}};
}

Criterion frames()
{
  ElementSampler sample(401);
  const double h = 1e-4;
  double dual = 0.0;
  double gen_err = 0.0;
  double invariance = 0.0;
  for (const auto & [entry, G] : battery()) {
    const int n = G->dim();
    const CMatrix I = CMatrix::Identity(n, n);
    for (int k = 0; k < 100; ++k) {
      const GroupElement p = sample.element(G);
      const GroupElement g = sample.element(G);
      for (Side side : {Side::left, Side::right}) {
        dual = std::max(dual, max_abs(frame_at(coframe_kind(side), p) * frame_at(frame_kind(side), p) - I));
        invariance = std::max(invariance, check_frame_invariance(frame_kind(side), g, p));
      }
      // generator fields against curves built from dense exponentials
      const CVector u = sample.vector(G->d());
      const Complex s = sample.scalar();
      CRowVector x(n);
      x.head(n - 1) = u.transpose();
      x(n - 1) = s;
      const oracle::Coords pc{p.v(), p.t()};
      auto left_curve = [&](double tau) {
        return coords_row(oracle::matrix_product(G->J(), oracle::algebra_exp(G->J(), tau * u, tau * s), pc));
      };
      auto right_curve = [&](double tau) {
        return coords_row(oracle::matrix_product(G->J(), pc, oracle::algebra_exp(G->J(), tau * u, tau * s)));
      };
      const CRowVector fd_l = (left_curve(h) - left_curve(-h)) / (2 * h);
      const CRowVector fd_r = (right_curve(h) - right_curve(-h)) / (2 * h);
      const CRowVector lx = left_generator(x, p);
      const CRowVector rx = right_generator(x, p);
      gen_err = std::max({gen_err, max_abs(lx - fd_l) / std::max(1.0, max_abs(lx)),
                          max_abs(rx - fd_r) / std::max(1.0, max_abs(rx))});
    }
  }
  return {4,
          "invariant frames",
          {{"coframe * frame = I, 100 points x 6 descriptors x 2 sides", dual, 1e-12},
           {"generator fields vs central differences, step 1e-4 (relative)", gen_err, 1e-6},
           {"frame pushforward invariance (relative per column)", invariance, 1e-10}}};
}

Criterion kahler()
{
  ElementSampler sample(501);
  double verdict_errors = 0.0;
  double disagreements = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double oracle_gap = 0.0;
  double abelian_obstruction = 0.0;
  double abelian_domega = 0.0;
  double abelian_flags = 0.0;
  for (const auto & [entry, G] : battery()) {
    CMatrix Jpad = CMatrix::Zero(G->dim(), G->dim());
    std::vector<std::pair<Complex, int>> blocks;
    for (const auto & b : entry.aleph.blocks())
      for (int m = 0; m < b.mult; ++m) blocks.emplace_back(b.mu, b.size);
    Jpad.topLeftCorner(G->d(), G->d()) = oracle::jordan_from_blocks(blocks);
    for (int k = 0; k < 100; ++k) {
      const HermitianForm h = sample.metric(G->dim());
      const double scale = h.coeffs().norm();
      const CMatrix expected = -Jpad.transpose() * (Complex(0, 0.5) * h.coeffs());
      oracle_gap = std::max(oracle_gap, max_abs(kahler_obstruction(*G, fundamental_form(h)) - expected) / scale);
      const KahlerVerdict v = kahler_verdict(*G, h);
      if (!v.method_agreement) disagreements += 1;
      if (G->abelian()) {
        abelian_obstruction = std::max(abelian_obstruction, v.obstruction_norm);
        abelian_domega = std::max(abelian_domega, v.domega_residual);
        if (!v.is_kahler || !v.abelian_caveat) abelian_flags += 1;
      } else {
        if (v.is_kahler) verdict_errors += 1;
        min_ratio = std::min(min_ratio, v.obstruction_norm / scale);
      }
    }
  }
  return {5,
          "no invariant Kahler metrics on non-Abelian descriptors",
          {{"non-Abelian cases reported Kahler", verdict_errors, 0.0},
           {"min obstruction / |h|_F over non-Abelian cases", min_ratio, 1e-6, false},
           {"reduction and structure checks disagree", disagreements, 0.0},
           {"obstruction vs hand-built (-J+0)^T omega (relative)", oracle_gap, 1e-14},
           {"Abelian control obstruction", abelian_obstruction, 1e-12},
           {"Abelian control d omega residual", abelian_domega, 1e-12},
           {"Abelian control not Kahler or missing caveat", abelian_flags, 0.0}}};
}

Criterion domega_cross()
{
  ElementSampler sample(601);
  double dichotomy = 0.0;
  double spread = 0.0;
  double gap = 0.0;
  for (const auto & [entry, G] : battery()) {
    for (int m = 0; m < 5; ++m) {
      const HermitianForm h = sample.metric(G->dim());
      const FundamentalForm w = fundamental_form(h);
      const double structure = domega_structure_constants(*G, w);
      const double zero_tol = kDefaultTol * h.coeffs().norm();
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      for (int k = 0; k < 10; ++k) {
        const double coord = domega_coordinates(*G, w, sample.element(G));
        lo = std::min(lo, coord);
        hi = std::max(hi, coord);
        if ((coord <= zero_tol) != (structure <= zero_tol)) dichotomy += 1;
        gap = std::max(gap, std::abs(coord - structure));
      }
      spread = std::max(spread, hi - lo);
    }
  }
  return {6,
          "coordinate vs structure-constant d omega",
          {{"zero/nonzero disagreements over 10 points", dichotomy, 0.0},
           {"coordinate residual spread across points", spread, 1e-10},
           {"coordinate vs structure-constant value", gap, 1e-8}}};
}

Criterion center_check()
{
  const auto groups = battery();
  const CenterDescription periodic = center(*groups[2].second);
  const double gen_err =
      periodic.torus == TorusLattice::cyclic ? std::abs(periodic.generator - Complex(1.0)) : 1.0;

  std::mt19937_64 rng(701);
  double big_block_not_trivial = 0.0;
  double kernel = 0.0;
  auto visit = [&](const GroupDescriptor & G) {
    const CenterDescription c = center(G);
    bool big = false;
    for (const auto & b : G.jordan().layout()) big = big || b.size >= 2;
    if (big && c.torus != TorusLattice::trivial) big_block_not_trivial += 1;
    for (const auto & u : c.kernel_basis) kernel = std::max(kernel, (G.J() * u).norm());
  };
  for (const auto & [entry, G] : groups) visit(*G);
  for (int k = 0; k < 200; ++k) visit(*GroupDescriptor::make(gen::random_aleph(rng, 6)));
  return {7,
          "center",
          {{"periodic descriptor: cyclic with generator 1", gen_err, 1e-10},
           {"block of size >= 2 without trivial lattice", big_block_not_trivial, 0.0},
           {"|J u| over kernel bases", kernel, 1e-12}}};
}

Criterion quotient()
{
  ElementSampler sample(801);
  const auto groups = battery();
  double residual = 0.0;

  auto cover_check = [&](const GroupPtr & G, const std::vector<GroupElement> & gens) {
    const DiscreteSubgroup gamma = verify_central(G, gens);
    for (const auto & g : gens) {
      std::vector<GroupElement> pts;
      for (int k = 0; k < 50; ++k) pts.push_back(sample.element(G));
      const DiscreteSubgroup single = verify_central(G, {g});
      for (Side side : {Side::left, Side::right}) {
        residual = std::max(residual, check_right_gamma_invariance(sample.metric(G->dim(), side), single, pts));
      }
    }
    return gamma;
  };
  const GroupPtr P = groups[2].second;
  cover_check(P, {GroupElement(P, CVector::Zero(1), 1.0), GroupElement(P, CVector::Zero(1), -3.0)});
  const GroupPtr N = groups[0].second;
  CVector a(2), b(2);
  a << 1.0, 0.0;
  b << Complex(0, 1), 0.0;
  cover_check(N, {GroupElement(N, a, 0.0), GroupElement(N, b, 0.0)});

  double verdict_mismatch = 0.0;
  for (const auto & [entry, G] : groups) {
    const CenterDescription c = center(*G);
    std::vector<GroupElement> gens;
    for (const auto & u : c.kernel_basis) gens.emplace_back(G, u, 0.0);
    if (c.torus == TorusLattice::cyclic) gens.emplace_back(G, CVector::Zero(G->d()), c.generator);
    const DiscreteSubgroup gamma = verify_central(G, gens);
    for (int k = 0; k < 20; ++k) {
      for (Side side : {Side::left, Side::right}) {
        const HermitianForm h = sample.metric(G->dim(), side);
        if (kahler_verdict_connected(*G, gamma, h).is_kahler != is_kahler(*G, h).is_kahler) verdict_mismatch += 1;
      }
    }
  }
  return {8,
          "central quotients",
          {{"right-Gamma residual, 50 points per generator", residual, 1e-10},
           {"connected verdict differs from cover verdict", verdict_mismatch, 0.0}}};
}

Criterion right_analogue()
{
  ElementSampler sample(901);
  double mismatch = 0.0;
  double verdict_mismatch = 0.0;
  for (const auto & [entry, G] : battery()) {
    for (int k = 0; k < 100; ++k) {
      const CMatrix coeffs = sample.metric(G->dim()).coeffs();
      const HermitianForm hl(coeffs, Side::left);
      const HermitianForm hr(coeffs, Side::right);
      const double zero_tol = kDefaultTol * coeffs.norm();
      const bool left_zero = kahler_obstruction(*G, fundamental_form(hl)).norm() <= zero_tol;
      const bool right_zero = kahler_obstruction(*G, fundamental_form(hr)).norm() <= zero_tol;
      if (left_zero != right_zero) mismatch += 1;
      if (is_kahler(*G, hl).is_kahler != is_kahler(*G, hr).is_kahler) verdict_mismatch += 1;
    }
  }
  return {9,
          "right-invariant analogue",
          {{"right vs left obstruction dichotomy mismatches", mismatch, 0.0},
           {"right vs left verdict mismatches", verdict_mismatch, 0.0}}};
}

} // namespace

int main()
{
  const std::vector<std::function<Criterion()>> criteria = {structured_exponential, group_law, haar,
                                                            frames, kahler, domega_cross,
                                                            center_check, quotient, right_analogue};
  int failures = 0;
  for (const auto & run : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = run();
    } catch (const std::exception & e) {
      std::printf("FAIL  threw: %s\n", e.what());
      ++failures;
      continue;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %d. %s (%.2fs)\n", c.passed() ? "PASS" : "FAIL", c.id, c.title.c_str(), seconds);
    for (const auto & check : c.checks) {
      std::printf("        %-4s %-64s %.3e %s %.1e\n", check.passed() ? "ok" : "BAD", check.what.c_str(), check.worst,
                  check.at_most ? "<=" : ">", check.threshold);
    }
    if (!c.passed()) ++failures;
  }
  std::printf("%s: %d of %zu criteria passed\n", failures == 0 ? "ACCEPTED" : "REJECTED",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
