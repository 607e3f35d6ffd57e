#ifndef ALMAB_FRAMES_HPP
#define ALMAB_FRAMES_HPP

#include "almab/core.hpp"
#include "almab/group.hpp"
#include "almab/measures.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace almab
{

// Tangent vectors are rows of length d+1 in the chart (v,t), X = (u^T, s).
// Frame matrices hold vector fields as columns; coframe matrices hold
// covector fields as rows, so coframe(p) * frame(p) = 1.

enum class FrameKind
{
  left_frame,
  right_frame,
  left_coframe,
  right_coframe
};

inline const char * to_string(FrameKind kind)
{
  switch (kind) {
  case FrameKind::left_frame: return "left-frame";
  case FrameKind::right_frame: return "right-frame";
  case FrameKind::left_coframe: return "left-coframe";
  case FrameKind::right_coframe: return "right-coframe";
  }
  return "?";
}

inline FrameKind frame_kind(Side side) { return side == Side::left ? FrameKind::left_frame : FrameKind::right_frame; }
inline FrameKind coframe_kind(Side side)
{
  return side == Side::left ? FrameKind::left_coframe : FrameKind::right_coframe;
}

namespace detail
{
inline void require_row(const GroupElement & point, const CRowVector & x)
{
  if (x.size() != point.group()->dim()) {
    throw std::invalid_argument("tangent row has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(point.group()->dim()));
  }
}
} // namespace detail

/// Left generator field, the derivative of tau -> exp(tau X) p:
///   L_X(v,t) = X | 1       0 |
///                | v^T J^T 1 |
inline CRowVector left_generator(const CRowVector & x, const GroupElement & point)
{
  detail::require_row(point, x);
  const int d = point.group()->d();
  CMatrix m = CMatrix::Identity(d + 1, d + 1);
  m.bottomLeftCorner(1, d) = (point.group()->J() * point.v()).transpose();
  return x * m;
}

/// Right generator field, the derivative of tau -> p exp(tau X):
///   R_X(v,t) = X (e^{tJ^T} (+) 1)
inline CRowVector right_generator(const CRowVector & x, const GroupElement & point)
{
  detail::require_row(point, x);
  const int d = point.group()->d();
  CMatrix m = CMatrix::Identity(d + 1, d + 1);
  m.topLeftCorner(d, d) = point.group()->exp_tJ(point.t()).transpose();
  return x * m;
}

/// Invariant frames and coframes at a point:
///   left-frame    e^{tJ} (+) 1        right-frame    | 1  Jv |
///   left-coframe  e^{-tJ} (+) 1       right-coframe  | 1 -Jv |
inline CMatrix frame_at(FrameKind kind, const GroupElement & point)
{
  const auto & G = *point.group();
  const int d = G.d();
  CMatrix m = CMatrix::Identity(d + 1, d + 1);
  switch (kind) {
  case FrameKind::left_frame: m.topLeftCorner(d, d) = G.exp_tJ(point.t()); break;
  case FrameKind::left_coframe: m.topLeftCorner(d, d) = G.exp_tJ(-point.t()); break;
  case FrameKind::right_frame: m.topRightCorner(d, 1) = G.J() * point.v(); break;
  case FrameKind::right_coframe: m.topRightCorner(d, 1) = -(G.J() * point.v()); break;
  }
  return m;
}

/// Antiholomorphic counterpart: the elementwise conjugate.
inline CMatrix antiholomorphic_frame_at(FrameKind kind, const GroupElement & point)
{
  return frame_at(kind, point).conjugate();
}

/// max_i |dT_g(p) X_i(p) - X_i(T_g p)| / max(1, |X_i(T_g p)|) for T_g left
/// (resp. right) translation. Frame columns grow like |e^{tJ}|, hence the
/// relative form. Only frame kinds are accepted; coframes transform
/// contravariantly.
inline double check_frame_invariance(FrameKind kind, const GroupElement & g, const GroupElement & point)
{
  detail::require_same_group(g, point);
  CMatrix pushed;
  CMatrix target;
  switch (kind) {
  case FrameKind::left_frame:
    pushed = left_translation_jacobian(g) * frame_at(kind, point);
    target = frame_at(kind, multiply(g, point));
    break;
  case FrameKind::right_frame:
    pushed = right_translation_jacobian(g, point) * frame_at(kind, point);
    target = frame_at(kind, multiply(point, g));
    break;
  default: throw std::invalid_argument("check_frame_invariance: expected a frame, got a coframe");
  }
  const Eigen::ArrayXd scale = target.colwise().norm().transpose().array().max(1.0);
  return ((pushed - target).colwise().norm().transpose().array() / scale).maxCoeff();
}

// ---------------------------------------------------------------------------
// Invariant tensor fields with constant frame coefficients.

/// Type (m,n) (x) conj(p,q): m holomorphic vector slots, n holomorphic
/// covector slots, p antiholomorphic vector slots, q antiholomorphic covector
/// slots.
struct TensorSignature
{
  int m = 0;
  int n = 0;
  int p = 0;
  int q = 0;

  int rank() const { return m + n + p + q; }
  friend bool operator==(const TensorSignature &, const TensorSignature &) = default;
};

/// Dense row-major multi-array of extent (d+1) per axis. Axis order follows the
/// coefficient symbol T^{i_1..i_m, k_1..k_p}_{j_1..j_n, l_1..l_q}: holomorphic
/// upper, antiholomorphic upper, holomorphic lower, antiholomorphic lower.
class InvariantTensor
{
public:
  static constexpr int kDefaultMaxRank = 4;

  InvariantTensor(TensorSignature signature, int extent, std::vector<Complex> coefficients, Side side = Side::left,
                  int max_rank = kDefaultMaxRank)
    : m_signature(signature), m_extent(extent), m_coefficients(std::move(coefficients)), m_side(side)
  {
    if (signature.m < 0 || signature.n < 0 || signature.p < 0 || signature.q < 0) {
      throw std::invalid_argument("tensor signature entries must be non-negative");
    }
    if (signature.rank() > max_rank) {
      throw std::invalid_argument("tensor rank " + std::to_string(signature.rank()) + " exceeds limit " +
                                  std::to_string(max_rank));
    }
    if (extent < 1) {
      throw std::invalid_argument("tensor extent must be positive");
    }
    if (m_coefficients.size() != element_count(extent, signature.rank())) {
      throw std::invalid_argument("coefficient array has wrong size for signature");
    }
  }

  /// (0,1,0,1) tensor from a (d+1)x(d+1) coefficient matrix h_ij.
  static InvariantTensor sesquilinear(const CMatrix & coeffs, Side side = Side::left)
  {
    std::vector<Complex> flat(static_cast<std::size_t>(coeffs.size()));
    for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
      for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
        flat[static_cast<std::size_t>(i * coeffs.cols() + j)] = coeffs(i, j);
      }
    }
    return InvariantTensor({0, 1, 0, 1}, static_cast<int>(coeffs.rows()), std::move(flat), side);
  }

  const TensorSignature & signature() const { return m_signature; }
  int extent() const { return m_extent; }
  Side side() const { return m_side; }
  const std::vector<Complex> & coefficients() const { return m_coefficients; }

  static std::size_t element_count(int extent, int rank)
  {
    std::size_t count = 1;
    for (int r = 0; r < rank; ++r) count *= static_cast<std::size_t>(extent);
    return count;
  }

private:
  TensorSignature m_signature;
  int m_extent;
  std::vector<Complex> m_coefficients;
  Side m_side;
};

namespace detail
{
/// out[.., a, ..] = sum_i M(a, i) in[.., i, ..] along `axis`.
inline std::vector<Complex> mode_product(const std::vector<Complex> & in, int extent, int rank, int axis,
                                         const CMatrix & M)
{
  std::size_t inner = 1;
  for (int r = axis + 1; r < rank; ++r) inner *= static_cast<std::size_t>(extent);
  const std::size_t n = static_cast<std::size_t>(extent);
  const std::size_t outer = in.size() / (inner * n);
  std::vector<Complex> out(in.size(), Complex(0.0));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t i = 0; i < n; ++i) {
        const Complex w = M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i));
        if (w == Complex(0.0)) continue;
        const Complex * src = &in[(o * n + i) * inner];
        Complex * dst = &out[(o * n + a) * inner];
        for (std::size_t k = 0; k < inner; ++k) dst[k] += w * src[k];
      }
    }
  }
  return out;
}
} // namespace detail

/// Coordinate components of T at a point, same axis layout as the coefficients.
/// For a (0,1,0,1) tensor this is h_ab = h^_ij X^i_a conj(X^j_b).
inline std::vector<Complex> evaluate_invariant_tensor(const InvariantTensor & T, const GroupElement & point)
{
  if (T.extent() != point.group()->dim()) {
    throw std::invalid_argument("tensor extent does not match group dimension");
  }
  const CMatrix frame = frame_at(frame_kind(T.side()), point);
  const CMatrix coframe = frame_at(coframe_kind(T.side()), point);
  // Transformations applied along each axis class.
  const CMatrix up_holo = frame;                          // X_i^a
  const CMatrix up_anti = frame.conjugate();              // conj(X_k^c)
  const CMatrix down_holo = coframe.transpose();          // X^j_b
  const CMatrix down_anti = coframe.conjugate().transpose();

  const auto & s = T.signature();
  const int rank = s.rank();
  std::vector<Complex> out = T.coefficients();
  int axis = 0;
  for (int r = 0; r < s.m; ++r) out = detail::mode_product(out, T.extent(), rank, axis++, up_holo);
  for (int r = 0; r < s.p; ++r) out = detail::mode_product(out, T.extent(), rank, axis++, up_anti);
  for (int r = 0; r < s.n; ++r) out = detail::mode_product(out, T.extent(), rank, axis++, down_holo);
  for (int r = 0; r < s.q; ++r) out = detail::mode_product(out, T.extent(), rank, axis++, down_anti);
  return out;
}

} // namespace almab

#endif
