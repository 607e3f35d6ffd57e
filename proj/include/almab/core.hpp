#ifndef ALMAB_CORE_HPP
#define ALMAB_CORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace almab
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;

/// Default relative comparison tolerance for complex quantities.
inline constexpr double kDefaultTol = 1e-10;

/// Raised when an input document cannot be turned into a domain value.
/// The message is prefixed with the JSON field path that failed.
class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string & path, const std::string & what)
    : std::runtime_error(path.empty() ? what : path + ": " + what), m_path(path)
  {
  }

  const std::string & path() const { return m_path; }

private:
  std::string m_path;
};

/// Two operands were built from different group descriptors.
class DescriptorMismatch : public std::invalid_argument
{
public:
  DescriptorMismatch() : std::invalid_argument("operands belong to different groups") {}
};

/// Internal cross-check failed: two independent computations of the same
/// quantity disagree. Always an implementation fault, never an input error.
class ConsistencyError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Which translations an invariant object is invariant under.
enum class Side
{
  left,
  right
};

inline const char * to_string(Side side) { return side == Side::left ? "left" : "right"; }

/// Largest absolute entry, 0 for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> & m)
{
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace almab

#endif
