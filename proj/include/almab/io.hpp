#ifndef ALMAB_IO_HPP
#define ALMAB_IO_HPP

#include "almab/core.hpp"
#include "almab/group.hpp"
#include "almab/hermitian.hpp"
#include "almab/multiplicity.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace almab::io
{

using nlohmann::json;

// Scalars are written as [re, im]; vectors as arrays of those; matrices as
// arrays of rows.

inline json to_json(Complex z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

inline json to_json(const CVector & v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline json to_json(const CMatrix & m)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline CVector vector_from_json(const json & j, const std::string & path)
{
  if (!j.is_array()) throw ParseError(path, "expected an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline CMatrix matrix_from_json(const json & j, const std::string & path)
{
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array()) throw ParseError(path + "[" + std::to_string(i) + "]", "expected a row array");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) throw ParseError(path + "[" + std::to_string(i) + "]", "ragged matrix row");
  }
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_complex(j[i][k], path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

inline json parse_document(const std::string & text)
{
  try {
    return json::parse(text);
  } catch (const json::exception & e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

// GroupElement JSON: {"v":[[re,im],...],"t":[re,im]}

inline json element_to_json(const GroupElement & g) { return {{"v", to_json(g.v())}, {"t", to_json(g.t())}}; }

inline json algebra_to_json(const AlgebraElement & x) { return {{"v", to_json(x.v)}, {"t", to_json(x.t)}}; }

inline AlgebraElement algebra_from_json(const json & j, int d, const std::string & path = "")
{
  AlgebraElement x{vector_from_json(detail::require_field(j, "v", path), path.empty() ? "v" : path + ".v"),
                   parse_complex(detail::require_field(j, "t", path), path.empty() ? "t" : path + ".t")};
  if (x.v.size() != d) {
    throw ParseError(path.empty() ? "v" : path + ".v",
                     "expected " + std::to_string(d) + " entries, got " + std::to_string(x.v.size()));
  }
  return x;
}

inline GroupElement element_from_json(const json & j, const GroupPtr & group, const std::string & path = "")
{
  AlgebraElement x = algebra_from_json(j, group->d(), path);
  return GroupElement(group, std::move(x.v), x.t);
}

// Metric JSON: {"coeffs":[[[re,im],...],...], "side":"left"|"right"}
// "side" is optional; a bare array of rows is accepted as the coefficients.

inline HermitianForm metric_from_json(const json & j, Side default_side = Side::left)
{
  Side side = default_side;
  const json * coeffs = &j;
  std::string path;
  if (j.is_object()) {
    coeffs = &detail::require_field(j, "coeffs", "");
    path = "coeffs";
    if (auto it = j.find("side"); it != j.end()) {
      if (*it == "left") side = Side::left;
      else if (*it == "right") side = Side::right;
      else throw ParseError("side", "expected \"left\" or \"right\"");
    }
  }
  CMatrix m = matrix_from_json(*coeffs, path);
  try {
    return HermitianForm(std::move(m), side);
  } catch (const std::invalid_argument & e) {
    throw ParseError(path, e.what());
  }
}

inline json metric_to_json(const HermitianForm & h)
{
  json out = {{"coeffs", to_json(h.coeffs())}, {"side", to_string(h.side())}};
  if (!h.provenance().empty()) out["provenance"] = h.provenance();
  return out;
}

inline json center_to_json(const CenterDescription & c)
{
  json basis = json::array();
  for (const auto & u : c.kernel_basis) basis.push_back(to_json(u));
  json out = {{"kernel_basis", basis}, {"torus_lattice", to_string(c.torus)}, {"confidence", to_string(c.confidence)}};
  if (c.torus == TorusLattice::cyclic) out["generator"] = to_json(c.generator);
  return out;
}

inline json verdict_to_json(const KahlerVerdict & v)
{
  return {{"obstruction_norm", v.obstruction_norm}, {"domega_residual", v.domega_residual},
          {"is_kahler", v.is_kahler},               {"method_agreement", v.method_agreement},
          {"abelian_caveat", v.abelian_caveat},     {"side", to_string(v.side)}};
}

inline json jordan_layout_to_json(const JordanMatrix & J)
{
  json out = json::array();
  for (const auto & b : J.layout()) {
    out.push_back({{"mu", to_json(b.mu)}, {"size", b.size}, {"offset", b.offset}});
  }
  return out;
}

} // namespace almab::io

#endif
