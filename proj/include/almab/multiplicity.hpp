#ifndef ALMAB_MULTIPLICITY_HPP
#define ALMAB_MULTIPLICITY_HPP

#include "almab/core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace almab
{

/// One entry of a multiplicity function: the Jordan block J(mu, size)
/// appears `mult` times.
struct JordanBlockSpec
{
  Complex mu;
  int size = 1;
  int mult = 1;

  friend bool operator==(const JordanBlockSpec &, const JordanBlockSpec &) = default;
};

/// Finitely supported multiplicity function (eigenvalue, block size) -> count.
/// This is the complete descriptor of a complex almost Abelian Lie algebra.
///
/// Blocks are kept in canonical order, lexicographic in (Re mu, Im mu, size).
/// Entries sharing (mu, size) are merged by adding their multiplicities.
class MultiplicityFunction
{
public:
  explicit MultiplicityFunction(std::vector<JordanBlockSpec> blocks)
  {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      auto & b = blocks[k];
      const std::string path = "blocks[" + std::to_string(k) + "]";
      if (!std::isfinite(b.mu.real()) || !std::isfinite(b.mu.imag())) {
        throw ParseError(path + ".mu", "eigenvalue must be finite");
      }
      if (b.size < 1) {
        throw ParseError(path + ".size", "size must be \xe2\x89\xa5 1");
      }
      if (b.mult < 1) {
        throw ParseError(path + ".mult", "mult must be \xe2\x89\xa5 1");
      }
      // -0.0 and 0.0 must compare and print identically
      b.mu = Complex(b.mu.real() + 0.0, b.mu.imag() + 0.0);
    }
    if (blocks.empty()) {
      throw ParseError("blocks", "at least one block is required");
    }

    std::sort(blocks.begin(), blocks.end(), block_less);
    for (const auto & b : blocks) {
      if (!m_blocks.empty() && m_blocks.back().mu == b.mu && m_blocks.back().size == b.size) {
        m_blocks.back().mult += b.mult;
      } else {
        m_blocks.push_back(b);
      }
    }
  }

  const std::vector<JordanBlockSpec> & blocks() const { return m_blocks; }

  friend bool operator==(const MultiplicityFunction &, const MultiplicityFunction &) = default;

private:
  static bool block_less(const JordanBlockSpec & a, const JordanBlockSpec & b)
  {
    if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
    if (a.mu.imag() != b.mu.imag()) return a.mu.imag() < b.mu.imag();
    return a.size < b.size;
  }

  std::vector<JordanBlockSpec> m_blocks;
};

/// Dimension of the Abelian ideal V.
inline int dim_v(const MultiplicityFunction & aleph)
{
  int d = 0;
  for (const auto & b : aleph.blocks()) {
    d += b.size * b.mult;
  }
  return d;
}

/// True iff J(aleph) = 0, i.e. the algebra is Abelian.
inline bool is_abelian(const MultiplicityFunction & aleph)
{
  return std::all_of(aleph.blocks().begin(), aleph.blocks().end(), [](const JordanBlockSpec & b) {
    return b.mu == Complex(0.0) && b.size == 1;
  });
}

/// Block-diagonal Jordan matrix J(aleph), blocks mu*1 + N_n laid out in
/// canonical order with each block repeated `mult` times.
class JordanMatrix
{
public:
  struct Block
  {
    Complex mu;
    int size;
    int offset;
  };

  explicit JordanMatrix(const MultiplicityFunction & aleph)
  {
    const int d = dim_v(aleph);
    m_entries = CMatrix::Zero(d, d);
    int offset = 0;
    for (const auto & spec : aleph.blocks()) {
      for (int copy = 0; copy < spec.mult; ++copy) {
        m_layout.push_back({spec.mu, spec.size, offset});
        for (int i = 0; i < spec.size; ++i) {
          m_entries(offset + i, offset + i) = spec.mu;
          if (i + 1 < spec.size) {
            m_entries(offset + i, offset + i + 1) = 1.0;
          }
        }
        offset += spec.size;
      }
    }
  }

  const CMatrix & entries() const { return m_entries; }
  const std::vector<Block> & layout() const { return m_layout; }
  int dim() const { return static_cast<int>(m_entries.rows()); }

  Complex trace() const { return m_entries.trace(); }

private:
  CMatrix m_entries;
  std::vector<Block> m_layout;
};

inline JordanMatrix build_jordan(const MultiplicityFunction & aleph) { return JordanMatrix(aleph); }

/// exp(tJ) computed block by block in closed form:
///   exp(t(mu + N_n)) = e^{t mu} sum_{k<n} t^k N_n^k / k!
/// The polynomial factor is exact, so nilpotent parts carry no truncation error.
inline CMatrix jordan_exp(const JordanMatrix & jordan, Complex t)
{
  const int d = jordan.dim();
  CMatrix result = CMatrix::Zero(d, d);
  for (const auto & block : jordan.layout()) {
    const Complex scale = std::exp(t * block.mu);
    // coeff[k] = e^{t mu} t^k / k!
    std::vector<Complex> coeff(block.size);
    Complex term = scale;
    for (int k = 0; k < block.size; ++k) {
      coeff[k] = term;
      term *= t / static_cast<double>(k + 1);
    }
    for (int i = 0; i < block.size; ++i) {
      for (int j = i; j < block.size; ++j) {
        result(block.offset + i, block.offset + j) = coeff[j - i];
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Group spec JSON:  {"blocks":[{"mu":[re,im],"size":n,"mult":m}, ...]}

namespace detail
{

inline std::string format_double(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
  return buf;
}

inline const nlohmann::json & require_field(const nlohmann::json & obj, const char * key, const std::string & path)
{
  if (!obj.is_object()) {
    throw ParseError(path, "expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  }
  return *it;
}

inline int parse_positive_int(const nlohmann::json & j, const std::string & path, const char * name)
{
  if (!j.is_number_integer()) {
    // accept 2.0 but not 2.5
    if (j.is_number_float() && std::floor(j.get<double>()) == j.get<double>() && std::isfinite(j.get<double>())) {
      const double v = j.get<double>();
      if (v < 1) throw ParseError(path, std::string(name) + " must be \xe2\x89\xa5 1");
      return static_cast<int>(v);
    }
    throw ParseError(path, std::string(name) + " must be an integer");
  }
  const auto v = j.get<long long>();
  if (v < 1) {
    throw ParseError(path, std::string(name) + " must be \xe2\x89\xa5 1");
  }
  if (v > 1'000'000) {
    throw ParseError(path, std::string(name) + " is unreasonably large");
  }
  return static_cast<int>(v);
}

} // namespace detail

/// Parse a complex number written as [re, im] (a bare real number is
/// accepted as shorthand for [re, 0]).
inline Complex parse_complex(const nlohmann::json & j, const std::string & path)
{
  auto finite_number = [&](const nlohmann::json & x, const std::string & p) {
    if (!x.is_number()) throw ParseError(p, "expected a number");
    const double v = x.get<double>();
    if (!std::isfinite(v)) throw ParseError(p, "value must be finite");
    return v;
  };
  if (j.is_number()) {
    return {finite_number(j, path), 0.0};
  }
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(path, "expected [re, im]");
  }
  return {finite_number(j[0], path + "[0]"), finite_number(j[1], path + "[1]")};
}

inline MultiplicityFunction multiplicity_from_json(const nlohmann::json & doc)
{
  const auto & blocks = detail::require_field(doc, "blocks", "");
  if (!blocks.is_array()) {
    throw ParseError("blocks", "expected an array");
  }
  std::vector<JordanBlockSpec> specs;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string path = "blocks[" + std::to_string(k) + "]";
    const auto & b = blocks[k];
    JordanBlockSpec spec;
    spec.mu = parse_complex(detail::require_field(b, "mu", path), path + ".mu");
    spec.size = detail::parse_positive_int(detail::require_field(b, "size", path), path + ".size", "size");
    spec.mult = detail::parse_positive_int(detail::require_field(b, "mult", path), path + ".mult", "mult");
    specs.push_back(spec);
  }
  return MultiplicityFunction(std::move(specs));
}

inline MultiplicityFunction parse_spec(std::string_view text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception & e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return multiplicity_from_json(doc);
}

/// Canonical serialization: blocks sorted, floats at 17 significant digits.
inline std::string serialize_spec(const MultiplicityFunction & aleph)
{
  std::string out = "{\"blocks\":[";
  bool first = true;
  for (const auto & b : aleph.blocks()) {
    if (!first) out += ",";
    first = false;
    out += "{\"mu\":[" + detail::format_double(b.mu.real()) + "," + detail::format_double(b.mu.imag()) + "],";
    out += "\"size\":" + std::to_string(b.size) + ",\"mult\":" + std::to_string(b.mult) + "}";
  }
  out += "]}";
  return out;
}

} // namespace almab

#endif
