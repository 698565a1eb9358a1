#ifndef FQLAB_IO_HPP
#define FQLAB_IO_HPP

// JSON readers for polynomials, matrices and directions; CSV/JSON writers.
// Requires nlohmann/json on the include path.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cone.hpp"
#include "errors.hpp"
#include "intmat.hpp"
#include "laurent.hpp"

namespace fqlab::io {

using nlohmann::json;

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline std::int64_t as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<std::int64_t>();
}

inline double as_real(const json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace detail

/// {"arity": n, "terms": [{"exp": [...], "re": x, "im": y}, ...]}; "im" may be omitted.
inline LaurentPoly poly_from_json(const json& j) {
  const std::int64_t arity = detail::as_int(detail::field(j, "arity", "poly"), "poly.arity");
  if (arity < 1 || arity > 16) throw InputError("poly.arity: must lie in [1, 16]");
  const json& terms = detail::field(j, "terms", "poly");
  if (!terms.is_array() || terms.empty()) throw InputError("poly.terms: expected a non-empty array");
  LaurentPoly p(static_cast<std::size_t>(arity));
  std::set<Exponent> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string where = "poly.terms[" + std::to_string(i) + "]";
    const json& e = detail::field(terms[i], "exp", where);
    if (!e.is_array() || e.size() != static_cast<std::size_t>(arity)) throw InputError(where + ".exp: expected " + std::to_string(arity) + " integers");
    Exponent exp;
    for (std::size_t k = 0; k < e.size(); ++k) exp.push_back(detail::as_int(e[k], where + ".exp[" + std::to_string(k) + "]"));
    const double re = detail::as_real(detail::field(terms[i], "re", where), where + ".re");
    const double im = terms[i].contains("im") ? detail::as_real(terms[i]["im"], where + ".im") : 0.0;
    if (re == 0 && im == 0) throw InputError(where + ": zero coefficient");
    if (!seen.insert(exp).second) throw InputError(where + ": duplicate exponent");
    p.add_term(exp, Complex(re, im));
  }
  return p;
}

inline json poly_to_json(const LaurentPoly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
  return {{"arity", p.arity()}, {"terms", terms}};
}

/// {"rows": m, "cols": n, "data": [[...], ...]}.
inline IntMatrix matrix_from_json(const json& j) {
  const std::int64_t rows = detail::as_int(detail::field(j, "rows", "matrix"), "matrix.rows");
  const std::int64_t cols = detail::as_int(detail::field(j, "cols", "matrix"), "matrix.cols");
  if (rows < 1 || cols < 1 || rows > static_cast<std::int64_t>(kMaxMatrixDim) || cols > static_cast<std::int64_t>(kMaxMatrixDim)) throw InputError("matrix: dimensions out of range");
  const json& data = detail::field(j, "data", "matrix");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows)) throw InputError("matrix.data: expected " + std::to_string(rows) + " rows");
  IntMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const std::string where = "matrix.data[" + std::to_string(r) + "]";
    if (!data[r].is_array() || data[r].size() != m.cols()) throw InputError(where + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = detail::as_int(data[r][c], where + "[" + std::to_string(c) + "]");
  }
  try {
    validate_limits(m);
  } catch (const std::exception& e) {
    throw InputError(std::string("matrix: ") + e.what());
  }
  return m;
}

inline json matrix_to_json(const IntMatrix& m) {
  json data = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    data.push_back(row);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

/// {"entries": [...]}.
inline Direction direction_from_json(const json& j) {
  const json& e = detail::field(j, "entries", "direction");
  if (!e.is_array() || e.empty()) throw InputError("direction.entries: expected a non-empty array");
  Direction d;
  for (std::size_t i = 0; i < e.size(); ++i) d.entries.push_back(detail::as_real(e[i], "direction.entries[" + std::to_string(i) + "]"));
  return d;
}

/// Comma-separated reals, e.g. "1,1.4142135623730951".
inline std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(what + ": cannot parse \"" + item + "\"");
    }
  }
  if (out.empty()) throw InputError(what + ": empty list");
  return out;
}

/// 17 significant digits.
inline std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void dump_value(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        os << (first ? "" : ",\n") << pad << json(it.key()).dump() << ": ";
        dump_value(os, it.value(), indent, depth + 1);
        first = false;
      }
      os << '\n' << close << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << (i ? ",\n" : "") << pad;
        dump_value(os, j[i], indent, depth + 1);
      }
      os << '\n' << close << ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x))
        os << fmt_real(x);
      else
        os << "null";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Pretty JSON with keys in sorted order and every float at 17 significant digits.
inline std::string dump(const json& j, int indent = 2) {
  std::ostringstream os;
  detail::dump_value(os, j, indent, 0);
  os << '\n';
  return os.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Hash of the canonical (sorted-key) dump of a config object.
inline std::string config_hash(const json& config) { return hex64(fnv1a(config.dump())); }

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& header(std::initializer_list<std::string> names) {
    bool first = true;
    for (const auto& n : names) {
      out_ << (first ? "" : ",") << n;
      first = false;
    }
    out_ << '\n';
    return *this;
  }

  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ","), put(cells), first = false), ...);
    out_ << '\n';
  }

  void comment(const std::string& text) { out_ << "# " << text << '\n'; }

 private:
  void put(double x) { out_ << fmt_real(x); }
  void put(const std::string& s) { out_ << s; }
  void put(const char* s) { out_ << s; }
  template <typename I>
    requires std::is_integral_v<I>
  void put(I i) { out_ << i; }

  std::ostream& out_;
};

}  // namespace fqlab::io

#endif  // FQLAB_IO_HPP
