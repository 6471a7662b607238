#pragma once

#include <cctype>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tvlat/errors.hpp"
#include "tvlat/finite_oracle.hpp"
#include "tvlat/number_field.hpp"
#include "tvlat/poly.hpp"
#include "tvlat/prime_field.hpp"
#include "tvlat/rational.hpp"
#include "tvlat/topology.hpp"

namespace tvlat {

// ---------------------------------------------------------------------------
// Session specification: one field, named declarations, queries in order.
// ---------------------------------------------------------------------------

struct TopologyDecl {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::vector<Poly<Rat>>> basis;  // entries are polynomials in `a`

  friend bool operator==(const TopologyDecl&, const TopologyDecl&) = default;
};

struct MapDecl {
  std::string name;
  std::vector<std::vector<Rat>> rows;

  friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

struct Query {
  enum class Kind {
    hausdorff,
    closure_zero,
    join,
    meet,
    compare,
    continuous,
    member,
    count_subspaces,
    enumerate_topologies,
    qli,
  };

  Kind kind = Kind::hausdorff;
  std::string a, b, c;  // referenced names, in argument order
  std::vector<Rat> center, point;
  Rat eps;
  std::optional<int> cap;
  std::uint32_t q = 0;
  int n = 0;
  std::vector<Poly<Rat>> elems;

  friend bool operator==(const Query&, const Query&) = default;
};

struct SessionSpec {
  enum class FieldKind { none, arch, padic, prime };

  FieldKind field_kind = FieldKind::none;
  Poly<Rat> minpoly;
  Rat lo, hi;             // arch
  std::uint32_t p = 0;    // padic / prime
  std::uint32_t residue = 0;
  std::vector<TopologyDecl> topologies;
  std::vector<MapDecl> maps;
  std::vector<Query> queries;
  std::vector<int> query_lines;  // bookkeeping only, excluded from equality
  int field_line = 0;

  friend bool operator==(const SessionSpec& x, const SessionSpec& y) {
    return x.field_kind == y.field_kind && x.minpoly == y.minpoly && x.lo == y.lo &&
           x.hi == y.hi && x.p == y.p && x.residue == y.residue &&
           x.topologies == y.topologies && x.maps == y.maps && x.queries == y.queries;
  }

  std::string to_text() const;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace session_detail {

struct Tok {
  std::string text;
  int col = 1;  // 1-based byte offset in the line
};

inline std::vector<Tok> tokenize(const std::string& line) {
  std::vector<Tok> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    toks.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return toks;
}

inline bool is_integer_text(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline bool is_rational_text(const std::string& s) {
  const std::size_t slash = s.find('/');
  if (slash == std::string::npos) return is_integer_text(s);
  const std::string den = s.substr(slash + 1);
  return is_integer_text(s.substr(0, slash)) && !den.empty() && den[0] != '-' &&
         is_integer_text(den);
}

inline Rat parse_rat(const std::string& s, int line, int col) {
  if (!is_rational_text(s)) throw parse_error("expected a rational, got '" + s + "'", line, col);
  try {
    return Rat::parse(s);
  } catch (const error& e) {
    throw parse_error(e.what(), line, col);
  }
}

inline long parse_long(const std::string& s, int line, int col) {
  if (!is_integer_text(s)) throw parse_error("expected an integer, got '" + s + "'", line, col);
  try {
    return std::stol(s);
  } catch (const std::exception&) {
    throw parse_error("integer out of range: '" + s + "'", line, col);
  }
}

inline std::uint32_t parse_u32(const std::string& s, int line, int col) {
  const long v = parse_long(s, line, col);
  if (v < 0 || v >= (1l << 31)) throw parse_error("value out of range: '" + s + "'", line, col);
  return static_cast<std::uint32_t>(v);
}

// Polynomial in `sym` over the rationals: a sum of terms `c`, `c*sym^k`,
// `c sym^k` (juxtaposition) or `sym^k`. No spaces inside the token.
inline Poly<Rat> parse_poly(const std::string& s, char sym, int line, int col) {
  if (s.empty()) throw parse_error("empty polynomial", line, col);
  std::vector<Rat> coeffs;
  auto bump = [&](std::size_t power, const Rat& v) {
    if (coeffs.size() <= power) coeffs.resize(power + 1, Rat(0));
    coeffs[power] += v;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    if (i >= s.size())
      throw parse_error("dangling sign in polynomial '" + s + "'", line, col + static_cast<int>(i));
    Rat coef(1);
    bool have_coef = false;
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      std::string num = s.substr(i, j - i);
      i = j;
      std::string den;
      if (i < s.size() && s[i] == '/') {
        ++i;
        j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i)
          throw parse_error("missing denominator in '" + s + "'", line, col + static_cast<int>(i));
        den = s.substr(i, j - i);
        i = j;
      }
      coef = parse_rat(den.empty() ? num : num + "/" + den, line, col);
      have_coef = true;
      if (i < s.size() && s[i] == '*') {
        if (i + 1 >= s.size() || s[i + 1] != sym)
          throw parse_error("expected '" + std::string(1, sym) + "' after '*'", line,
                            col + static_cast<int>(i));
        ++i;
      }
    }
    std::size_t power = 0;
    if (i < s.size() && s[i] == sym) {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i)
          throw parse_error("missing exponent in '" + s + "'", line, col + static_cast<int>(i));
        power = static_cast<std::size_t>(parse_long(s.substr(i, j - i), line, col));
        if (power > 64)
          throw parse_error("exponent too large in '" + s + "'", line, col + static_cast<int>(i));
        i = j;
      }
    } else if (!have_coef) {
      throw parse_error("unexpected character '" + std::string(1, s[i]) + "' in polynomial", line,
                        col + static_cast<int>(i));
    }
    bump(power, sign < 0 ? -coef : coef);
    if (i < s.size() && s[i] != '+' && s[i] != '-')
      throw parse_error("unexpected character '" + std::string(1, s[i]) + "' in polynomial", line,
                        col + static_cast<int>(i));
  }
  return Poly<Rat>(std::move(coeffs));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

// "[row;row;...]" with comma-separated entries; "[]" means no rows.
inline std::vector<std::vector<std::string>> parse_bracket_rows(const std::string& s, int line,
                                                                int col) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw parse_error("expected a bracketed list, got '" + s + "'", line, col);
  const std::string body = s.substr(1, s.size() - 2);
  std::vector<std::vector<std::string>> rows;
  if (body.empty()) return rows;
  for (const std::string& row : split(body, ';')) {
    if (row.empty()) throw parse_error("empty row in '" + s + "'", line, col);
    rows.push_back(split(row, ','));
  }
  return rows;
}

inline std::string expect_kv(const Tok& tok, const std::string& key, int line) {
  const std::string prefix = key + "=";
  if (tok.text.rfind(prefix, 0) != 0)
    throw parse_error("expected '" + key + "=...', got '" + tok.text + "'", line, tok.col);
  return tok.text.substr(prefix.size());
}

inline const Tok& need(const std::vector<Tok>& toks, std::size_t idx, const std::string& what,
                       int line) {
  if (idx >= toks.size()) throw parse_error("missing " + what, line, 1);
  return toks[idx];
}

inline void no_extra(const std::vector<Tok>& toks, std::size_t count, int line) {
  if (toks.size() > count)
    throw parse_error("unexpected token '" + toks[count].text + "'", line, toks[count].col);
}

}  // namespace session_detail

inline SessionSpec parse_session(const std::string& input) {
  using namespace session_detail;
  SessionSpec spec;
  std::map<std::string, std::size_t> topo_index;
  std::map<std::string, std::size_t> map_index;

  auto require_field = [&](int line, int col) {
    if (spec.field_kind == SessionSpec::FieldKind::none)
      throw parse_error("no field declared", line, col);
  };
  auto topology_ref = [&](const Tok& tok, int line) -> const TopologyDecl& {
    auto it = topo_index.find(tok.text);
    if (it == topo_index.end())
      throw parse_error(errc::undeclared_name, "undeclared topology '" + tok.text + "'", line,
                        tok.col);
    return spec.topologies[it->second];
  };

  std::istringstream in(input);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::vector<Tok> toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& cmd = toks[0].text;
    if (cmd[0] == '#') continue;

    if (cmd == "field") {
      if (spec.field_kind != SessionSpec::FieldKind::none)
        throw parse_error("a session has a single field declaration", line_no, toks[0].col);
      const Tok& kind = need(toks, 1, "field kind", line_no);
      spec.field_line = line_no;
      if (kind.text == "arch") {
        const Tok& mp = need(toks, 2, "minpoly=...", line_no);
        spec.minpoly = parse_poly(expect_kv(mp, "minpoly", line_no), 'x', line_no, mp.col);
        const Tok& iv = need(toks, 3, "interval=...", line_no);
        std::vector<std::string> ends = split(expect_kv(iv, "interval", line_no), ',');
        if (ends.size() != 2)
          throw parse_error("interval needs two endpoints", line_no, iv.col);
        spec.lo = parse_rat(ends[0], line_no, iv.col);
        spec.hi = parse_rat(ends[1], line_no, iv.col);
        no_extra(toks, 4, line_no);
        spec.field_kind = SessionSpec::FieldKind::arch;
      } else if (kind.text == "padic") {
        const Tok& pt = need(toks, 2, "p=...", line_no);
        spec.p = parse_u32(expect_kv(pt, "p", line_no), line_no, pt.col);
        const Tok& mp = need(toks, 3, "minpoly=...", line_no);
        spec.minpoly = parse_poly(expect_kv(mp, "minpoly", line_no), 'x', line_no, mp.col);
        const Tok& res = need(toks, 4, "residue=...", line_no);
        spec.residue = parse_u32(expect_kv(res, "residue", line_no), line_no, res.col);
        no_extra(toks, 5, line_no);
        spec.field_kind = SessionSpec::FieldKind::padic;
      } else if (kind.text == "prime") {
        const Tok& pt = need(toks, 2, "p=...", line_no);
        spec.p = parse_u32(expect_kv(pt, "p", line_no), line_no, pt.col);
        no_extra(toks, 3, line_no);
        spec.field_kind = SessionSpec::FieldKind::prime;
      } else {
        throw parse_error("unknown field kind '" + kind.text + "'", line_no, kind.col);
      }
    } else if (cmd == "topology") {
      require_field(line_no, toks[0].col);
      const Tok& name = need(toks, 1, "topology name", line_no);
      if (topo_index.count(name.text))
        throw parse_error("topology '" + name.text + "' already declared", line_no, name.col);
      TopologyDecl decl;
      decl.name = name.text;
      const Tok& dim = need(toks, 2, "dim=...", line_no);
      const long d = parse_long(expect_kv(dim, "dim", line_no), line_no, dim.col);
      if (d < 0) throw parse_error("dimension must be nonnegative", line_no, dim.col);
      decl.dim = static_cast<std::size_t>(d);
      const Tok& basis = need(toks, 3, "basis=[...]", line_no);
      for (const auto& row : parse_bracket_rows(expect_kv(basis, "basis", line_no), line_no,
                                                basis.col)) {
        if (row.size() != decl.dim)
          throw parse_error("basis row has " + std::to_string(row.size()) + " entries, expected " +
                                std::to_string(decl.dim),
                            line_no, basis.col);
        std::vector<Poly<Rat>> parsed;
        parsed.reserve(row.size());
        for (const std::string& entry : row)
          parsed.push_back(parse_poly(entry, 'a', line_no, basis.col));
        decl.basis.push_back(std::move(parsed));
      }
      no_extra(toks, 4, line_no);
      topo_index[decl.name] = spec.topologies.size();
      spec.topologies.push_back(std::move(decl));
    } else if (cmd == "map") {
      require_field(line_no, toks[0].col);
      const Tok& name = need(toks, 1, "map name", line_no);
      if (map_index.count(name.text))
        throw parse_error("map '" + name.text + "' already declared", line_no, name.col);
      MapDecl decl;
      decl.name = name.text;
      const Tok& rows = need(toks, 2, "rows=[...]", line_no);
      std::size_t width = 0;
      for (const auto& row : parse_bracket_rows(expect_kv(rows, "rows", line_no), line_no,
                                                rows.col)) {
        if (width == 0) width = row.size();
        if (row.size() != width)
          throw parse_error("map rows have inconsistent lengths", line_no, rows.col);
        std::vector<Rat> parsed;
        parsed.reserve(row.size());
        for (const std::string& entry : row) parsed.push_back(parse_rat(entry, line_no, rows.col));
        decl.rows.push_back(std::move(parsed));
      }
      if (decl.rows.empty())
        throw parse_error("map needs at least one row", line_no, rows.col);
      no_extra(toks, 3, line_no);
      map_index[decl.name] = spec.maps.size();
      spec.maps.push_back(std::move(decl));
    } else if (cmd == "hausdorff" || cmd == "closure-zero") {
      require_field(line_no, toks[0].col);
      Query q;
      q.kind = cmd == "hausdorff" ? Query::Kind::hausdorff : Query::Kind::closure_zero;
      q.a = topology_ref(need(toks, 1, "topology name", line_no), line_no).name;
      no_extra(toks, 2, line_no);
      spec.queries.push_back(std::move(q));
      spec.query_lines.push_back(line_no);
    } else if (cmd == "join" || cmd == "meet" || cmd == "compare") {
      require_field(line_no, toks[0].col);
      Query q;
      q.kind = cmd == "join" ? Query::Kind::join
             : cmd == "meet" ? Query::Kind::meet
                             : Query::Kind::compare;
      q.a = topology_ref(need(toks, 1, "topology name", line_no), line_no).name;
      q.b = topology_ref(need(toks, 2, "topology name", line_no), line_no).name;
      no_extra(toks, 3, line_no);
      spec.queries.push_back(std::move(q));
      spec.query_lines.push_back(line_no);
    } else if (cmd == "continuous") {
      require_field(line_no, toks[0].col);
      Query q;
      q.kind = Query::Kind::continuous;
      const Tok& mname = need(toks, 1, "map name", line_no);
      if (!map_index.count(mname.text))
        throw parse_error(errc::undeclared_name, "undeclared map '" + mname.text + "'", line_no,
                          mname.col);
      q.c = mname.text;
      q.a = topology_ref(need(toks, 2, "topology name", line_no), line_no).name;
      q.b = topology_ref(need(toks, 3, "topology name", line_no), line_no).name;
      no_extra(toks, 4, line_no);
      spec.queries.push_back(std::move(q));
      spec.query_lines.push_back(line_no);
    } else if (cmd == "member") {
      require_field(line_no, toks[0].col);
      Query q;
      q.kind = Query::Kind::member;
      const TopologyDecl& t = topology_ref(need(toks, 1, "topology name", line_no), line_no);
      q.a = t.name;
      const Tok& c = need(toks, 2, "center=...", line_no);
      for (const std::string& e : split(expect_kv(c, "center", line_no), ','))
        q.center.push_back(parse_rat(e, line_no, c.col));
      const Tok& pt = need(toks, 3, "point=...", line_no);
      for (const std::string& e : split(expect_kv(pt, "point", line_no), ','))
        q.point.push_back(parse_rat(e, line_no, pt.col));
      if (q.center.size() != t.dim || q.point.size() != t.dim)
        throw parse_error("query vectors must have " + std::to_string(t.dim) + " entries", line_no,
                          c.col);
      const Tok& eps = need(toks, 4, "eps=...", line_no);
      q.eps = parse_rat(expect_kv(eps, "eps", line_no), line_no, eps.col);
      if (toks.size() > 5) {
        const Tok& cap = toks[5];
        q.cap = static_cast<int>(parse_long(expect_kv(cap, "cap", line_no), line_no, cap.col));
        no_extra(toks, 6, line_no);
      }
      spec.queries.push_back(std::move(q));
      spec.query_lines.push_back(line_no);
    } else if (cmd == "count-subspaces" || cmd == "enumerate-topologies") {
      Query q;
      q.kind = cmd == "count-subspaces" ? Query::Kind::count_subspaces
                                        : Query::Kind::enumerate_topologies;
      const char* first_key = cmd == "count-subspaces" ? "q" : "p";
      const Tok& qt = need(toks, 1, std::string(first_key) + "=...", line_no);
      q.q = parse_u32(expect_kv(qt, first_key, line_no), line_no, qt.col);
      const Tok& nt = need(toks, 2, "n=...", line_no);
      q.n = static_cast<int>(parse_long(expect_kv(nt, "n", line_no), line_no, nt.col));
      no_extra(toks, 3, line_no);
      spec.queries.push_back(std::move(q));
      spec.query_lines.push_back(line_no);
    } else if (cmd == "qli") {
      require_field(line_no, toks[0].col);
      Query q;
      q.kind = Query::Kind::qli;
      const Tok& lst = need(toks, 1, "element list", line_no);
      if (lst.text.size() < 2 || lst.text.front() != '[' || lst.text.back() != ']')
        throw parse_error("expected a bracketed element list", line_no, lst.col);
      const std::string body = lst.text.substr(1, lst.text.size() - 2);
      if (!body.empty())
        for (const std::string& e : split(body, ','))
          q.elems.push_back(parse_poly(e, 'a', line_no, lst.col));
      no_extra(toks, 2, line_no);
      spec.queries.push_back(std::move(q));
      spec.query_lines.push_back(line_no);
    } else {
      throw parse_error("unknown command '" + cmd + "'", line_no, toks[0].col);
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Canonical rendering (print/parse round-trips to an equal spec)
// ---------------------------------------------------------------------------

namespace session_detail {

inline std::string rat_str(const Rat& r) { return r.str(); }

inline std::string poly_str(const Poly<Rat>& p, const std::string& sym) {
  return poly_to_string(p, sym, [](const Rat& r) { return r.str(); });
}

inline std::string rows_str(const std::vector<std::vector<std::string>>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ";";
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j) out += ",";
      out += rows[i][j];
    }
  }
  return out + "]";
}

}  // namespace session_detail

inline std::string SessionSpec::to_text() const {
  using namespace session_detail;
  std::string out;
  switch (field_kind) {
    case FieldKind::none:
      break;
    case FieldKind::arch:
      out += "field arch minpoly=" + poly_str(minpoly, "x") + " interval=" + lo.str() + "," +
             hi.str() + "\n";
      break;
    case FieldKind::padic:
      out += "field padic p=" + std::to_string(p) + " minpoly=" + poly_str(minpoly, "x") +
             " residue=" + std::to_string(residue) + "\n";
      break;
    case FieldKind::prime:
      out += "field prime p=" + std::to_string(p) + "\n";
      break;
  }
  for (const TopologyDecl& t : topologies) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : t.basis) {
      std::vector<std::string> r;
      for (const auto& e : row) r.push_back(poly_str(e, "a"));
      rows.push_back(std::move(r));
    }
    out += "topology " + t.name + " dim=" + std::to_string(t.dim) + " basis=" + rows_str(rows) +
           "\n";
  }
  for (const MapDecl& m : maps) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : m.rows) {
      std::vector<std::string> r;
      for (const Rat& e : row) r.push_back(e.str());
      rows.push_back(std::move(r));
    }
    out += "map " + m.name + " rows=" + rows_str(rows) + "\n";
  }
  for (const Query& q : queries) {
    switch (q.kind) {
      case Query::Kind::hausdorff: out += "hausdorff " + q.a + "\n"; break;
      case Query::Kind::closure_zero: out += "closure-zero " + q.a + "\n"; break;
      case Query::Kind::join: out += "join " + q.a + " " + q.b + "\n"; break;
      case Query::Kind::meet: out += "meet " + q.a + " " + q.b + "\n"; break;
      case Query::Kind::compare: out += "compare " + q.a + " " + q.b + "\n"; break;
      case Query::Kind::continuous:
        out += "continuous " + q.c + " " + q.a + " " + q.b + "\n";
        break;
      case Query::Kind::member: {
        std::string cs, ps;
        for (std::size_t i = 0; i < q.center.size(); ++i)
          cs += (i ? "," : "") + q.center[i].str();
        for (std::size_t i = 0; i < q.point.size(); ++i) ps += (i ? "," : "") + q.point[i].str();
        out += "member " + q.a + " center=" + cs + " point=" + ps + " eps=" + q.eps.str();
        if (q.cap) out += " cap=" + std::to_string(*q.cap);
        out += "\n";
        break;
      }
      case Query::Kind::count_subspaces:
        out += "count-subspaces q=" + std::to_string(q.q) + " n=" + std::to_string(q.n) + "\n";
        break;
      case Query::Kind::enumerate_topologies:
        out += "enumerate-topologies p=" + std::to_string(q.q) + " n=" + std::to_string(q.n) +
               "\n";
        break;
      case Query::Kind::qli: {
        std::string es;
        for (std::size_t i = 0; i < q.elems.size(); ++i)
          es += (i ? "," : "") + session_detail::poly_str(q.elems[i], "a");
        out += "qli [" + es + "]\n";
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct RunResult {
  std::string output;
  int exit_code = 0;
};

namespace session_detail {

// One output record. Field order is insertion order in both renderings, so
// repeated runs are byte-identical.
struct Record {
  std::vector<std::pair<std::string, std::string>> kv;
  nlohmann::ordered_json j;

  void add(const std::string& k, const std::string& v) {
    kv.emplace_back(k, v);
    j[k] = v;
  }
  void add_bool(const std::string& k, bool v) {
    kv.emplace_back(k, v ? "true" : "false");
    j[k] = v;
  }
  void add_int(const std::string& k, long long v) {
    kv.emplace_back(k, std::to_string(v));
    j[k] = v;
  }
  void add_count(const std::string& k, const std::string& decimal) {
    kv.emplace_back(k, decimal);
    j[k] = decimal;  // kept as a string: counts can exceed doubles
  }
  void add_quoted(const std::string& k, const std::string& v) {
    std::string esc;
    for (char c : v) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    kv.emplace_back(k, "\"" + esc + "\"");
    j[k] = v;
  }
  void add_rows(const std::string& k, const std::vector<std::vector<std::string>>& rows) {
    kv.emplace_back(k, rows_str(rows));
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) arr.push_back(row);
    j[k] = std::move(arr);
  }

  std::string render(bool json_mode) const {
    if (json_mode) return j.dump();
    std::string out;
    for (std::size_t i = 0; i < kv.size(); ++i) {
      if (i) out += " ";
      out += kv[i].first + "=" + kv[i].second;
    }
    return out;
  }
};

template <class S>
std::vector<std::vector<std::string>> basis_rows(const S& subspace) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < subspace.dim(); ++i) {
    std::vector<std::string> row;
    for (std::size_t j = 0; j < subspace.ambient_dim(); ++j)
      row.push_back(subspace.basis().at(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline int default_member_cap() {
  const char* env = std::getenv("TVLAT_MEMBER_CAP");
  if (env == nullptr || *env == '\0') return 64;
  const std::string s(env);
  if (!is_integer_text(s))
    throw error(errc::cap_exceeded, "TVLAT_MEMBER_CAP must be a positive integer");
  const long v = std::stol(s);
  if (v < 1) throw error(errc::cap_exceeded, "TVLAT_MEMBER_CAP must be a positive integer");
  return static_cast<int>(v);
}

// Runs the model-dependent queries for a fixed field model.
template <class M>
class ModelRunner {
 public:
  ModelRunner(std::shared_ptr<const M> model, const SessionSpec& spec) : model_(std::move(model)) {
    for (const TopologyDecl& d : spec.topologies) {
      Matrix<typename M::Elem> gens(d.basis.size(), d.dim, model_->zero());
      for (std::size_t i = 0; i < d.basis.size(); ++i)
        for (std::size_t j = 0; j < d.dim; ++j)
          gens.at(i, j) = model_->from_poly(d.basis[i][j]);
      topologies_.emplace(d.name,
                          CompatibleTopology<M>::from_subspace(model_, d.dim, std::move(gens)));
    }
    for (const MapDecl& d : spec.maps) {
      Matrix<typename M::Base> m(d.rows.size(), d.rows[0].size(), model_->base_zero());
      for (std::size_t i = 0; i < d.rows.size(); ++i)
        for (std::size_t j = 0; j < d.rows[0].size(); ++j)
          m.at(i, j) = model_->base_from_rat(d.rows[i][j]);
      maps_.emplace(d.name, LinearMap<typename M::Base>{std::move(m)});
    }
  }

  Record run(const Query& q) const {
    Record rec;
    switch (q.kind) {
      case Query::Kind::hausdorff:
        rec.add("query", "hausdorff");
        rec.add("topology", q.a);
        rec.add_bool("result", is_hausdorff(topo(q.a)));
        break;
      case Query::Kind::closure_zero:
        rec.add("query", "closure-zero");
        rec.add("topology", q.a);
        rec.add_rows("result", basis_rows(closure_of_zero(topo(q.a))));
        break;
      case Query::Kind::join:
      case Query::Kind::meet: {
        const bool join = q.kind == Query::Kind::join;
        rec.add("query", join ? "join" : "meet");
        rec.add("left", q.a);
        rec.add("right", q.b);
        const CompatibleTopology<M> r = join ? topology_join(topo(q.a), topo(q.b))
                                             : topology_meet(topo(q.a), topo(q.b));
        rec.add_rows("result", basis_rows(r.subspace()));
        break;
      }
      case Query::Kind::compare:
        rec.add("query", "compare");
        rec.add("left", q.a);
        rec.add("right", q.b);
        rec.add("result", to_string(topology_compare(topo(q.a), topo(q.b))));
        break;
      case Query::Kind::continuous: {
        rec.add("query", "continuous");
        rec.add("map", q.c);
        rec.add("from", q.a);
        rec.add("to", q.b);
        auto it = maps_.find(q.c);
        rec.add_bool("result", is_continuous(it->second, topo(q.a), topo(q.b)));
        break;
      }
      case Query::Kind::member: {
        rec.add("query", "member");
        rec.add("topology", q.a);
        NeighborhoodQuery<typename M::Base> nq;
        for (const Rat& r : q.center) nq.center.push_back(model_->base_from_rat(r));
        for (const Rat& r : q.point) nq.point.push_back(model_->base_from_rat(r));
        nq.eps = q.eps;
        nq.precision_cap = q.cap ? *q.cap : default_member_cap();
        rec.add("result", to_string(in_neighborhood(topo(q.a), nq)));
        break;
      }
      case Query::Kind::qli: {
        rec.add("query", "qli");
        rec.add_int("count", static_cast<long long>(q.elems.size()));
        std::vector<typename M::Elem> elems;
        for (const Poly<Rat>& e : q.elems) elems.push_back(model_->from_poly(e));
        rec.add_bool("result", q_linear_independent(*model_, elems));
        break;
      }
      default:
        throw error(errc::invalid_model, "query does not use the field model");
    }
    return rec;
  }

 private:
  const CompatibleTopology<M>& topo(const std::string& name) const {
    return topologies_.at(name);
  }

  std::shared_ptr<const M> model_;
  std::map<std::string, CompatibleTopology<M>> topologies_;
  std::map<std::string, LinearMap<typename M::Base>> maps_;
};

inline Record run_finite_query(const Query& q) {
  Record rec;
  if (q.kind == Query::Kind::count_subspaces) {
    rec.add("query", "count-subspaces");
    rec.add_int("q", q.q);
    rec.add_int("n", q.n);
    rec.add_count("result", count_subspaces(q.q, q.n).get_str());
    return rec;
  }
  rec.add("query", "enumerate-topologies");
  rec.add_int("p", q.q);
  rec.add_int("n", q.n);
  const std::vector<FiniteTopology> tops = enumerate_compatible_topologies(q.q, q.n);
  rec.add_int("result", static_cast<long long>(tops.size()));
  std::vector<std::vector<std::string>> rows;
  for (const FiniteTopology& t : tops) {
    std::vector<std::string> row;
    for (std::uint32_t u : t.opens) row.push_back(std::to_string(u));
    rows.push_back(std::move(row));
  }
  rec.add_rows("detail", rows);
  return rec;
}

}  // namespace session_detail

// Executes a parsed session. Domain errors become an error record and exit
// code 1; processing stops at the first failure so output stays
// deterministic.
inline RunResult run_session(const SessionSpec& spec, bool json_mode) {
  using namespace session_detail;
  RunResult result;
  std::optional<ModelRunner<NumberFieldModel>> rational_runner;
  std::optional<ModelRunner<PrimeFieldModel>> prime_runner;
  auto emit = [&](const Record& rec) { result.output += rec.render(json_mode) + "\n"; };

  try {
    switch (spec.field_kind) {
      case SessionSpec::FieldKind::arch:
        rational_runner.emplace(NumberFieldModel::real_embedded(spec.minpoly, spec.lo, spec.hi),
                                spec);
        break;
      case SessionSpec::FieldKind::padic:
        rational_runner.emplace(
            NumberFieldModel::padic_embedded(spec.minpoly, spec.p, spec.residue), spec);
        break;
      case SessionSpec::FieldKind::prime:
        prime_runner.emplace(PrimeFieldModel::create(spec.p), spec);
        break;
      case SessionSpec::FieldKind::none:
        break;
    }
  } catch (const error& e) {
    Record rec;
    rec.add("error", errc_name(e.code()));
    rec.add_quoted("message", e.what());
    if (spec.field_line > 0) rec.add_int("line", spec.field_line);
    emit(rec);
    result.exit_code = 1;
    return result;
  }

  for (std::size_t i = 0; i < spec.queries.size(); ++i) {
    const Query& q = spec.queries[i];
    try {
      if (q.kind == Query::Kind::count_subspaces || q.kind == Query::Kind::enumerate_topologies) {
        emit(run_finite_query(q));
      } else if (rational_runner) {
        emit(rational_runner->run(q));
      } else if (prime_runner) {
        emit(prime_runner->run(q));
      } else {
        throw error(errc::invalid_model, "query requires a field declaration");
      }
    } catch (const error& e) {
      Record rec;
      rec.add("error", errc_name(e.code()));
      rec.add_quoted("message", e.what());
      if (const auto* zd = dynamic_cast<const zero_divisor_error*>(&e))
        rec.add("witness", zd->witness());
      if (i < spec.query_lines.size()) rec.add_int("line", spec.query_lines[i]);
      emit(rec);
      result.exit_code = 1;
      return result;
    }
  }
  return result;
}

// Parse + run; parse failures become an error record and exit code 2.
inline RunResult run_text(const std::string& input, bool json_mode) {
  using namespace session_detail;
  SessionSpec spec;
  try {
    spec = parse_session(input);
  } catch (const parse_error& e) {
    Record rec;
    rec.add("error", errc_name(e.code()));
    rec.add_quoted("message", e.what());
    rec.add_int("line", e.line());
    rec.add_int("col", e.col());
    return {rec.render(json_mode) + "\n", 2};
  }
  return run_session(spec, json_mode);
}

}  // namespace tvlat
