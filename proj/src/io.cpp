#include "wps/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "format.hpp"
#include "wps/error.hpp"

namespace wps {

std::size_t PointSet::size() const {
  return std::visit([](const auto& v) { return v.size(); }, points);
}

const std::vector<ProjPoint>& PointSet::complex_points() const {
  if (rational()) throw PreconditionError("expected complex points, got a rational point set");
  return std::get<0>(points);
}

const std::vector<RatProjPoint>& PointSet::rational_points() const {
  if (!rational()) throw PreconditionError("expected rational points, got a complex point set");
  return std::get<1>(points);
}

FileFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? FileFormat::csv : FileFormat::json;
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // byte offset -> line and column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string(what) + ": JSON syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col));
  }
}

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ParseError("field " + field + ": " + msg);
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) field_error(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

const Json& array_at(const Json& obj, const char* key, const std::string& where) {
  const Json& a = member(obj, key, where);
  if (!a.is_array()) field_error(where.empty() ? key : where + "." + key, "expected an array");
  return a;
}

double number(const Json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

BigInt integer(const Json& v, const std::string& field) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? BigInt(v.get<std::uint64_t>()) : BigInt(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    const std::size_t start = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      field_error(field, "expected a decimal integer string");
    return BigInt(s);
  }
  field_error(field, "expected an integer (write integers beyond 64 bits as strings)");
}

std::size_t index_value(const Json& v, const std::string& field) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    field_error(field, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

Weights weights_from(const Json& a, const std::string& field) {
  std::vector<int> q;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!a[i].is_number_integer()) field_error(f, "expected an integer weight");
    q.push_back(a[i].get<int>());
  }
  try {
    return Weights(std::move(q));
  } catch (const Error& e) {
    field_error(field, e.what());
  }
}

Json integer_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string location(std::size_t line, std::size_t field) {
  return "line " + std::to_string(line) + ", field " + std::to_string(field);
}

double parse_double(std::string_view s, std::size_t line, std::size_t field) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(location(line, field) + ": expected a finite number, got '" + std::string(s) + "'");
  return v;
}

BigInt parse_integer(std::string_view s, std::size_t line, std::size_t field) {
  s = trim(s);
  const std::size_t start = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string_view::npos)
    throw ParseError(location(line, field) + ": expected an integer, got '" + std::string(s) + "'");
  return BigInt(std::string(s));
}

std::size_t parse_index(std::string_view s, std::size_t line, std::size_t field) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(location(line, field) + ": expected a nonnegative integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

PointSet parse_points_json(std::string_view text) {
  const Json doc = parse_json(text, "point set");
  PointSet set;
  set.weights = weights_from(array_at(doc, "weights", ""), "weights");
  const Json& pts = array_at(doc, "points", "");
  if (pts.empty()) field_error("points", "no points");
  const std::size_t dim = set.weights.size();

  auto point_error = [](const std::string& f, const Error& e) { field_error(f, e.what()); };
  if (pts[0].is_object()) {
    std::vector<ProjPoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string f = "points[" + std::to_string(i) + "]";
      const Json& re = array_at(pts[i], "re", f);
      const Json& im = array_at(pts[i], "im", f);
      if (re.size() != dim || im.size() != dim) field_error(f, "expected " + std::to_string(dim) + " coordinates");
      CVec z(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        const double r = number(re[k], f + ".re[" + std::to_string(k) + "]");
        const double m = number(im[k], f + ".im[" + std::to_string(k) + "]");
        z[k] = {r, m};
      }
      try {
        out.emplace_back(set.weights, std::move(z));
      } catch (const Error& e) {
        point_error(f, e);
      }
    }
    set.points = std::move(out);
  } else {
    std::vector<RatProjPoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string f = "points[" + std::to_string(i) + "]";
      if (!pts[i].is_array()) field_error(f, "expected an integer array or an {re, im} object");
      if (pts[i].size() != dim) field_error(f, "expected " + std::to_string(dim) + " coordinates");
      std::vector<BigInt> x(dim);
      for (std::size_t k = 0; k < dim; ++k) x[k] = integer(pts[i][k], f + "[" + std::to_string(k) + "]");
      try {
        out.emplace_back(set.weights, std::move(x));
      } catch (const Error& e) {
        point_error(f, e);
      }
    }
    set.points = std::move(out);
  }

  if (const auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_array() || it->size() != pts.size()) field_error("labels", "expected one label per point");
    for (std::size_t i = 0; i < it->size(); ++i)
      set.labels.push_back(index_value((*it)[i], "labels[" + std::to_string(i) + "]"));
  }
  return set;
}

PointSet parse_points_csv(std::string_view text) {
  PointSet set;
  bool have_weights = false, labels = false;
  int kind = -1;  // 0 complex, 1 rational
  std::vector<ProjPoint> complex_pts;
  std::vector<RatProjPoint> rational_pts;

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      if (body.starts_with("weights:")) {
        std::vector<int> q;
        std::istringstream ws{std::string(body.substr(8))};
        std::string tok;
        while (ws >> tok) {
          int v = 0;
          const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
          if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw ParseError("line " + std::to_string(line_no) + ": bad weight '" + tok + "'");
          q.push_back(v);
        }
        try {
          set.weights = Weights(std::move(q));
        } catch (const Error& e) {
          throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        have_weights = true;
      } else if (body == "labels: last-column") {
        labels = true;
      }
      continue;
    }
    if (!have_weights) throw ParseError("line " + std::to_string(line_no) + ": data before the '# weights:' header");

    auto fields = split(line, ',');
    const std::size_t dim = set.weights.size();
    if (labels) {
      set.labels.push_back(parse_index(fields.back(), line_no, fields.size()));
      fields.pop_back();
    }
    const int row_kind = fields.size() == 2 * dim ? 0 : fields.size() == dim ? 1 : -1;
    if (row_kind < 0)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) + " (rational) or " +
                       std::to_string(2 * dim) + " (complex) fields, got " + std::to_string(fields.size()));
    if (kind >= 0 && row_kind != kind)
      throw ParseError("line " + std::to_string(line_no) + ": mixes complex and rational rows");
    kind = row_kind;
    try {
      if (kind == 0) {
        CVec z(dim);
        for (std::size_t k = 0; k < dim; ++k)
          z[k] = {parse_double(fields[2 * k], line_no, 2 * k + 1), parse_double(fields[2 * k + 1], line_no, 2 * k + 2)};
        complex_pts.emplace_back(set.weights, std::move(z));
      } else {
        std::vector<BigInt> x(dim);
        for (std::size_t k = 0; k < dim; ++k) x[k] = parse_integer(fields[k], line_no, k + 1);
        rational_pts.emplace_back(set.weights, std::move(x));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_weights) throw ParseError("missing '# weights:' header");
  if (kind < 0) throw ParseError("no points");
  if (kind == 0) {
    set.points = std::move(complex_pts);
  } else {
    set.points = std::move(rational_pts);
  }
  return set;
}

PointSet read_points(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return format_for(path) == FileFormat::csv ? parse_points_csv(text) : parse_points_json(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string points_to_json(const PointSet& set, const Json& meta) {
  Json doc;
  doc["meta"] = meta;
  doc["weights"] = set.weights.values();
  Json pts = Json::array();
  if (set.rational()) {
    for (const auto& p : set.rational_points()) {
      Json row = Json::array();
      for (const auto& x : p.coords()) row.push_back(integer_json(x));
      pts.push_back(std::move(row));
    }
  } else {
    for (const auto& p : set.complex_points()) {
      Json re = Json::array(), im = Json::array();
      for (const auto& c : p.coords()) {
        re.push_back(c.real());
        im.push_back(c.imag());
      }
      pts.push_back({{"re", std::move(re)}, {"im", std::move(im)}});
    }
  }
  doc["points"] = std::move(pts);
  if (!set.labels.empty()) doc["labels"] = set.labels;
  return doc.dump(1) + "\n";
}

std::string points_to_csv(const PointSet& set, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "# weights:";
  for (int q : set.weights) out += " " + std::to_string(q);
  out += "\n";
  if (!set.labels.empty()) out += "# labels: last-column\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::string row;
    if (set.rational()) {
      for (const auto& x : set.rational_points()[i].coords()) row += (row.empty() ? "" : ",") + x.str();
    } else {
      for (const auto& c : set.complex_points()[i].coords()) {
        row += (row.empty() ? "" : ",") + detail::format_double(c.real());
        row += "," + detail::format_double(c.imag());
      }
    }
    if (!set.labels.empty()) row += "," + std::to_string(set.labels[i]);
    out += row + "\n";
  }
  return out;
}

Json to_json(const DistanceMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"n", m.size()}, {"entries", std::move(rows)}};
}

DistanceMatrix matrix_from_json(const Json& j) {
  const std::size_t n = index_value(member(j, "n", ""), "n");
  const Json& rows = array_at(j, "entries", "");
  if (rows.size() != n) field_error("entries", "expected " + std::to_string(n) + " rows");
  std::vector<double> data;
  data.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string f = "entries[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != n) field_error(f, "expected " + std::to_string(n) + " values");
    for (std::size_t k = 0; k < n; ++k) data.push_back(number(rows[i][k], f + "[" + std::to_string(k) + "]"));
  }
  try {
    return DistanceMatrix(n, std::move(data));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const Dendrogram& d) {
  Json merges = Json::array();
  for (const Merge& m : d.merges) merges.push_back(Json::array({m.left, m.right, m.height, m.id}));
  return {{"n_leaves", d.n_leaves}, {"merges", std::move(merges)}};
}

Dendrogram dendrogram_from_json(const Json& j) {
  Dendrogram d;
  d.n_leaves = index_value(member(j, "n_leaves", ""), "n_leaves");
  const Json& merges = array_at(j, "merges", "");
  for (std::size_t s = 0; s < merges.size(); ++s) {
    const std::string f = "merges[" + std::to_string(s) + "]";
    const Json& m = merges[s];
    if (!m.is_array() || m.size() != 4) field_error(f, "expected [left, right, height, id]");
    d.merges.push_back({index_value(m[0], f + "[0]"), index_value(m[1], f + "[1]"), number(m[2], f + "[2]"),
                        index_value(m[3], f + "[3]")});
  }
  try {
    d.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return d;
}

std::string partition_to_csv(const Partition& p, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "index,label\n";
  for (std::size_t i = 0; i < p.size(); ++i) out += std::to_string(i) + "," + std::to_string(p[i]) + "\n";
  return out;
}

Partition parse_partition_csv(std::string_view text) {
  Partition p;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line == "index,label") continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": expected 'index,label'");
    const std::size_t index = parse_index(fields[0], line_no, 1);
    if (index != p.size())
      throw ParseError(location(line_no, 1) + ": expected index " + std::to_string(p.size()));
    p.push_back(parse_index(fields[1], line_no, 2));
  }
  return p;
}

namespace {

Json complex_array(const CVec& v) {
  Json re = Json::array(), im = Json::array();
  for (const auto& c : v) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace

Json to_json(const WeightedPCAResult& r) {
  Json comps = Json::array(), proj = Json::array();
  for (const auto& c : r.components) comps.push_back(complex_array(c));
  for (const auto& p : r.projected) proj.push_back(complex_array(p));
  return {{"eigenvalues", r.eigenvalues},
          {"reconstruction_error", r.reconstruction_error},
          {"mean", complex_array(r.mean)},
          {"components", std::move(comps)},
          {"projections", std::move(proj)}};
}

Json to_json(const GeodesicResult& r) {
  Json nodes = Json::array();
  for (const auto& n : r.path.nodes()) nodes.push_back(complex_array(n));
  Json j{{"distance", r.distance},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"chord_length", std::isfinite(r.chord_length) ? Json(r.chord_length) : Json(nullptr)},
         {"best_start", r.best_start},
         {"weights", r.path.weights().values()},
         {"nodes", std::move(nodes)}};
  return j;
}

Json to_json(const ViolationReport& r) {
  auto triples = [](const std::vector<TripleRatio>& v) {
    Json a = Json::array();
    for (const auto& t : v) a.push_back({{"triple", Json::array({t.i, t.j, t.k})}, {"ratio", t.ratio}});
    return a;
  };
  return {{"max_ratio", r.max_ratio},
          {"argmax", Json::array({r.argmax[0], r.argmax[1], r.argmax[2]})},
          {"violations", triples(r.violations)},
          {"zero_denominator", triples(r.zero_denominator)},
          {"trials", r.trials},
          {"seed", r.seed},
          {"tol", r.tol}};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

}  // namespace wps
