#include "twodevp/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace twodevp {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::parse_error, what); }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail("complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

// Next line that is neither blank nor a comment.
bool data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

double json_double(const Json& j, const char* key) {
  if (!j.contains(key)) parse_fail(std::string("missing key \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number()) parse_fail(std::string("key \"") + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows")) parse_fail("matrix JSON needs an object with \"rows\"");
  const Json& rows = j.at("rows");
  if (!rows.is_array() || rows.empty()) parse_fail("\"rows\" must be a non-empty array");
  const auto n = static_cast<Index>(rows.size());
  if (j.contains("n")) {
    if (!j.at("n").is_number_integer() || j.at("n").get<Index>() != n) {
      parse_fail("\"n\" does not match the number of rows");
    }
  }
  CMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const Json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      std::ostringstream os;
      os << "row " << r << " must have " << n << " entries";
      parse_fail(os.str());
    }
    for (Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"n", m.rows()}, {"rows", std::move(rows)}};
}

CMatrix parse_matrix_market(std::istream& in, bool* general) {
  std::string banner;
  if (!std::getline(in, banner)) parse_fail("empty Matrix Market file");
  std::istringstream hs(banner);
  std::string tag, object, layout, field, symmetry;
  hs >> tag >> object >> layout >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket" || lower(object) != "matrix") parse_fail("bad Matrix Market banner");
  layout = lower(layout);
  field = lower(field);
  symmetry = lower(symmetry);
  if (layout != "coordinate" && layout != "array") parse_fail("unsupported layout " + layout);
  if (field != "real" && field != "integer" && field != "complex") parse_fail("unsupported field " + field);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" &&
      symmetry != "skew-symmetric") {
    parse_fail("unsupported symmetry " + symmetry);
  }
  const bool is_complex = field == "complex";
  if (general) *general = symmetry == "general";

  std::string line;
  if (!data_line(in, line)) parse_fail("missing size line");
  std::istringstream ss(line);
  long rows = 0, cols = 0, nnz = 0;
  ss >> rows >> cols;
  if (layout == "coordinate") ss >> nnz;
  if (!ss || rows <= 0 || rows != cols) parse_fail("matrix must be square with positive size");

  CMatrix m = CMatrix::Zero(rows, cols);
  auto place = [&](long i, long j, Complex v) {
    if (i < 0 || j < 0 || i >= rows || j >= cols) parse_fail("entry index out of range");
    m(i, j) = v;
    if (i == j) return;
    if (symmetry == "symmetric") m(j, i) = v;
    if (symmetry == "hermitian") m(j, i) = std::conj(v);
    if (symmetry == "skew-symmetric") m(j, i) = -v;
  };
  auto read_value = [&](std::istringstream& es) {
    double re = 0.0, im = 0.0;
    es >> re;
    if (is_complex) es >> im;
    if (!es) parse_fail("malformed entry: " + line);
    return Complex(re, im);
  };

  if (layout == "coordinate") {
    for (long e = 0; e < nnz; ++e) {
      if (!data_line(in, line)) parse_fail("fewer entries than declared");
      std::istringstream es(line);
      long i = 0, j = 0;
      es >> i >> j;
      place(i - 1, j - 1, read_value(es));
    }
  } else {
    const bool lower_only = symmetry != "general";
    for (long j = 0; j < cols; ++j) {
      for (long i = lower_only ? j : 0; i < rows; ++i) {
        if (symmetry == "skew-symmetric" && i == j) continue;
        if (!data_line(in, line)) parse_fail("fewer entries than declared");
        std::istringstream es(line);
        place(i, j, read_value(es));
      }
    }
  }
  return m;
}

void write_matrix_market(std::ostream& out, const CMatrix& m) {
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.size() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      out << i + 1 << ' ' << j + 1 << ' ' << m(i, j).real() << ' ' << m(i, j).imag() << '\n';
    }
  }
}

MatrixFile parse_matrix_text(const std::string& text) {
  MatrixFile f;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text.compare(first, 14, "%%MatrixMarket") == 0) {
    std::istringstream in(text.substr(first));
    f.format = MatrixFormat::matrix_market;
    f.matrix = parse_matrix_market(in, &f.general);
    return f;
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  f.format = MatrixFormat::json;
  f.matrix = matrix_from_json(j);
  return f;
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix_text(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + std::string(e.what()));
  }
}

CMatrix hermitian_input(const MatrixFile& f, std::vector<std::string>& warnings, const std::string& label) {
  if (f.format != MatrixFormat::matrix_market || !f.general) return f.matrix;
  const double asym = (f.matrix - f.matrix.adjoint()).cwiseAbs().maxCoeff();
  std::ostringstream os;
  os << label << ": Matrix Market symmetry is 'general'; using (M + M^H)/2 (max |M - M^H| = " << asym << ")";
  warnings.push_back(os.str());
  return 0.5 * (f.matrix + f.matrix.adjoint());
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_fail("vector must be a non-empty array of [re, im]");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json to_json(const TwoDEigentriple& t) {
  return Json{{"mu", t.mu},
              {"lambda", t.lambda},
              {"x", vector_to_json(t.x)},
              {"residuals", {{"eig", t.residuals.eig}, {"iso", t.residuals.iso}, {"norm", t.residuals.norm}}},
              {"certified", t.certified}};
}

TwoDEigentriple triple_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("triple must be an object");
  TwoDEigentriple t;
  t.mu = json_double(j, "mu");
  t.lambda = json_double(j, "lambda");
  if (!j.contains("x")) parse_fail("missing key \"x\"");
  t.x = vector_from_json(j.at("x"));
  if (j.contains("residuals")) {
    const Json& r = j.at("residuals");
    t.residuals.eig = json_double(r, "eig");
    t.residuals.iso = json_double(r, "iso");
    t.residuals.norm = json_double(r, "norm");
  }
  if (j.contains("certified")) t.certified = j.at("certified").get<bool>();
  return t;
}

Json to_json(const MuBound& b) { return Json{{"bound", b.bound}, {"source", to_string(b.source)}}; }

Json to_json(const LambdaBounds& b) {
  return Json{{"lower", b.lower}, {"upper", b.upper}, {"mu_up", b.mu_up}, {"mu_lo", b.mu_lo}};
}

Json to_json(const RegularityVerdict& r) {
  return Json{{"regular", r.regular},
              {"witness_sigma", r.witness_sigma ? Json(*r.witness_sigma) : Json(nullptr)},
              {"witness_lambda_lines", r.witness_lambda_lines}};
}

Json to_json(const SolveReport& r) {
  Json triples = Json::array();
  for (const auto& t : r.triples) triples.push_back(to_json(t));
  Json misses = Json::array();
  for (const auto& t : r.near_misses) misses.push_back(to_json(t));
  return Json{{"triples", std::move(triples)},
              {"near_misses", std::move(misses)},
              {"lambda_bounds", to_json(r.lambda_bounds)},
              {"mu_bound", to_json(r.mu_bound)},
              {"regularity", to_json(r.regularity)},
              {"line_families", r.line_families}};
}

SolveReport report_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("report must be an object");
  SolveReport r;
  try {
    for (const auto& t : j.at("triples")) r.triples.push_back(triple_from_json(t));
    if (j.contains("near_misses")) {
      for (const auto& t : j.at("near_misses")) r.near_misses.push_back(triple_from_json(t));
    }
    const Json& lb = j.at("lambda_bounds");
    r.lambda_bounds = {json_double(lb, "lower"), json_double(lb, "upper"), json_double(lb, "mu_up"),
                       json_double(lb, "mu_lo")};
    const Json& mb = j.at("mu_bound");
    r.mu_bound.bound = json_double(mb, "bound");
    const std::string source = mb.at("source").get<std::string>();
    if (source == "closed_form") {
      r.mu_bound.source = BoundSource::closed_form;
    } else if (source == "asymptote_bracket") {
      r.mu_bound.source = BoundSource::asymptote_bracket;
    } else if (source == "user") {
      r.mu_bound.source = BoundSource::user;
    } else {
      parse_fail("unknown mu_bound source " + source);
    }
    const Json& reg = j.at("regularity");
    r.regularity.regular = reg.at("regular").get<bool>();
    if (!reg.at("witness_sigma").is_null()) r.regularity.witness_sigma = reg.at("witness_sigma").get<double>();
    r.regularity.witness_lambda_lines = reg.at("witness_lambda_lines").get<std::vector<double>>();
    r.line_families = j.at("line_families").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    parse_fail(std::string("malformed report: ") + e.what());
  }
  return r;
}

Json to_json(const TwoByTwoSolution& s) {
  Json triples = Json::array();
  for (const auto& t : s.triples) triples.push_back(to_json(t));
  return Json{{"case", s.kind == TwoByTwoCase::offdiag ? "offdiag" : "diag"},
              {"triples", std::move(triples)},
              {"family", s.family},
              {"near_threshold", s.near_threshold},
              {"c1", s.c1},
              {"c2", s.c2}};
}

Json to_json(const MinimaxResult& r) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"case", to_string(r.kind)},
              {"value", r.value},
              {"x_opt", vector_to_json(r.x_opt)},
              {"mu_opt", opt(r.mu_opt)},
              {"left_slope_at_0", opt(r.left_slope_at_0)},
              {"right_slope_at_1", opt(r.right_slope_at_1)}};
}

Json to_json(const StabilityResult& r) {
  Json minima = Json::array();
  for (const auto& m : r.local_minima) minima.push_back(Json{{"mu", m.mu}, {"value", m.value}});
  return Json{{"beta", r.beta},
              {"mu_opt", r.mu_opt},
              {"certificate", r.certificate},
              {"local_minima", std::move(minima)}};
}

void write_curves_csv(std::ostream& out, const std::vector<CurveSample>& samples) {
  const Index n = samples.empty() ? 0 : samples.front().lambdas.size();
  out << "mu";
  for (Index i = 1; i <= n; ++i) out << ",lambda_" << i;
  for (Index i = 1; i <= n; ++i) out << ",g_" << i;
  out << '\n';
  out << std::setprecision(17);
  for (const auto& s : samples) {
    out << s.mu;
    for (Index i = 0; i < n; ++i) out << ',' << s.lambdas(i);
    for (Index i = 0; i < n; ++i) out << ',' << s.gvals(i);
    out << '\n';
  }
}

std::vector<CurveSample> read_curves_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_fail("empty CSV");
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  if (line.rfind("mu,", 0) != 0 || columns < 3 || (columns - 1) % 2 != 0) parse_fail("bad CSV header");
  const Index n = static_cast<Index>((columns - 1) / 2);
  std::vector<CurveSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> values;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) parse_fail("bad CSV number " + cell);
      } catch (const std::logic_error&) {
        parse_fail("bad CSV number " + cell);
      }
    }
    if (static_cast<long>(values.size()) != columns) parse_fail("CSV row has the wrong number of columns");
    CurveSample s;
    s.mu = values[0];
    s.lambdas = Eigen::Map<const RVector>(values.data() + 1, n);
    s.gvals = Eigen::Map<const RVector>(values.data() + 1 + n, n);
    s.reliable.assign(static_cast<std::size_t>(n), true);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace twodevp
