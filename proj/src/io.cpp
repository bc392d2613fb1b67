#include <qdiv/io.hpp>

#include <fstream>
#include <limits>
#include <sstream>

namespace qdiv {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw ValidationError(context + ": " + what);
}

Complex entry_from_json(const Json& e, const std::string& context, Eigen::Index i, Eigen::Index j) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  std::ostringstream os;
  os << "entry (" << i << "," << j << ") must be [re, im]";
  fail(context, os.str());
}

}  // namespace

BipartiteState StateFile::bipartite() const {
  if (!dims) throw ValidationError("state file has no \"dims\" field; a bipartite state needs [dA, dB]");
  return BipartiteState(state, *dims);
}

Matrix matrix_from_json(const Json& entries, const std::string& context) {
  if (!entries.is_array() || entries.empty()) fail(context, "\"entries\" must be a nonempty array of rows");
  const Eigen::Index rows = Eigen::Index(entries.size());
  const Eigen::Index cols = entries[0].is_array() ? Eigen::Index(entries[0].size()) : 0;
  if (cols == 0) fail(context, "rows of \"entries\" must be nonempty arrays");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = entries[std::size_t(i)];
    if (!row.is_array() || Eigen::Index(row.size()) != cols) {
      std::ostringstream os;
      os << "row " << i << " has " << (row.is_array() ? row.size() : 0) << " entries, expected " << cols;
      fail(context, os.str());
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = entry_from_json(row[std::size_t(j)], context, i, j);
  }
  if (!m.allFinite()) fail(context, "entries must be finite");
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

StateFile parse_state_json(const Json& j, const std::string& context) {
  if (!j.is_object()) fail(context, "expected a JSON object");
  if (!j.contains("entries")) fail(context, "missing \"entries\"");
  Matrix m = matrix_from_json(j["entries"], context);
  if (m.rows() != m.cols()) fail(context, "matrix is not square");
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long>() != long(m.rows())) {
      std::ostringstream os;
      os << "\"dim\" does not match the " << m.rows() << "x" << m.rows() << " entries";
      fail(context, os.str());
    }
  }

  // Hermiticity, reporting the worst entry.
  double worst = 0.0;
  Eigen::Index wi = 0, wj = 0;
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      const double dev = std::abs(m(a, b) - std::conj(m(b, a)));
      if (dev > worst) worst = dev, wi = a, wj = b;
    }
  if (worst > tol::file_hermitian) {
    std::ostringstream os;
    os << "not Hermitian: entry (" << wi << "," << wj << ") differs from the conjugate of (" << wj << "," << wi
       << ") by " << worst;
    fail(context, os.str());
  }
  m = hermitian_part(m);

  auto eig = eig_hermitian(m);
  const double lowest = eig.values.minCoeff();
  if (lowest < -tol::file_psd) {
    std::ostringstream os;
    os << "not positive semidefinite: eigenvalue " << lowest;
    fail(context, os.str());
  }
  if (lowest < 0.0) m = eig.apply([](double x) { return std::max(x, 0.0); });

  const double tr = real_trace(m);
  if (tr > 1.0 + tol::file_trace) {
    std::ostringstream os;
    os << "trace " << tr << " exceeds 1";
    fail(context, os.str());
  }
  if (!(tr > 0.0)) fail(context, "trace must be positive");
  if (tr > 1.0) m /= tr;

  StateFile out{DensityOperator::trusted(m), std::nullopt};
  if (j.contains("dims")) {
    const Json& d = j["dims"];
    if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer())
      fail(context, "\"dims\" must be [dA, dB]");
    const Dims dims{d[0].get<Eigen::Index>(), d[1].get<Eigen::Index>()};
    if (dims.a < 1 || dims.b < 1 || dims.total() != m.rows()) {
      std::ostringstream os;
      os << "\"dims\" " << dims.a << "x" << dims.b << " do not match dimension " << m.rows();
      fail(context, os.str());
    }
    out.dims = dims;
  }
  return out;
}

StateFile parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON: " + e.what());
  }
  return parse_state_json(j, path);
}

Json state_to_json(const Matrix& m, const std::optional<Dims>& dims) {
  Json j;
  j["dim"] = m.rows();
  j["entries"] = matrix_to_json(m);
  if (dims) j["dims"] = {dims->a, dims->b};
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError(path + ": cannot write file");
  out << j.dump(2) << "\n";
}

QuantumChannel parse_channel_json(const Json& j, const std::string& context) {
  if (!j.is_object() || !j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
    fail(context, "expected an object with a nonempty \"kraus\" array");
  std::vector<Matrix> kraus;
  for (const Json& k : j["kraus"]) kraus.push_back(matrix_from_json(k, context));
  return QuantumChannel(std::move(kraus));
}

Json channel_to_json(const QuantumChannel& channel) {
  Json j;
  j["in_dim"] = channel.in_dim();
  j["out_dim"] = channel.out_dim();
  j["kraus"] = Json::array();
  for (const Matrix& k : channel.kraus()) j["kraus"].push_back(matrix_to_json(k));
  return j;
}

Json to_json(const DivergenceValue& v) {
  if (v.finite) return v.bits;
  return "inf";
}

}  // namespace qdiv
