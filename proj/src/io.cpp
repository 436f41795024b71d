#include "entwit/io.hpp"

#include <fstream>

#include "entwit/error.hpp"

namespace entwit::io {

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const CVector &v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(to_json(v[i]));
  }
  return arr;
}

json to_json(const CMatrix &m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(to_json(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const json &j) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error("file_format", "complex entries must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CVector vector_from_json(const json &j) {
  if (!j.is_array() || j.empty()) {
    throw Error("file_format", "expected a non-empty array of complex entries");
  }
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  }
  return v;
}

CMatrix matrix_from_json(const json &j) {
  if (!j.is_array() || j.empty()) {
    throw Error("file_format", "expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json &row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error("file_format", "ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

namespace {

json document(int n_qubits, const char *kind, json data) {
  return json{{"n_qubits", n_qubits}, {"kind", kind}, {"data", std::move(data)}};
}

std::string kind_of(const json &doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("data") ||
      !doc.contains("n_qubits")) {
    throw Error("file_format", "document needs n_qubits, kind and data");
  }
  return doc.at("kind").get<std::string>();
}

void check_qubits(const json &doc, Eigen::Index dim) {
  const int declared = doc.at("n_qubits").get<int>();
  if (dimension_of(declared) != dim) {
    throw Error("file_format", "n_qubits does not match the data dimension");
  }
}

} // namespace

json state_document(const PureState &psi) {
  return document(psi.n_qubits(), "pure", to_json(psi.amplitudes()));
}

json density_document(const DensityMatrix &rho) {
  return document(rho.n_qubits(), "density", to_json(rho.matrix()));
}

json operator_document(const HermitianOperator &op) {
  return document(op.n_qubits(), "operator", to_json(op.matrix()));
}

PureState read_pure(const json &doc) {
  const std::string kind = kind_of(doc);
  if (kind != "pure") {
    throw Error("file_format", "expected kind \"pure\", got \"" + kind + "\"");
  }
  CVector v = vector_from_json(doc.at("data"));
  check_qubits(doc, v.size());
  return PureState(std::move(v));
}

DensityMatrix read_density(const json &doc) {
  const std::string kind = kind_of(doc);
  if (kind == "pure") {
    const PureState psi = read_pure(doc);
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
  }
  if (kind != "density") {
    throw Error("file_format", "expected kind \"density\" or \"pure\", got \"" + kind + "\"");
  }
  CMatrix m = matrix_from_json(doc.at("data"));
  check_qubits(doc, m.rows());
  return DensityMatrix(m);
}

HermitianOperator read_operator(const json &doc) {
  const std::string kind = kind_of(doc);
  if (kind == "pure") {
    return projector(read_pure(doc));
  }
  if (kind != "operator" && kind != "density") {
    throw Error("file_format", "unknown kind \"" + kind + "\"");
  }
  CMatrix m = matrix_from_json(doc.at("data"));
  check_qubits(doc, m.rows());
  return HermitianOperator(m);
}

json load_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("file_unreadable", "cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw Error("file_format", path.string() + ": " + e.what());
  }
}

void save_file(const std::filesystem::path &path, const json &doc) {
  std::ofstream out(path);
  if (!out) {
    throw Error("file_unwritable", "cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

} // namespace entwit::io
