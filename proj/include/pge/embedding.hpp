#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pge/error.hpp"
#include "pge/graph.hpp"
#include "pge/matrix.hpp"

namespace pge {

// Dense vertex embeddings. Row r holds the embedding of parent vertex
// index()[r]; the index is a bijection onto its vertex set.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;

  EmbeddingMatrix(Matrix values, std::vector<VertexId> index)
      : values_(std::move(values)), index_(std::move(index)) {
    if (values_.rows() != index_.size())
      throw std::invalid_argument("EmbeddingMatrix: index size does not match row count");
    lookup_.reserve(index_.size());
    for (std::size_t r = 0; r < index_.size(); ++r)
      if (!lookup_.emplace(index_[r], r).second)
        throw std::invalid_argument("EmbeddingMatrix: duplicate vertex " +
                                    std::to_string(index_[r]));
  }

  // Rows indexed 0..rows-1.
  static EmbeddingMatrix with_identity_index(Matrix values) {
    std::vector<VertexId> index(values.rows());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<VertexId>(i);
    return EmbeddingMatrix(std::move(values), std::move(index));
  }

  const Matrix& values() const noexcept { return values_; }
  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t dim() const noexcept { return values_.cols(); }
  std::span<const VertexId> index() const noexcept { return index_; }

  bool contains(VertexId v) const { return lookup_.contains(v); }

  std::optional<std::size_t> row_of(VertexId v) const {
    auto it = lookup_.find(v);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const double> row_for(VertexId v) const {
    auto r = row_of(v);
    if (!r) throw std::out_of_range("vertex " + std::to_string(v) + " has no embedding row");
    return values_.row(*r);
  }

  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    return a.index_ == b.index_ && a.values_ == b.values_;
  }

 private:
  Matrix values_;
  std::vector<VertexId> index_;
  std::unordered_map<VertexId, std::size_t> lookup_;
};

// Rows of `e` reordered to follow `order` (every vertex must be present).
inline Matrix rows_in_order(const EmbeddingMatrix& e, std::span<const VertexId> order) {
  Matrix out(order.size(), e.dim());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto src = e.row_for(order[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

// Text format: "<rows> <dim>" then "<vertex> v1 ... vd" per row, 9
// significant digits.
inline void write_embedding(const EmbeddingMatrix& e, std::ostream& out) {
  out << e.rows() << ' ' << e.dim() << '\n';
  out << std::setprecision(9);
  for (std::size_t r = 0; r < e.rows(); ++r) {
    out << e.index()[r];
    for (double x : e.values().row(r)) out << ' ' << x;
    out << '\n';
  }
}

inline EmbeddingMatrix read_embedding(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  std::size_t rows = 0, dim = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream s(line);
    if (s >> rows >> dim) break;
    if (!line.empty()) throw InputError(source + ":" + std::to_string(line_no) + ": bad header");
  }
  if (line_no == 0) throw InputError(source + ": empty embedding file");
  Matrix values(rows, dim);
  std::vector<VertexId> index(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw InputError(source + ": expected " + std::to_string(rows) + " rows, got " +
                       std::to_string(r));
    ++line_no;
    std::istringstream s(line);
    long long id = -1;
    if (!(s >> id) || id < 0)
      throw InputError(source + ":" + std::to_string(line_no) + ": bad vertex id");
    index[r] = static_cast<VertexId>(id);
    for (std::size_t c = 0; c < dim; ++c)
      if (!(s >> values(r, c)))
        throw InputError(source + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(dim) + " values");
  }
  try {
    return EmbeddingMatrix(std::move(values), std::move(index));
  } catch (const std::invalid_argument& ex) {
    throw InputError(source + ": " + ex.what());
  }
}

inline void save_embedding(const EmbeddingMatrix& e, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write embedding '" + path + "'");
  write_embedding(e, out);
}

inline EmbeddingMatrix load_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open embedding '" + path + "'");
  return read_embedding(in, path);
}

}  // namespace pge
