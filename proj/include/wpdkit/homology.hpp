#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wpdkit/bits.hpp"
#include "wpdkit/filtration.hpp"

namespace wpdkit {

/// Dense matrix over GF(2), stored column by column.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols, BitVector(rows)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  bool get(std::size_t r, std::size_t c) const { return columns_[c].test(r); }
  void set(std::size_t r, std::size_t c, bool v = true) {
    if (v)
      columns_[c].set(r);
    else
      columns_[c].reset(r);
  }
  const BitVector& column(std::size_t c) const { return columns_[c]; }
  void append_column(BitVector v) { columns_.push_back(std::move(v)); }

  static BitMatrix identity(std::size_t k);

 private:
  std::size_t rows_ = 0;
  std::vector<BitVector> columns_;
};

std::size_t gf2_rank(const BitMatrix& m);

/// d-th boundary map of K: columns are d-simplices, rows (d-1)-simplices, both in the
/// complex's lexicographic order. For d = 0 (or d above the dimension) the matrix has
/// no rows (resp. no columns).
BitMatrix boundary_matrix(const SimplicialComplex& k, int d);

/// Boundary matrix of the filtration's full complex, indexed in filtration order.
BitMatrix boundary_matrix(const VRFiltration& f, int d);

/// ZB_d([q_i, q_j]) = dim(Z_d(F(q_i)) n B_d(F(q_j))) for i <= j.
class BirthDeathFunction {
 public:
  BirthDeathFunction(CriticalGrid grid, int degree);

  const CriticalGrid& grid() const noexcept { return grid_; }
  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return grid_.size(); }
  long long at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, long long v);

 private:
  CriticalGrid grid_;
  int degree_;
  std::vector<long long> table_;  // k x k, upper triangle used
};

BirthDeathFunction zb_function(const VRFiltration& f, int degree);

/// dim Z_d(F(q_i)) for every grid index (kernel of the restricted boundary map).
std::vector<std::size_t> cycle_dimensions(const VRFiltration& f, int degree);
/// dim B_d(F(q_j)) for every grid index.
std::vector<std::size_t> boundary_dimensions(const VRFiltration& f, int degree);

class PersistenceDiagram;

/// Classical persistence by column reduction of the (d+1)-boundary matrix. Finite
/// bars of positive length only. With `tie_seed`, simplices sharing a grid value are
/// processed in a shuffled order.
PersistenceDiagram pd_reduction_oracle(const VRFiltration& f, int degree,
                                       std::optional<std::uint64_t> tie_seed = std::nullopt);

}  // namespace wpdkit
