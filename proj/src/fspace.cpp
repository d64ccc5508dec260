#include "fcov/fspace.hpp"

#include "fcov/errors.hpp"

#include <cmath>
#include <string>

namespace fcov {

Grid::Grid(std::size_t m) : m_(m) {
  if (m == 0) throw DomainError("grid needs at least one node");
}

Vector Grid::nodes() const {
  Vector s(static_cast<Eigen::Index>(m_));
  for (std::size_t j = 0; j < m_; ++j) s(static_cast<Eigen::Index>(j)) = node(j);
  return s;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": grid mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + " nodes)");
  }
}

FunctionalObservation::FunctionalObservation(Grid grid, Vector values) : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
    throw DimensionError("observation length " + std::to_string(values_.size()) + " does not match grid size " +
                         std::to_string(grid_.size()));
  }
  if (!values_.allFinite()) throw DomainError("observation contains non-finite values");
}

FunctionalObservation FunctionalObservation::zero(const Grid& grid) {
  return {grid, Vector::Zero(static_cast<Eigen::Index>(grid.size()))};
}

FunctionalObservation FunctionalObservation::constant(const Grid& grid, double c) {
  return {grid, Vector::Constant(static_cast<Eigen::Index>(grid.size()), c)};
}

FunctionalSeries::FunctionalSeries(Grid grid, Matrix data) : grid_(grid), data_(std::move(data)) {
  if (data_.rows() < 1) throw DomainError("series needs at least one observation");
  if (static_cast<std::size_t>(data_.cols()) != grid_.size()) {
    throw DimensionError("series has " + std::to_string(data_.cols()) + " columns but the grid has " +
                         std::to_string(grid_.size()) + " nodes");
  }
  if (!data_.allFinite()) throw DomainError("series contains non-finite values");
}

FunctionalSeries FunctionalSeries::from_observations(std::span<const FunctionalObservation> rows) {
  if (rows.empty()) throw DomainError("series needs at least one observation");
  const Grid grid = rows.front().grid();
  Matrix data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_same_grid(grid, rows[i].grid(), "from_observations");
    data.row(static_cast<Eigen::Index>(i)) = rows[i].values().transpose();
  }
  return {grid, std::move(data)};
}

FunctionalObservation FunctionalSeries::row(std::size_t i) const {
  if (i >= size()) throw DomainError("row index out of range");
  return {grid_, data_.row(static_cast<Eigen::Index>(i)).transpose()};
}

FunctionalSeries FunctionalSeries::select(std::span<const std::size_t> indices) const {
  Matrix out(static_cast<Eigen::Index>(indices.size()), data_.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= size()) throw DomainError("row index out of range");
    out.row(static_cast<Eigen::Index>(i)) = data_.row(static_cast<Eigen::Index>(indices[i]));
  }
  return {grid_, std::move(out)};
}

FunctionalSeries FunctionalSeries::head(std::size_t count) const {
  if (count == 0 || count > size()) throw DomainError("head: count out of range");
  return {grid_, data_.topRows(static_cast<Eigen::Index>(count))};
}

Vector FunctionalSeries::mean() const { return data_.colwise().mean().transpose(); }

HSOperator::HSOperator(Grid row_grid, Grid col_grid, Matrix kernel)
    : row_grid_(row_grid), col_grid_(col_grid), kernel_(std::move(kernel)) {
  if (static_cast<std::size_t>(kernel_.rows()) != row_grid_.size() ||
      static_cast<std::size_t>(kernel_.cols()) != col_grid_.size()) {
    throw DimensionError("kernel shape does not match its grids");
  }
  if (!kernel_.allFinite()) throw DomainError("kernel contains non-finite values");
}

HSOperator HSOperator::zero(const Grid& row_grid, const Grid& col_grid) {
  return {row_grid, col_grid,
          Matrix::Zero(static_cast<Eigen::Index>(row_grid.size()), static_cast<Eigen::Index>(col_grid.size()))};
}

HSOperator HSOperator::transpose() const { return {col_grid_, row_grid_, kernel_.transpose()}; }

HSOperator& HSOperator::operator+=(const HSOperator& other) {
  require_same_grid(row_grid_, other.row_grid_, "operator +");
  require_same_grid(col_grid_, other.col_grid_, "operator +");
  kernel_ += other.kernel_;
  return *this;
}

HSOperator& HSOperator::operator-=(const HSOperator& other) {
  require_same_grid(row_grid_, other.row_grid_, "operator -");
  require_same_grid(col_grid_, other.col_grid_, "operator -");
  kernel_ -= other.kernel_;
  return *this;
}

HSOperator& HSOperator::operator*=(double c) {
  kernel_ *= c;
  return *this;
}

namespace {

double area(const HSOperator& a) {
  return static_cast<double>(a.row_grid().size()) * static_cast<double>(a.col_grid().size());
}

}  // namespace

double inner_h(const FunctionalObservation& x, const FunctionalObservation& y) {
  require_same_grid(x.grid(), y.grid(), "inner_h");
  return x.values().dot(y.values()) / static_cast<double>(x.grid().size());
}

double norm_h(const FunctionalObservation& x) { return std::sqrt(inner_h(x, x)); }

HSOperator tensor(const FunctionalObservation& x, const FunctionalObservation& y) {
  return {x.grid(), y.grid(), x.values() * y.values().transpose()};
}

double hs_inner(const HSOperator& a, const HSOperator& b) {
  require_same_grid(a.row_grid(), b.row_grid(), "hs_inner");
  require_same_grid(a.col_grid(), b.col_grid(), "hs_inner");
  return a.kernel().cwiseProduct(b.kernel()).sum() / area(a);
}

double hs_norm_squared(const HSOperator& a) {
  return a.kernel().squaredNorm() / area(a);
}

double hs_norm(const HSOperator& a) { return std::sqrt(hs_norm_squared(a)); }

double direct_sum_inner(const DirectSumObservation& z1, const DirectSumObservation& z2) {
  return inner_h(z1.left, z2.left) + inner_h(z1.right, z2.right);
}

FunctionalObservation apply(const HSOperator& a, const FunctionalObservation& h) {
  require_same_grid(a.row_grid(), h.grid(), "apply");
  return {a.col_grid(), a.kernel().transpose() * h.values() * a.row_grid().weight()};
}

}  // namespace fcov
