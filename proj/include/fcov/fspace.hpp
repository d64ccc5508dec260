#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace fcov {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * @brief Equidistant midpoint quadrature grid on [0,1].
 *
 * Node j (0-based) sits at (j + 1/2) / m and carries weight 1/m, so the
 * quadrature of the constant 1 is exactly 1 and no node falls on s = 0.
 */
class Grid {
 public:
  explicit Grid(std::size_t m);

  std::size_t size() const noexcept { return m_; }
  double node(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) / static_cast<double>(m_); }
  double weight() const noexcept { return 1.0 / static_cast<double>(m_); }
  Vector nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t m_;
};

/// A single function sampled at the nodes of a grid.
class FunctionalObservation {
 public:
  FunctionalObservation(Grid grid, Vector values);

  static FunctionalObservation zero(const Grid& grid);
  static FunctionalObservation constant(const Grid& grid, double c);

  const Grid& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }
  double operator[](std::size_t j) const { return values_(static_cast<Eigen::Index>(j)); }

 private:
  Grid grid_;
  Vector values_;
};

/// n observations on a shared grid, stored as an n x m array (row i = X_i).
class FunctionalSeries {
 public:
  FunctionalSeries(Grid grid, Matrix data);

  /// Stacks observations; all must share the grid of the first.
  static FunctionalSeries from_observations(std::span<const FunctionalObservation> rows);

  const Grid& grid() const noexcept { return grid_; }
  const Matrix& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  FunctionalObservation row(std::size_t i) const;

  /// Rows picked by index, in the given order (the resampled series for a bootstrap draw).
  FunctionalSeries select(std::span<const std::size_t> indices) const;
  FunctionalSeries head(std::size_t count) const;
  Vector mean() const;

 private:
  Grid grid_;
  Matrix data_;
};

/// Integral operator kernel c(s,t) sampled on row x column grid nodes.
class HSOperator {
 public:
  HSOperator(Grid row_grid, Grid col_grid, Matrix kernel);

  static HSOperator zero(const Grid& row_grid, const Grid& col_grid);

  const Grid& row_grid() const noexcept { return row_grid_; }
  const Grid& col_grid() const noexcept { return col_grid_; }
  const Matrix& kernel() const noexcept { return kernel_; }

  HSOperator transpose() const;

  HSOperator& operator+=(const HSOperator& other);
  HSOperator& operator-=(const HSOperator& other);
  HSOperator& operator*=(double c);

  friend HSOperator operator+(HSOperator a, const HSOperator& b) { return a += b; }
  friend HSOperator operator-(HSOperator a, const HSOperator& b) { return a -= b; }
  friend HSOperator operator*(double c, HSOperator a) { return a *= c; }

 private:
  Grid row_grid_;
  Grid col_grid_;
  Matrix kernel_;
};

/// Element of the direct sum H (+) G.
struct DirectSumObservation {
  FunctionalObservation left;
  FunctionalObservation right;
};

double inner_h(const FunctionalObservation& x, const FunctionalObservation& y);
double norm_h(const FunctionalObservation& x);

/// Rank-one operator with kernel x(s) y(t).
HSOperator tensor(const FunctionalObservation& x, const FunctionalObservation& y);

double hs_inner(const HSOperator& a, const HSOperator& b);
double hs_norm(const HSOperator& a);
/// hs_norm(a)^2 without the square root round trip.
double hs_norm_squared(const HSOperator& a);

double direct_sum_inner(const DirectSumObservation& z1, const DirectSumObservation& z2);

/// Applies the operator to h: (A h)(t) = \int c(s,t) h(s) ds, h on the row grid.
FunctionalObservation apply(const HSOperator& a, const FunctionalObservation& h);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace fcov
