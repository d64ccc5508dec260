#include "fcov/covops.hpp"
#include "fcov/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fcov;

namespace {

FunctionalSeries scalar_series(std::initializer_list<double> v) {
  Matrix d(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) d(i++, 0) = x;
  return {Grid(1), d};
}

FunctionalSeries random_series(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  return {Grid(static_cast<std::size_t>(m)), oracle::random_matrix(rng, n, m)};
}

double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("empirical_covariance examples") {
  Matrix d(2, 2);
  d << 1, 0, 0, 1;
  const auto est = empirical_covariance(FunctionalSeries(Grid(2), d));
  Matrix expected(2, 2);
  expected << 0.25, -0.25, -0.25, 0.25;
  CHECK(max_abs(est.op.kernel() - expected) == 0.0);
  CHECK(hs_norm(est.op) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(est.mean[0] == 0.5);
  CHECK(est.n == 2);

  CHECK(empirical_covariance(FunctionalSeries(Grid(3), Matrix::Ones(1, 3))).op.kernel().isZero(0.0));
  CHECK(empirical_covariance(FunctionalSeries(Grid(3), Matrix::Constant(6, 3, 2.5))).op.kernel().isZero(0.0));
}

TEST_CASE("empirical_covariance is symmetric and positive semidefinite") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_series(rng, 30, 17);
    const auto v = empirical_covariance(s).op;
    CHECK(v.kernel() == v.kernel().transpose());
    CHECK(max_abs(v.kernel() - oracle::naive_covariance(s.data())) < 1e-12);
    for (int h_trial = 0; h_trial < 10; ++h_trial) {
      const FunctionalObservation h(s.grid(), oracle::random_matrix(rng, 17, 1).col(0));
      CHECK(inner_h(apply(v, h), h) >= -1e-10);
    }
  }
}

TEST_CASE("empirical_autocovariance examples") {
  std::mt19937_64 rng(3);
  const auto s = random_series(rng, 12, 5);
  CHECK(max_abs(empirical_autocovariance(s, 0).kernel() - empirical_covariance(s).op.kernel()) < 1e-14);

  const Vector mean = s.mean();
  const Vector first = s.data().row(0).transpose() - mean;
  const Vector last = s.data().row(11).transpose() - mean;
  CHECK(max_abs(empirical_autocovariance(s, 11).kernel() - first * last.transpose()) < 1e-14);

  CHECK(empirical_autocovariance(scalar_series({1, 2, 3}), 1).kernel()(0, 0) == 0.0);
  CHECK_THROWS_AS(empirical_autocovariance(s, 12), DomainError);
}

TEST_CASE("direct-sum reduction of the autocovariance") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 15 + trial, m = 6;
    const auto s = random_series(rng, n, m);
    const Vector mean = s.mean();
    for (std::size_t k : {0u, 1u, 2u}) {
      const auto pairs = n - static_cast<Eigen::Index>(k);
      // Paired observations (X_i, X_{i+k}) in H (+) H, centered at the full-sample mean.
      Matrix z(pairs, 2 * m);
      for (Eigen::Index i = 0; i < pairs; ++i) {
        z.row(i) << (s.data().row(i).transpose() - mean).transpose(),
            (s.data().row(i + static_cast<Eigen::Index>(k)).transpose() - mean).transpose();
      }
      const Vector h1 = oracle::random_matrix(rng, m, 1).col(0);
      const Vector h2 = oracle::random_matrix(rng, m, 1).col(0);
      Vector e1 = Vector::Zero(2 * m), e2 = Vector::Zero(2 * m);
      e1.head(m) = h1;
      e2.tail(m) = h2;
      // <V_(X,X+k) e1, e2> in H (+) H with weight 1/m per node.
      double joint = 0.0;
      for (Eigen::Index i = 0; i < pairs; ++i) joint += (z.row(i).dot(e1) / m) * (z.row(i).dot(e2) / m);
      joint /= static_cast<double>(pairs);

      const Grid g(static_cast<std::size_t>(m));
      const double direct = inner_h(apply(empirical_autocovariance(s, k), FunctionalObservation(g, h1)),
                                    FunctionalObservation(g, h2));
      CHECK(std::abs(direct - joint) < 1e-10);
    }
  }
}

TEST_CASE("empirical_cross_covariance examples") {
  std::mt19937_64 rng(5);
  const auto s = random_series(rng, 9, 4);
  CHECK(max_abs(empirical_cross_covariance(s, s).kernel() - empirical_covariance(s).op.kernel()) < 1e-14);
  CHECK(empirical_cross_covariance(FunctionalSeries(Grid(2), Matrix::Ones(1, 2)),
                                   FunctionalSeries(Grid(3), Matrix::Ones(1, 3)))
            .kernel()
            .isZero(0.0));

  Matrix x(2, 2), y(2, 2), expected(2, 2);
  x << 1, 1, -1, -1;
  y << 1, -1, -1, 1;
  expected << 1, -1, 1, -1;
  const auto k = empirical_cross_covariance(FunctionalSeries(Grid(2), x), FunctionalSeries(Grid(2), y)).kernel();
  CHECK(max_abs(k - expected) == 0.0);
  CHECK(max_abs(k - oracle::naive_cross_covariance(x, y)) == 0.0);

  CHECK_THROWS_AS(empirical_cross_covariance(s, random_series(rng, 8, 4)), DomainError);
}

TEST_CASE("s_statistic examples") {
  CHECK(s_statistic(FunctionalSeries(Grid(3), Matrix::Ones(1, 3)), FunctionalSeries(Grid(3), Matrix::Ones(1, 3))) == 0.0);
  const FunctionalSeries c(Grid(4), Matrix::Constant(10, 4, 3.0));
  CHECK(s_statistic(c, c) == 0.0);
  std::mt19937_64 rng(9);
  const auto x = random_series(rng, 20, 8);
  const auto y = random_series(rng, 20, 5);
  const FunctionalSeries x3(x.grid(), 3.0 * x.data());
  CHECK(s_statistic(x3, y) == doctest::Approx(9.0 * s_statistic(x, y)).epsilon(1e-12));
  CHECK(s_statistic(x, y) == doctest::Approx(oracle::hs2(oracle::naive_cross_covariance(x.data(), y.data()))).epsilon(1e-12));
}

TEST_CASE("cusum_path on the n = 4 scalar fixture") {
  const auto s = scalar_series({0, 0, 2, 2});
  const auto path = cusum_path(s);
  REQUIRE(path.terms.size() == 4);
  CHECK(path.n == 4);
  CHECK(path.terms[0].kernel()(0, 0) == 0.0);
  CHECK(path.terms[1].kernel()(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(path.terms[2].kernel()(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(path.terms[3].kernel()(0, 0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(cs_statistic(path) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ci_statistic(path) == doctest::Approx((0.0 + 0.25 + 1.0 + 1.0 / 36.0) / 4.0).epsilon(1e-14));
  CHECK(estimate_changepoint(path) == 2);

  const auto norms = cusum_bridge_norms(s);
  for (std::size_t j = 0; j < 4; ++j) CHECK(norms[j] == doctest::Approx(hs_norm(path.terms[j])).epsilon(1e-14));
  CHECK_THROWS_AS(cusum_path(scalar_series({1})), DomainError);
}

TEST_CASE("cusum_path matches the naive recomputation") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::Index n = 2 + 4 * trial;
    const auto s = random_series(rng, n, 1 + trial % 7);
    const auto path = cusum_path(s);
    const auto naive = oracle::naive_bridge(s.data());
    double worst = 0.0;
    for (std::size_t j = 0; j < naive.size(); ++j) worst = std::max(worst, max_abs(path.terms[j].kernel() - naive[j]));
    CHECK(worst < 1e-10);
    CHECK(path.terms[0].kernel().isZero(0.0));
  }
}

TEST_CASE("cusum statistics: constants, translation and scale") {
  const FunctionalSeries c(Grid(5), Matrix::Constant(12, 5, -4.0));
  CHECK(cs_statistic(cusum_path(c)) == 0.0);
  CHECK(ci_statistic(cusum_path(c)) == 0.0);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_series(rng, 40, 9);
    const Vector shift = oracle::random_matrix(rng, 9, 1, 10.0).col(0);
    const FunctionalSeries shifted(s.grid(), s.data().rowwise() + shift.transpose());
    const auto a = cusum_path(s);
    const auto b = cusum_path(shifted);
    for (std::size_t j = 0; j < a.terms.size(); ++j) CHECK(max_abs(a.terms[j].kernel() - b.terms[j].kernel()) < 1e-12);
    CHECK(std::abs(cs_statistic(a) - cs_statistic(b)) < 1e-12);
    CHECK(std::abs(ci_statistic(a) - ci_statistic(b)) < 1e-12);
    CHECK(max_abs(empirical_covariance(s).op.kernel() - empirical_covariance(shifted).op.kernel()) < 1e-12);

    const double c = 2.5;
    const FunctionalSeries scaled(s.grid(), c * s.data());
    const auto sc = cusum_path(scaled);
    CHECK(cs_statistic(sc) == doctest::Approx(c * c * cs_statistic(a)).epsilon(1e-12));
    CHECK(ci_statistic(sc) == doctest::Approx(std::pow(c, 4) * ci_statistic(a)).epsilon(1e-12));
    CHECK(ci_statistic(a) <= cs_statistic(a) * cs_statistic(a) + 1e-15);
  }
}

TEST_CASE("estimate_changepoint picks the first maximum") {
  CHECK(estimate_changepoint(std::vector<double>(8, 0.0)) == 0);
  std::vector<double> spike(10, 0.1);
  spike[5] = 3.0;
  CHECK(estimate_changepoint(spike) == 5);
  spike[7] = 3.0;
  CHECK(estimate_changepoint(spike) == 5);
  CHECK_THROWS_AS(estimate_changepoint(std::vector<double>{}), DomainError);
}
