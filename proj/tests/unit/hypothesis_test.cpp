#include "fcov/errors.hpp"
#include "fcov/hypothesis.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

using namespace fcov;

namespace {

FunctionalSeries random_series(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  return {Grid(static_cast<std::size_t>(m)), oracle::random_matrix(rng, n, m)};
}

TestConfig fixed(std::size_t p, std::size_t B, std::uint64_t seed) {
  TestConfig cfg;
  cfg.block_length = p;
  cfg.B = B;
  cfg.seed = seed;
  return cfg;
}

// Exact P*(T* >= t) over all k^k block choices.
template <class Stat>
double exact_tail(std::size_t k, std::size_t p, double t, Stat stat) {
  const auto choices = oracle::all_block_choices(k, k);
  std::size_t hits = 0;
  for (const auto& c : choices) hits += stat(oracle::rows_for(c, p)) >= t ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(choices.size());
}

}  // namespace

TEST_CASE("p-value convention") {
  CHECK(bootstrap_p_value(1.0, {0.5, 2.0, 1.0, 0.1}) == doctest::Approx(3.0 / 5.0));
  CHECK(bootstrap_p_value(10.0, {0.5, 2.0}) == doctest::Approx(1.0 / 3.0));
  CHECK(bootstrap_p_value(0.0, {0.0, 0.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(bootstrap_p_value(1.0, {}), DomainError);
}

TEST_CASE("critical value is an order statistic and +inf beyond B") {
  std::vector<double> reps;
  for (int i = 1; i <= 19; ++i) reps.push_back(static_cast<double>(i));
  CHECK(bootstrap_critical_value(0.05, reps) == 19.0);
  CHECK(bootstrap_critical_value(0.10, reps) == 18.0);
  CHECK(bootstrap_critical_value(0.50, reps) == 10.0);
  CHECK(std::isinf(bootstrap_critical_value(0.01, reps)));
  std::reverse(reps.begin(), reps.end());
  CHECK(bootstrap_critical_value(0.10, reps) == 18.0);
}

TEST_CASE("report invariants: decisions follow critical values and p-values") {
  std::mt19937_64 gen(5);
  const auto x = random_series(gen, 40, 6);
  const auto y = random_series(gen, 40, 6);
  auto cfg = fixed(4, 199, 17);
  cfg.levels = {0.01, 0.05, 0.10, 0.5};
  const auto rep = cross_covariance_test(x, y, cfg);
  CHECK(rep.p_value > 0.0);
  CHECK(rep.p_value <= 1.0);
  CHECK(rep.block_length_used == 4);
  bool previous = false;
  for (double level : cfg.levels) {
    CHECK(rep.rejected.at(level) == (rep.statistic > rep.critical_values.at(level)));
    CHECK(rep.rejected.at(level) == (rep.p_value <= level));
    if (previous) CHECK(rep.rejected.at(level));
    previous = rep.rejected.at(level);
  }

  // Permuting replicates and inflating the statistic.
  TestReport permuted = rep;
  std::reverse(permuted.replicates.values.begin(), permuted.replicates.values.end());
  finalize_report(permuted, cfg.levels);
  CHECK(permuted.p_value == rep.p_value);
  CHECK(permuted.critical_values == rep.critical_values);
  TestReport larger = rep;
  larger.statistic *= 3.0;
  finalize_report(larger, cfg.levels);
  CHECK(larger.p_value <= rep.p_value);
}

TEST_CASE("cross test examples") {
  std::mt19937_64 gen(6);
  const auto x = random_series(gen, 30, 5);
  const FunctionalSeries zero(Grid(5), Matrix::Zero(30, 5));
  const auto rep = cross_covariance_test(x, zero, fixed(3, 99, 1));
  CHECK(rep.statistic == 0.0);
  CHECK(rep.p_value == 1.0);

  const auto y = random_series(gen, 30, 4);
  const auto xy = cross_covariance_test(x, y, fixed(3, 50, 2));
  const auto yx = cross_covariance_test(y, x, fixed(3, 50, 2));
  CHECK(std::abs(xy.statistic - yx.statistic) <= 1e-12 * (1.0 + xy.statistic));
  CHECK(xy.statistic == doctest::Approx(30.0 * s_statistic(x, y)).epsilon(1e-12));

  CHECK_THROWS_AS(cross_covariance_test(x, random_series(gen, 29, 4), fixed(3, 10, 1)), DomainError);
  CHECK_THROWS_AS(cross_covariance_test(random_series(gen, 3, 2), random_series(gen, 3, 2), fixed(1, 10, 1)),
                  DomainError);
  auto bad = fixed(3, 0, 1);
  CHECK_THROWS_AS(cross_covariance_test(x, y, bad), ConfigError);
  bad = fixed(3, 10, 1);
  bad.levels = {1.2};
  CHECK_THROWS_AS(cross_covariance_test(x, y, bad), ConfigError);
}

TEST_CASE("cross test p-value matches the exact enumeration (n=4, p=2, m=1)") {
  Matrix xd(4, 1), yd(4, 1);
  xd << 0.3, -1.2, 2.0, 0.4;
  yd << 1.1, 0.2, -0.7, 0.9;
  const FunctionalSeries x(Grid(1), xd), y(Grid(1), yd);
  const std::size_t B = 40000;
  const auto rep = cross_covariance_test(x, y, fixed(2, B, 3));
  const double exact = exact_tail(2, 2, rep.statistic,
                                  [&](const std::vector<std::size_t>& idx) { return oracle::cross_replicate(xd, yd, idx, true); });
  const double mc = rep.p_value * (B + 1.0) - 1.0;
  const double sd = std::sqrt(exact * (1.0 - exact) * B);
  CHECK(std::abs(mc - exact * B) <= 3.0 * sd + 1.0);
}

TEST_CASE("one-sample test examples") {
  std::mt19937_64 gen(7);
  const auto x = random_series(gen, 24, 4);
  const auto v_hat = empirical_covariance(x).op;
  const auto rep = one_sample_test(x, v_hat, fixed(3, 60, 4));
  CHECK(rep.statistic < 1e-24);
  CHECK(rep.p_value == 1.0);

  const FunctionalSeries c(Grid(4), Matrix::Constant(20, 4, 1.5));
  const auto cr = one_sample_test(c, HSOperator::zero(Grid(4), Grid(4)), fixed(2, 30, 5));
  CHECK(cr.statistic == 0.0);
  CHECK(std::all_of(cr.replicates.values.begin(), cr.replicates.values.end(), [](double v) { return v == 0.0; }));
  CHECK(cr.p_value == 1.0);

  CHECK_THROWS_AS(one_sample_test(x, HSOperator::zero(Grid(3), Grid(3)), fixed(3, 10, 1)), DimensionError);

  Matrix xd(4, 1);
  xd << 0.5, -1.0, 1.5, 2.5;
  const FunctionalSeries small(Grid(1), xd);
  const HSOperator v0(Grid(1), Grid(1), Matrix::Constant(1, 1, 0.4));
  const std::size_t B = 40000;
  const auto er = one_sample_test(small, v0, fixed(2, B, 6));
  const Matrix v_n = oracle::naive_covariance(xd);
  const double exact = exact_tail(2, 2, er.statistic, [&](const std::vector<std::size_t>& idx) {
    return 4.0 * oracle::hs2(oracle::naive_covariance(oracle::gather(xd, idx)) - v_n);
  });
  const double mc = er.p_value * (B + 1.0) - 1.0;
  CHECK(std::abs(mc - exact * B) <= 3.0 * std::sqrt(exact * (1.0 - exact) * B) + 1.0);
}

TEST_CASE("single block gives a degenerate but valid test") {
  std::mt19937_64 gen(8);
  const auto x = random_series(gen, 10, 3);
  const auto y = random_series(gen, 10, 3);
  const auto rep = cross_covariance_test(x, y, fixed(10, 25, 9));
  const auto& v = rep.replicates.values;
  CHECK(std::all_of(v.begin(), v.end(), [&](double r) { return r == v.front(); }));
  CHECK((rep.p_value == 1.0 || rep.p_value == doctest::Approx(1.0 / 26.0)));
}

TEST_CASE("changepoint test examples") {
  const FunctionalSeries c(Grid(3), Matrix::Constant(30, 3, 2.0));
  for (auto kind : {CusumKind::cs, CusumKind::ci}) {
    const auto rep = changepoint_test(c, kind, fixed(3, 40, 1));
    CHECK(rep.statistic == 0.0);
    CHECK(rep.p_value == 1.0);
    CHECK(rep.changepoint_estimate == 0);
  }

  std::mt19937_64 gen(9);
  Matrix d = oracle::random_matrix(gen, 60, 4);
  d.bottomRows(30) *= 4.0;
  const FunctionalSeries shifted(Grid(4), d);
  const auto [cs, ci] = changepoint_tests(shifted, fixed(3, 99, 2));
  CHECK(cs.kind == CusumKind::cs);
  CHECK(ci.kind == CusumKind::ci);
  CHECK(cs.statistic == doctest::Approx(cs_statistic(cusum_path(shifted))).epsilon(1e-12));
  CHECK(ci.statistic == doctest::Approx(ci_statistic(cusum_path(shifted))).epsilon(1e-12));
  CHECK(cs.changepoint_estimate < 60);
  CHECK(cs.changepoint_estimate >= 20);
  CHECK(cs.changepoint_estimate <= 40);
  CHECK(cs.rejected.at(0.05));
  CHECK(cs.bridge_norms.size() == 60);

  const auto single = changepoint_test(shifted, CusumKind::ci, fixed(3, 99, 2));
  CHECK(single.replicates.values == ci.replicates.values);
  CHECK_THROWS_AS(parse_cusum_kind("xx"), ConfigError);
}

TEST_CASE("adaptive block length is reported and tests are thread independent") {
  std::mt19937_64 gen(10);
  const auto x = random_series(gen, 50, 6);
  const auto y = random_series(gen, 50, 6);
  TestConfig cfg;
  cfg.B = 80;
  cfg.seed = 11;
  const auto rep = cross_covariance_test(x, y, cfg);
  CHECK(rep.block_length_used >= 1);
  CHECK(rep.block_length_used <= 25);
  CHECK(rep.block_length_used == resolve_block_length(cfg, centered_gram(x) + centered_gram(y)));

  auto many = cfg;
  many.threads = std::max(4u, std::thread::hardware_concurrency());
  CHECK(cross_covariance_test(x, y, many).replicates.values == rep.replicates.values);
  const auto a = changepoint_tests(x, cfg);
  const auto b = changepoint_tests(x, many);
  CHECK(a.first.replicates.values == b.first.replicates.values);
  CHECK(a.second.replicates.values == b.second.replicates.values);
}
