#include "hsfc/estimators.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "relative.hpp"
#include "hsfc/integrands.hpp"

using namespace hsfc;

namespace {

struct Moments {
  double mean;
  double variance;
};

Moments moments(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(v.size() - 1)};
}

EstimatorConfig config(Method method, Integrand f, std::uint64_t size, std::uint64_t seed,
                       ScrambleKind kind = ScrambleKind::nested) {
  EstimatorConfig c;
  c.method = method;
  c.integrand = std::move(f);
  c.size = size;
  c.seed = seed;
  c.scramble = kind;
  return c;
}

Integrand linear_1d(double slope) {
  Integrand f;
  f.name = "linear";
  f.dim = 1;
  f.evaluate = [slope](std::span<const double> x) { return slope * x[0]; };
  f.exact_mean = slope / 2;
  return f;
}

double log_slope(const std::vector<double>& log_n, const std::vector<double>& log_v) {
  const double k = static_cast<double>(log_n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sx += log_n[i];
    sy += log_v[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_v[i];
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

TEST_CASE("method names") {
  for (auto m : {Method::mc, Method::grid, Method::hsfc, Method::dnet}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("qmc"), std::invalid_argument);
}

TEST_CASE("constant integrands are integrated exactly") {
  auto c = make_constant(3, 2.5);
  CHECK(mc_estimate(c, 100, 1) == 2.5);
  CHECK(grid_estimate(c, 4, 1) == 2.5);
  GeneratorMatrices g(DirectionNumbersTable::bundled(), 3);
  for (auto kind : {ScrambleKind::nested, ScrambleKind::linear}) {
    CHECK(hsfc_estimate(c, 7, kind, 1) == 2.5);
    CHECK(dnet_estimate(c, g, 7, kind, 1) == 2.5);
  }
  auto set = replicate(config(Method::hsfc, make_constant(2, -1.0), 4, 9), 2);
  CHECK(set.estimates[0] == set.estimates[1]);
}

TEST_CASE("mc: indicator estimate and Bernoulli variance") {
  auto f = make_f3(2);
  CHECK(std::abs(mc_estimate(f, 10000, 3) - 0.5) <= 4 * 0.5 / 100.0);
  const std::uint64_t n = 256;
  auto set = replicate(config(Method::mc, f, n, 11), 2000);
  CHECK(moments(set.estimates).variance == relative(1.0 / (4.0 * n)).epsilon(0.15));
}

TEST_CASE("grid: variance limit for f1 and exact one-dimensional formula") {
  auto set = replicate(config(Method::grid, make_f1(2), 32, 21), 2000);
  const double n = 1024.0;
  CHECK(n * n * moments(set.estimates).variance == relative(2.0).epsilon(0.15));

  const double slope = 3.0;
  const std::uint64_t per_axis = 16;
  auto line = replicate(config(Method::grid, linear_1d(slope), per_axis, 5), 2000);
  const double expected = slope * slope / (12.0 * std::pow(static_cast<double>(per_axis), 3));
  CHECK(moments(line.estimates).variance == relative(expected).epsilon(0.10));
}

TEST_CASE("grid: points per axis overflow is rejected") {
  CHECK_THROWS_AS(grid_estimate(make_f1(8), 1 << 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(grid_estimate(make_f1(2), 0, 1), std::invalid_argument);
}

TEST_CASE("hsfc: variance between the closed-form bounds") {
  auto f = make_f1(2);
  for (unsigned m = 6; m <= 12; ++m) {
    auto set = replicate(config(Method::hsfc, f, m, 100 + m), 200);
    const double v = moments(set.estimates).variance;
    const auto bounds = variance_bounds(f, std::uint64_t{1} << m);
    CHECK_MESSAGE(v >= bounds.lower, "m=" << m);
    CHECK_MESSAGE(v <= bounds.upper, "m=" << m);
  }
}

TEST_CASE("hsfc: one stratum per level-1 subcube equals grid stratification") {
  // d=8, m=8: each stratum is a single level-1 cell, so the variance is
  // (1 - (3/4)^8) / 256 for f1.
  auto set = replicate(config(Method::hsfc, make_f1(8), 8, 31), 2000);
  const double expected = (1.0 - std::pow(0.75, 8)) / 256.0;
  CHECK(moments(set.estimates).variance == relative(expected).epsilon(0.1));
}

TEST_CASE("hsfc: explicit curve level and validation") {
  auto f = make_f3(2);
  CHECK(sampling_level(2, 14) == 15);
  CHECK(sampling_level(8, 14) == 10);
  CHECK_NOTHROW(hsfc_estimate(f, 6, ScrambleKind::nested, 1, 3));
  CHECK_THROWS_AS(hsfc_estimate(f, 6, ScrambleKind::nested, 1, 2), std::invalid_argument);
  auto c = config(Method::hsfc, f, 6, 1);
  c.level = 2;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.level = 63;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  auto big = config(Method::hsfc, make_f1(33), 4, 1);
  CHECK_THROWS_AS(validate(big), std::invalid_argument);
  auto dnet = config(Method::dnet, make_f1(17), 4, 1);
  CHECK_THROWS_AS(validate(dnet), std::invalid_argument);
}

TEST_CASE("unbiasedness: every method and integrand, d=2") {
  struct Case {
    Method method;
    ScrambleKind kind;
    std::uint64_t size;
  };
  const std::vector<Case> cases{{Method::mc, ScrambleKind::nested, 256},
                                {Method::grid, ScrambleKind::nested, 16},
                                {Method::hsfc, ScrambleKind::nested, 8},
                                {Method::hsfc, ScrambleKind::linear, 8},
                                {Method::dnet, ScrambleKind::nested, 8},
                                {Method::dnet, ScrambleKind::linear, 8}};
  std::uint64_t seed = 1000;
  for (const auto& c : cases) {
    for (auto f : {make_f1(2), make_f2(2), make_f3(2)}) {
      auto set = replicate(config(c.method, f, c.size, seed++, c.kind), 2000);
      const auto mo = moments(set.estimates);
      CHECK_MESSAGE(std::abs(mo.mean - *f.exact_mean) <= 4 * std::sqrt(mo.variance / 2000.0),
                    to_string(c.method) << "/" << to_string(c.kind) << " " << f.name);
    }
  }
}

TEST_CASE("stratified methods beat plain Monte Carlo on f1") {
  auto f = make_f1(2);
  const auto mc = moments(replicate(config(Method::mc, f, 1024, 7), 500).estimates).variance;
  const auto grid = moments(replicate(config(Method::grid, f, 32, 7), 500).estimates).variance;
  const auto hsfc = moments(replicate(config(Method::hsfc, f, 10, 7), 500).estimates).variance;
  const auto dnet = moments(replicate(config(Method::dnet, f, 10, 7), 500).estimates).variance;
  CHECK(grid < mc);
  CHECK(hsfc < mc);
  CHECK(dnet < mc);
}

TEST_CASE("hsfc: variance decays like n^-2 in two dimensions") {
  auto f = make_f1(2);
  std::vector<double> log_n, log_v;
  for (unsigned m = 6; m <= 14; ++m) {
    auto set = replicate(config(Method::hsfc, f, m, 500 + m), 200);
    log_n.push_back(m * std::log(2.0));
    log_v.push_back(std::log(moments(set.estimates).variance));
  }
  CHECK(std::abs(log_slope(log_n, log_v) + 2.0) <= 0.15);
}

TEST_CASE("replicate: determinism, seeds and parallel invariance") {
  auto c = config(Method::hsfc, make_f2(2), 6, 77);
  auto a = replicate(c, 50);
  auto b = replicate(c, 50);
  CHECK(a.estimates == b.estimates);
  CHECK(a.seeds == b.seeds);
  CHECK(std::set<std::uint64_t>(a.seeds.begin(), a.seeds.end()).size() == a.seeds.size());
  c.jobs = 3;
  CHECK(replicate(c, 50).estimates == a.estimates);
  c.seed = 78;
  CHECK(replicate(c, 50).estimates != a.estimates);
  CHECK(a.seeds[4] == replication_seed(77, 4));
  CHECK(a.estimates[4] == estimate(a.config, a.seeds[4]));
  CHECK_THROWS_AS(replicate(c, 1), std::invalid_argument);
  auto bad = config(Method::mc, make_f1(2), 0, 1);
  CHECK_THROWS_AS(replicate(bad, 10), std::invalid_argument);
}

TEST_CASE("replicate: worker errors propagate") {
  auto f = make_f1(2);
  f.evaluate = [](std::span<const double>) -> double { throw std::runtime_error("boom"); };
  auto c = config(Method::mc, f, 4, 1);
  c.jobs = 2;
  CHECK_THROWS_AS(replicate(c, 8), std::runtime_error);
}
