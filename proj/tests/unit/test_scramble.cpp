#include "hsfc/scramble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hsfc/random.hpp"

using namespace hsfc;

namespace {

// Exact stratum occupancy: floor(n * x) over a batch, sorted, must be 0..n-1.
bool one_point_per_stratum(const std::vector<double>& points) {
  const auto n = points.size();
  std::vector<std::uint64_t> cells;
  cells.reserve(n);
  for (double x : points) cells.push_back(static_cast<std::uint64_t>(std::floor(x * static_cast<double>(n))));
  std::sort(cells.begin(), cells.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (cells[k] != k) return false;
  }
  return true;
}

double ks_uniform(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double r = static_cast<double>(values.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    worst = std::max({worst, (k + 1) / r - values[k], values[k] - k / r});
  }
  return worst;
}

void pin_all(NestedScrambler& s, std::vector<std::uint8_t>& prefix, std::size_t depth,
             const std::vector<std::uint8_t>& perm) {
  s.set_permutation(prefix, perm);
  if (prefix.size() + 1 >= depth) return;
  for (unsigned v = 0; v < s.base(); ++v) {
    prefix.push_back(static_cast<std::uint8_t>(v));
    pin_all(s, prefix, depth, perm);
    prefix.pop_back();
  }
}

}  // namespace

TEST_CASE("nested: identity permutations without tail reproduce the input") {
  NestedScrambler s(3, 3, 42);
  s.set_uniform_tail(false);
  std::vector<std::uint8_t> prefix;
  pin_all(s, prefix, 3, {0, 1, 2});
  for (std::uint64_t i = 1; i <= 27; ++i) {
    auto digits = index_digits(i, 3, 5);
    CHECK(nested_scramble(s, digits) == digits);
  }
}

TEST_CASE("nested: a single transposition at the root flips the leading digit") {
  NestedScrambler s(2, 1, 7);
  s.set_permutation({}, {1, 0});
  auto out = nested_scramble(s, DigitExpansion(2, {0, 0, 0, 0}));
  CHECK(out[0] == 1);
  CHECK(s.permutation({}) == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("nested: drawn permutations are bijections and stable") {
  for (unsigned base : {2U, 3U, 5U, 7U}) {
    NestedScrambler s(base, 4, 99);
    for (std::uint8_t a = 0; a < base; ++a) {
      const std::vector<std::uint8_t> prefix{a, 0};
      auto perm = s.permutation(prefix);
      auto sorted = perm;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::uint8_t> expected(base);
      std::iota(expected.begin(), expected.end(), std::uint8_t{0});
      CHECK(sorted == expected);
      CHECK(s.permutation(prefix) == perm);
    }
  }
}

TEST_CASE("nested: b=2, m=4 stratification over 64 seeds") {
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    NestedScrambler s(2, 8, seed);
    std::vector<bool> hit(16, false);
    for (std::uint64_t i = 1; i <= 16; ++i) {
      auto x = nested_scramble(s, index_digits(i, 2, 8));
      hit[leading_digits_value(x.digits(), 2, 4)] = true;
    }
    CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("nested: permutation keyed by the original prefix") {
  // Two inputs sharing the original first digit use the same second-level permutation.
  NestedScrambler s(2, 4, 5);
  s.set_permutation(std::vector<std::uint8_t>{0}, {1, 0});
  s.set_permutation(std::vector<std::uint8_t>{1}, {0, 1});
  s.set_permutation({}, {1, 0});
  auto a = nested_scramble(s, DigitExpansion(2, {0, 0, 0, 0}));
  auto b = nested_scramble(s, DigitExpansion(2, {1, 0, 0, 0}));
  CHECK(a[0] == 1);
  CHECK(a[1] == 1);  // keyed by original 0 (not scrambled 1)
  CHECK(b[0] == 0);
  CHECK(b[1] == 0);
}

TEST_CASE("nested: errors") {
  NestedScrambler s(2, 4, 1);
  CHECK_THROWS_AS(nested_scramble(s, DigitExpansion(3, 4)), std::invalid_argument);
  CHECK_THROWS_AS(nested_scramble(s, DigitExpansion(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(s.set_permutation({}, {0, 0}), std::invalid_argument);
}

TEST_CASE("linear: identity matrix and zero shift reproduce the input") {
  std::vector<std::vector<std::uint8_t>> identity(4, std::vector<std::uint8_t>(4, 0));
  for (int k = 0; k < 4; ++k) identity[k][k] = 1;
  LinearScrambler s(2, identity, {0, 0, 0, 0});
  s.set_uniform_tail(false);
  for (std::uint64_t i = 1; i <= 16; ++i) {
    auto digits = index_digits(i, 2, 6);
    CHECK(linear_scramble(s, digits) == digits);
  }
  LinearScrambler flip(2, identity, {1, 0, 0, 0});
  auto out = linear_scramble(flip, DigitExpansion(2, {0, 1, 1, 0}));
  CHECK(out == DigitExpansion(2, {1, 1, 1, 0}));
}

TEST_CASE("linear: generic base arithmetic") {
  // y = C a + e mod 3 with C = [[2,0],[1,1]], e = [1,2].
  LinearScrambler s(3, {{2, 0}, {1, 1}}, {1, 2});
  auto out = linear_scramble(s, DigitExpansion(3, {2, 1}));
  CHECK(out[0] == (2 * 2 + 1) % 3);
  CHECK(out[1] == (1 * 2 + 1 * 1 + 2) % 3);
}

TEST_CASE("linear: random matrices are lower triangular with non-zero diagonal") {
  for (unsigned base : {2U, 3U, 5U}) {
    LinearScrambler s(base, 10, 17);
    for (std::size_t r = 0; r < 10; ++r) {
      CHECK(s.matrix(r, r) != 0);
      for (std::size_t c = r + 1; c < 10; ++c) CHECK(s.matrix(r, c) == 0);
    }
  }
}

TEST_CASE("linear: validation") {
  CHECK_THROWS_AS(LinearScrambler(2, {{1, 1}, {0, 1}}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(LinearScrambler(2, {{0, 0}, {0, 1}}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(LinearScrambler(2, {{1, 0}, {0, 1}}, {0}), std::invalid_argument);
  LinearScrambler s(2, 4, 1);
  CHECK_THROWS_AS(linear_scramble(s, DigitExpansion(3, 4)), std::invalid_argument);
}

TEST_CASE("linear: b=2, m=4 stratification over 64 random scramblers") {
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    LinearScrambler s(2, 8, seed);
    std::vector<bool> hit(16, false);
    for (std::uint64_t i = 1; i <= 16; ++i) {
      auto x = linear_scramble(s, index_digits(i, 2, 8));
      hit[leading_digits_value(x.digits(), 2, 4)] = true;
    }
    CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("batch: m=0 gives a single point") {
  auto points = scrambled_vdc_batch(2, 0, ScrambleKind::nested, 3);
  REQUIRE(points.size() == 1);
  CHECK(points[0] >= 0.0);
  CHECK(points[0] < 1.0);
}

TEST_CASE("batch: stratification exactness, both kinds, m <= 12") {
  for (auto kind : {ScrambleKind::nested, ScrambleKind::linear}) {
    for (unsigned m = 0; m <= 12; ++m) {
      for (std::uint64_t seed : {1ULL, 2ULL, 0xdeadbeefULL}) {
        INFO("kind " << to_string(kind) << " m " << m);
        CHECK(one_point_per_stratum(scrambled_vdc_batch(2, m, kind, seed)));
      }
    }
  }
}

TEST_CASE("batch: base 3 and 5 stratification on exact digits") {
  for (unsigned base : {3U, 5U}) {
    for (auto kind : {ScrambleKind::nested, ScrambleKind::linear}) {
      const unsigned m = base == 3 ? 6 : 4;
      const std::uint64_t n = checked_power(base, m);
      std::vector<bool> hit(n, false);
      std::vector<std::uint8_t> in(12), out(12);
      NestedScrambler nested(base, 12, 11);
      LinearScrambler linear(base, 12, 11);
      for (std::uint64_t i = 0; i < n; ++i) {
        fill_index_digits(i, base, in);
        if (kind == ScrambleKind::nested) {
          nested.apply(in, out);
        } else {
          linear.apply(in, out);
        }
        hit[leading_digits_value(out, base, m)] = true;
      }
      CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    }
  }
}

TEST_CASE("batch: per-stratum occupancy at m=8") {
  auto points = scrambled_vdc_batch(2, 8, ScrambleKind::nested, 12345);
  std::vector<int> count(256, 0);
  for (double x : points) ++count[static_cast<std::size_t>(x * 256)];
  CHECK(std::all_of(count.begin(), count.end(), [](int c) { return c == 1; }));
}

TEST_CASE("batch: reproducibility") {
  for (auto kind : {ScrambleKind::nested, ScrambleKind::linear}) {
    CHECK(scrambled_vdc_batch(2, 10, kind, 77) == scrambled_vdc_batch(2, 10, kind, 77));
    CHECK(scrambled_vdc_batch(2, 10, kind, 77) != scrambled_vdc_batch(2, 10, kind, 78));
  }
}

TEST_CASE("batch: x_1 frequencies over 4000 seeds (chi-square and per-bin)") {
  constexpr int R = 4000;
  std::vector<int> bins(16, 0);
  for (int seed = 0; seed < R; ++seed) {
    auto x = scrambled_vdc_batch(2, 4, ScrambleKind::nested, derive_seed(2024, seed));
    ++bins[static_cast<std::size_t>(x[0] * 16)];
  }
  const double p = 1.0 / 16;
  const double se = std::sqrt(p * (1 - p) / R);
  double chi2 = 0.0;
  for (int c : bins) {
    const double freq = static_cast<double>(c) / R;
    CHECK(std::abs(freq - p) <= 3 * se);
    chi2 += (c - R * p) * (c - R * p) / (R * p);
  }
  CHECK(chi2 < 37.70);  // chi-square(15) 0.999 quantile
}

TEST_CASE("uniformity of a fixed point across seeds (KS < 0.03)") {
  constexpr int R = 4000;
  for (auto kind : {ScrambleKind::nested, ScrambleKind::linear}) {
    for (std::size_t i : {0UL, 5UL, 63UL}) {
      std::vector<double> values;
      for (int seed = 0; seed < R; ++seed) {
        values.push_back(scrambled_vdc_batch(2, 6, kind, derive_seed(7, seed))[i]);
      }
      INFO("kind " << to_string(kind) << " i " << i);
      CHECK(ks_uniform(values) < 0.03);
    }
  }
}

TEST_CASE("nested: within-stratum offsets of distinct points are uncorrelated") {
  constexpr int R = 4000;
  const double n = 64;
  std::vector<double> a, b;
  for (int seed = 0; seed < R; ++seed) {
    auto x = scrambled_vdc_batch(2, 6, ScrambleKind::nested, derive_seed(99, seed));
    a.push_back(x[3] * n - std::floor(x[3] * n));
    b.push_back(x[40] * n - std::floor(x[40] * n));
  }
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / R;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / R;
  double sab = 0, saa = 0, sbb = 0;
  for (int k = 0; k < R; ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 3.0 / std::sqrt(static_cast<double>(R)));
}

TEST_CASE("scramble kind parsing") {
  CHECK(parse_scramble_kind("nested") == ScrambleKind::nested);
  CHECK(parse_scramble_kind("linear") == ScrambleKind::linear);
  CHECK_THROWS_AS(parse_scramble_kind("owen"), std::invalid_argument);
}

TEST_CASE("linear: deep binary scrambler matches the matrix product") {
  const std::size_t depth = 130;
  LinearScrambler s(2, depth, 77);
  UniformStream u(3);
  std::vector<std::uint8_t> in(depth + 5), out(depth + 5);
  for (int trial = 0; trial < 20; ++trial) {
    for (auto& a : in) a = static_cast<std::uint8_t>(u.below(2));
    s.apply(in, out);
    for (std::size_t r = 0; r < depth; ++r) {
      unsigned sum = s.shift(r);
      for (std::size_t c = 0; c <= r; ++c) sum += s.matrix(r, c) * in[c];
      CHECK(out[r] == sum % 2);
    }
  }
}
