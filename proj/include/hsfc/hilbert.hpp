#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hsfc/radix.hpp"

namespace hsfc {

// Level-K dyadic subcube of [0,1]^d: prod_t [c_t, c_t + 1) * 2^-K.
struct LatticeCell {
  unsigned level = 0;
  std::vector<std::uint64_t> coords;

  unsigned dim() const noexcept { return static_cast<unsigned>(coords.size()); }
  bool operator==(const LatticeCell&) const = default;
};

// Position along the order-K curve, stored as K chunks of d bits, coarsest
// level first, so that any d*K fits. h = sum_l chunk[l] * 2^{d(K-1-l)}.
class HilbertIndex {
 public:
  HilbertIndex(unsigned dim, unsigned level, std::vector<std::uint64_t> chunks);
  static HilbertIndex from_integer(std::uint64_t h, unsigned dim, unsigned level);

  unsigned dim() const noexcept { return dim_; }
  unsigned level() const noexcept { return level_; }
  std::span<const std::uint64_t> chunks() const noexcept { return chunks_; }
  // Requires dim * level <= 64.
  std::uint64_t to_integer() const;

  bool operator==(const HilbertIndex&) const = default;

 private:
  unsigned dim_;
  unsigned level_;
  std::vector<std::uint64_t> chunks_;
};

constexpr unsigned kMaxHilbertDim = 32;
constexpr unsigned kMaxHilbertLevel = 62;

// The curve starts at the origin; for d = 2, level 1 visits
// (0,0) -> (0,1) -> (1,1) -> (1,0). d = 1 is the identity.
LatticeCell index_to_cell(const HilbertIndex& index);
HilbertIndex cell_to_index(const LatticeCell& cell);

// Hot-loop decoder: `chunks` as in HilbertIndex, writes d coordinates.
void decode_chunks(std::span<const std::uint64_t> chunks, unsigned dim,
                   std::span<std::uint64_t> coords) noexcept;

// Level-K cell containing H(x), read from the first d*K binary digits of x.
void cell_from_bits(std::span<const std::uint8_t> bits, unsigned dim, unsigned level,
                    std::span<std::uint64_t> coords) noexcept;

// H(x) at resolution 2^-K: lower corner of the level-K cell given by the first
// d*K binary digits of x, plus 2^-K * (u_1..u_d) with u_t drawn from
// `residual` (uniform on [0,1)). If x ~ Unif(J) for a level-K dyadic interval J
// the result is Unif(H(J)).
template <class Residual>
void map_point_into(std::span<const std::uint8_t> bits, unsigned dim, unsigned level,
                    Residual& residual, std::span<std::uint64_t> scratch,
                    std::span<double> out) {
  cell_from_bits(bits, dim, level, scratch);
  const double side = 1.0 / static_cast<double>(std::uint64_t{1} << level);
  for (unsigned t = 0; t < dim; ++t) {
    out[t] = (static_cast<double>(scratch[t]) + residual()) * side;
  }
}

// Checked wrappers. The DigitExpansion must be base 2 with at least d*K digits.
// The double overload reads min(d*K, 53) bits from x and draws any further bits
// uniformly from `residual` before mapping.
template <class Residual>
std::vector<double> map_point(const DigitExpansion& x, unsigned dim, unsigned level,
                              Residual&& residual);
template <class Residual>
std::vector<double> map_point(double x, unsigned dim, unsigned level, Residual&& residual);

// The i-th of n = b^m input intervals I_i = [(i-1)/n, i/n) and its image E_i.
struct Stratum {
  std::uint64_t index = 1;  // 1..n
  unsigned base = 2;
  unsigned m = 0;

  std::uint64_t count() const { return checked_power(base, m); }
};

// Smallest level whose cells resolve every stratum: max(ceil(m/d), 1).
unsigned geometry_level(unsigned dim, unsigned m);

// Level-K cells whose index h satisfies h / 2^{dK} in I_i, in curve order.
// Requires b = 2 (std::domain_error otherwise) and d*K >= m.
std::vector<LatticeCell> stratum_cells(const Stratum& stratum, unsigned dim, unsigned level);

// Euclidean diameter of the union of the stratum's cells, from cell corners.
double stratum_diameter(const Stratum& stratum, unsigned dim, unsigned level);
double cells_diameter(std::span<const LatticeCell> cells);

// 2 sqrt(d+3) n^{-1/d}: diameter bound for the image of an interval of length 1/n.
double stratum_diameter_bound(unsigned dim, double n);

// ---------------------------------------------------------------------------

namespace detail {
void check_map_args(unsigned dim, unsigned level);
}

template <class Residual>
std::vector<double> map_point(const DigitExpansion& x, unsigned dim, unsigned level,
                              Residual&& residual) {
  detail::check_map_args(dim, level);
  if (x.base() != 2) throw std::invalid_argument("map_point: expansion must be base 2");
  if (x.size() < static_cast<std::size_t>(dim) * level) {
    throw std::invalid_argument("map_point: expansion shorter than d*K digits");
  }
  std::vector<std::uint64_t> scratch(dim);
  std::vector<double> out(dim);
  map_point_into(x.digits(), dim, level, residual, std::span<std::uint64_t>(scratch),
                 std::span<double>(out));
  return out;
}

template <class Residual>
std::vector<double> map_point(double x, unsigned dim, unsigned level, Residual&& residual) {
  detail::check_map_args(dim, level);
  if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("map_point: x must lie in [0,1)");
  const std::size_t length = static_cast<std::size_t>(dim) * level;
  std::vector<std::uint8_t> bits(length);
  double rest = x;
  for (std::size_t j = 0; j < length; ++j) {
    if (j < 53) {
      rest *= 2.0;
      bits[j] = rest >= 1.0 ? 1 : 0;
      rest -= bits[j];
    } else {
      bits[j] = residual() < 0.5 ? 0 : 1;
    }
  }
  std::vector<std::uint64_t> scratch(dim);
  std::vector<double> out(dim);
  map_point_into(std::span<const std::uint8_t>(bits), dim, level, residual,
                 std::span<std::uint64_t>(scratch), std::span<double>(out));
  return out;
}

}  // namespace hsfc
