#include "hsfc/hilbert.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hsfc {

// Top-down Hilbert state machine (entry corner e, principal direction d) in the
// formulation of Hamilton's compact Hilbert indices, itself a restatement of
// Butz. Each level transforms one d-bit Gray-code chunk by the current
// orientation and then updates the orientation, so the first K-1 chunks of a
// level-K index always decode to the level-(K-1) parent cell.
namespace {

struct Orientation {
  std::uint64_t entry = 0;
  unsigned direction = 0;
};

inline std::uint64_t low_mask(unsigned n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Rotations within n bits; callers pass r in [0, n].
inline std::uint64_t rotl(std::uint64_t x, unsigned r, unsigned n) {
  if (r >= n) r -= n;
  if (r == 0) return x;
  return ((x << r) | (x >> (n - r))) & low_mask(n);
}

inline std::uint64_t rotr(std::uint64_t x, unsigned r, unsigned n) {
  if (r >= n) r -= n;
  if (r == 0) return x;
  return ((x >> r) | (x << (n - r))) & low_mask(n);
}

inline std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

inline std::uint64_t gray_inverse(std::uint64_t g, unsigned n) {
  std::uint64_t i = g;
  for (unsigned shift = 1; shift < n; shift <<= 1) i ^= i >> shift;
  return i;
}

// Entry corner of sub-cell w.
inline std::uint64_t entry_of(std::uint64_t w) {
  return w == 0 ? 0 : gray(2 * ((w - 1) / 2));
}

// Intra-cell direction of sub-cell w.
inline unsigned direction_of(std::uint64_t w, unsigned n) {
  if (w == 0) return 0;
  const auto trailing_ones = [](std::uint64_t v) { return static_cast<unsigned>(std::countr_one(v)); };
  // At most n, reached only by w = 2^n - 1.
  const unsigned ones = w % 2 == 0 ? trailing_ones(w - 1) : trailing_ones(w);
  return ones >= n ? ones - n : ones;
}

inline void advance(Orientation& o, std::uint64_t w, unsigned n) {
  o.entry ^= rotl(entry_of(w), o.direction + 1, n);
  o.direction += direction_of(w, n) + 1;
  if (o.direction >= n) o.direction -= n;
}

void check_dim_level(unsigned dim, unsigned level) {
  if (dim == 0 || dim > kMaxHilbertDim) {
    throw std::invalid_argument("Hilbert dimension must be in [1, " +
                                std::to_string(kMaxHilbertDim) + "], got " + std::to_string(dim));
  }
  if (level > kMaxHilbertLevel) {
    throw std::invalid_argument("Hilbert level must be <= " + std::to_string(kMaxHilbertLevel));
  }
}

}  // namespace

namespace detail {
void check_map_args(unsigned dim, unsigned level) {
  check_dim_level(dim, level);
  if (level == 0) throw std::invalid_argument("map_point: level must be >= 1");
}
}  // namespace detail

HilbertIndex::HilbertIndex(unsigned dim, unsigned level, std::vector<std::uint64_t> chunks)
    : dim_(dim), level_(level), chunks_(std::move(chunks)) {
  check_dim_level(dim, level);
  if (chunks_.size() != level) throw std::invalid_argument("HilbertIndex: need one chunk per level");
  for (auto c : chunks_) {
    if (c > low_mask(dim)) throw std::invalid_argument("HilbertIndex: chunk exceeds d bits");
  }
}

HilbertIndex HilbertIndex::from_integer(std::uint64_t h, unsigned dim, unsigned level) {
  check_dim_level(dim, level);
  const unsigned total = dim * level;
  if (total > 64) throw std::invalid_argument("HilbertIndex::from_integer: d*K exceeds 64 bits");
  if (total < 64 && (h >> total) != 0) throw std::out_of_range("HilbertIndex: h >= 2^{dK}");
  std::vector<std::uint64_t> chunks(level);
  for (unsigned l = 0; l < level; ++l) {
    chunks[l] = (h >> (dim * (level - 1 - l))) & low_mask(dim);
  }
  return HilbertIndex(dim, level, std::move(chunks));
}

std::uint64_t HilbertIndex::to_integer() const {
  if (dim_ * level_ > 64) throw std::overflow_error("HilbertIndex::to_integer: d*K exceeds 64 bits");
  std::uint64_t h = 0;
  for (auto c : chunks_) h = dim_ == 64 ? c : (h << dim_) | c;
  return h;
}

void decode_chunks(std::span<const std::uint64_t> chunks, unsigned dim,
                   std::span<std::uint64_t> coords) noexcept {
  const auto level = static_cast<unsigned>(chunks.size());
  for (unsigned t = 0; t < dim; ++t) coords[t] = 0;
  Orientation o;
  for (unsigned l = 0; l < level; ++l) {
    const std::uint64_t w = chunks[l];
    const std::uint64_t bits = rotl(gray(w), o.direction + 1, dim) ^ o.entry;
    const unsigned shift = level - 1 - l;
    for (unsigned t = 0; t < dim; ++t) coords[t] |= ((bits >> t) & 1U) << shift;
    advance(o, w, dim);
  }
}

void cell_from_bits(std::span<const std::uint8_t> bits, unsigned dim, unsigned level,
                    std::span<std::uint64_t> coords) noexcept {
  for (unsigned t = 0; t < dim; ++t) coords[t] = 0;
  Orientation o;
  std::size_t position = 0;
  for (unsigned l = 0; l < level; ++l) {
    std::uint64_t w = 0;
    for (unsigned k = 0; k < dim; ++k) w = (w << 1) | bits[position++];
    const std::uint64_t corner = rotl(gray(w), o.direction + 1, dim) ^ o.entry;
    const unsigned shift = level - 1 - l;
    for (unsigned t = 0; t < dim; ++t) coords[t] |= ((corner >> t) & 1U) << shift;
    advance(o, w, dim);
  }
}

LatticeCell index_to_cell(const HilbertIndex& index) {
  LatticeCell cell{index.level(), std::vector<std::uint64_t>(index.dim())};
  decode_chunks(index.chunks(), index.dim(), cell.coords);
  return cell;
}

HilbertIndex cell_to_index(const LatticeCell& cell) {
  const unsigned dim = cell.dim();
  check_dim_level(dim, cell.level);
  for (auto c : cell.coords) {
    if (cell.level < 64 && (c >> cell.level) != 0) {
      throw std::out_of_range("cell_to_index: coordinate outside [0, 2^K)");
    }
  }
  std::vector<std::uint64_t> chunks(cell.level);
  Orientation o;
  for (unsigned l = 0; l < cell.level; ++l) {
    const unsigned shift = cell.level - 1 - l;
    std::uint64_t corner = 0;
    for (unsigned t = 0; t < dim; ++t) corner |= ((cell.coords[t] >> shift) & 1U) << t;
    const std::uint64_t w = gray_inverse(rotr(corner ^ o.entry, o.direction + 1, dim), dim);
    chunks[l] = w;
    advance(o, w, dim);
  }
  return HilbertIndex(dim, cell.level, std::move(chunks));
}

unsigned geometry_level(unsigned dim, unsigned m) {
  if (dim == 0) throw std::invalid_argument("geometry_level: dimension must be >= 1");
  return std::max(1U, (m + dim - 1) / dim);
}

std::vector<LatticeCell> stratum_cells(const Stratum& stratum, unsigned dim, unsigned level) {
  if (stratum.base != 2) {
    throw std::domain_error("stratum_cells: Hilbert strata need base 2, got base " +
                            std::to_string(stratum.base));
  }
  check_dim_level(dim, level);
  const unsigned total = dim * level;
  if (total < stratum.m) throw std::invalid_argument("stratum_cells: need d*K >= m");
  if (total > 62) throw std::invalid_argument("stratum_cells: d*K too large to enumerate");
  const std::uint64_t n = stratum.count();
  if (stratum.index == 0 || stratum.index > n) throw std::out_of_range("stratum index outside 1..n");
  const std::uint64_t per_stratum = std::uint64_t{1} << (total - stratum.m);
  std::vector<LatticeCell> cells;
  cells.reserve(per_stratum);
  const std::uint64_t first = (stratum.index - 1) * per_stratum;
  for (std::uint64_t h = first; h < first + per_stratum; ++h) {
    cells.push_back(index_to_cell(HilbertIndex::from_integer(h, dim, level)));
  }
  return cells;
}

double cells_diameter(std::span<const LatticeCell> cells) {
  if (cells.empty()) return 0.0;
  // Farthest points of two axis-aligned unit cubes are corners; per axis the
  // largest gap is max(|hi_a - lo_b|, |hi_b - lo_a|) = |c_a - c_b| + 1.
  std::uint64_t best = 0;
  const unsigned dim = cells.front().dim();
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a; b < cells.size(); ++b) {
      std::uint64_t squared = 0;
      for (unsigned t = 0; t < dim; ++t) {
        const auto ca = cells[a].coords[t];
        const auto cb = cells[b].coords[t];
        const std::uint64_t gap = (ca > cb ? ca - cb : cb - ca) + 1;
        squared += gap * gap;
      }
      best = std::max(best, squared);
    }
  }
  return std::sqrt(static_cast<double>(best)) / static_cast<double>(std::uint64_t{1} << cells.front().level);
}

double stratum_diameter(const Stratum& stratum, unsigned dim, unsigned level) {
  return cells_diameter(stratum_cells(stratum, dim, level));
}

double stratum_diameter_bound(unsigned dim, double n) {
  return 2.0 * std::sqrt(dim + 3.0) * std::pow(n, -1.0 / dim);
}

}  // namespace hsfc
