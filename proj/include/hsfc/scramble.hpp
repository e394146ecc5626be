#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hsfc/radix.hpp"

namespace hsfc {

enum class ScrambleKind { nested, linear };

std::string_view to_string(ScrambleKind kind) noexcept;
ScrambleKind parse_scramble_kind(std::string_view text);

// Nested uniform (Owen) scrambling of base-b digit expansions.
//
// Digit j is mapped by a uniform random permutation of {0..b-1} chosen by the
// ORIGINAL leading digits a_1..a_{j-1}. The permutation tree is never
// materialised: every prefix is identified by a 64-bit hash chained over its
// digits, and its permutation is drawn from a generator seeded by that hash.
// The tree is therefore lazily defined, identical on every call, and costs no
// memory. Explicitly pinned permutations (set_permutation) take precedence.
//
// Digits at depth >= depth() are uniform-tail completed: each is replaced by an
// independent uniform digit drawn from the same hash chain. This can be
// switched off, in which case they are copied through unchanged.
class NestedScrambler {
 public:
  NestedScrambler(unsigned base, std::size_t depth, std::uint64_t seed);

  unsigned base() const noexcept { return base_; }
  std::size_t depth() const noexcept { return depth_; }
  std::uint64_t seed() const noexcept { return seed_; }

  void set_uniform_tail(bool enabled) noexcept { uniform_tail_ = enabled; }
  bool uniform_tail() const noexcept { return uniform_tail_; }

  // Pins the permutation applied to the digit that follows `prefix`.
  void set_permutation(std::span<const std::uint8_t> prefix, std::vector<std::uint8_t> permutation);

  // Permutation applied to the digit that follows `prefix` (length < depth).
  std::vector<std::uint8_t> permutation(std::span<const std::uint8_t> prefix) const;

  // Requires digits.base() == base() and digits.size() >= depth().
  DigitExpansion apply(const DigitExpansion& digits) const;

  // Hot-loop variant; `in` and `out` have equal length >= depth() and may alias.
  void apply(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const;

 private:
  std::uint64_t child_key(std::uint64_t key, std::uint8_t digit) const noexcept;
  std::uint8_t permute(std::uint64_t key, std::uint64_t hash, std::uint8_t digit) const;

  unsigned base_;
  std::size_t depth_;
  std::uint64_t seed_;
  std::uint64_t root_;
  bool uniform_tail_ = true;
  std::unordered_map<std::uint64_t, std::vector<std::uint8_t>> pinned_;
};

// Random linear (Matousek) scrambling: y = C a + e (mod b) on the first depth()
// digits, with C lower triangular with non-zero diagonal and e a digital shift.
// Tail digits are uniform-completed as for NestedScrambler.
class LinearScrambler {
 public:
  // Random matrix and shift drawn from `seed`.
  LinearScrambler(unsigned base, std::size_t depth, std::uint64_t seed);
  // Explicit matrix (rows of length depth) and shift; validated.
  LinearScrambler(unsigned base, std::vector<std::vector<std::uint8_t>> matrix,
                  std::vector<std::uint8_t> shift, std::uint64_t seed = 0);

  unsigned base() const noexcept { return base_; }
  std::size_t depth() const noexcept { return depth_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint8_t matrix(std::size_t row, std::size_t column) const {
    return matrix_[row * depth_ + column];
  }
  std::uint8_t shift(std::size_t row) const { return shift_[row]; }

  void set_uniform_tail(bool enabled) noexcept { uniform_tail_ = enabled; }

  DigitExpansion apply(const DigitExpansion& digits) const;
  // `in` and `out` must not alias.
  void apply(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const;

 private:
  void pack_binary_rows();

  unsigned base_;
  std::size_t depth_;
  std::uint64_t seed_;
  std::vector<std::uint8_t> matrix_;  // row-major depth x depth, lower triangular
  std::vector<std::uint8_t> shift_;
  std::vector<std::uint64_t> binary_rows_;  // base 2: row j as a bit mask of binary_words_ words
  std::size_t binary_words_ = 0;
  bool uniform_tail_ = true;
};

DigitExpansion nested_scramble(const NestedScrambler& scrambler, const DigitExpansion& digits);
DigitExpansion linear_scramble(const LinearScrambler& scrambler, const DigitExpansion& digits);

// The first n = b^m scrambled van der Corput points x_1..x_n. Exactly one point
// falls in every interval [(k-1)/n, k/n).
std::vector<double> scrambled_vdc_batch(unsigned base, unsigned m, ScrambleKind kind,
                                        std::uint64_t seed);

}  // namespace hsfc
