#include "hsfc/scramble.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hsfc/random.hpp"

namespace hsfc {

namespace {

constexpr std::uint64_t kDigitSalt = 0xd1b54a32d192ed03ULL;
constexpr std::uint64_t kPermutationSalt = 0x8cb92ba72f3d8dd7ULL;

// Fisher-Yates shuffle of {0..b-1} driven by a splitmix stream keyed by the node.
std::vector<std::uint8_t> draw_permutation(std::uint64_t key, unsigned base) {
  std::vector<std::uint8_t> perm(base);
  std::iota(perm.begin(), perm.end(), std::uint8_t{0});
  std::uint64_t state = key;
  for (unsigned k = base - 1; k > 0; --k) {
    state = mix64(state);
    const auto j = static_cast<unsigned>(
        (static_cast<unsigned __int128>(state) * (k + 1)) >> 64);
    std::swap(perm[k], perm[j]);
  }
  return perm;
}

void check_permutation(const std::vector<std::uint8_t>& perm, unsigned base) {
  if (perm.size() != base) throw std::invalid_argument("permutation has wrong size");
  std::vector<bool> seen(base, false);
  for (auto v : perm) {
    if (v >= base || seen[v]) throw std::invalid_argument("not a permutation of {0..b-1}");
    seen[v] = true;
  }
}

}  // namespace

std::string_view to_string(ScrambleKind kind) noexcept {
  return kind == ScrambleKind::nested ? "nested" : "linear";
}

ScrambleKind parse_scramble_kind(std::string_view text) {
  if (text == "nested") return ScrambleKind::nested;
  if (text == "linear") return ScrambleKind::linear;
  throw std::invalid_argument("unknown scramble kind '" + std::string(text) +
                              "' (expected nested or linear)");
}

// ---------------------------------------------------------------------------
// NestedScrambler

NestedScrambler::NestedScrambler(unsigned base, std::size_t depth, std::uint64_t seed)
    : base_(base), depth_(depth), seed_(seed), root_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {
  check_base(base);
}

// A node's hash mix64(key) both draws its permutation and, offset by the digit,
// keys its children, so each digit costs one mix64.
std::uint64_t NestedScrambler::child_key(std::uint64_t key, std::uint8_t digit) const noexcept {
  return mix64(key) + kDigitSalt * (static_cast<std::uint64_t>(digit) + 1);
}

std::uint8_t NestedScrambler::permute(std::uint64_t key, std::uint64_t hash, std::uint8_t digit) const {
  if (!pinned_.empty()) {
    if (auto it = pinned_.find(key); it != pinned_.end()) return it->second[digit];
  }
  if (base_ == 2) return static_cast<std::uint8_t>(digit ^ (hash >> 63));
  return draw_permutation(hash ^ kPermutationSalt, base_)[digit];
}

void NestedScrambler::set_permutation(std::span<const std::uint8_t> prefix,
                                      std::vector<std::uint8_t> permutation) {
  check_permutation(permutation, base_);
  std::uint64_t key = root_;
  for (auto digit : prefix) key = child_key(key, digit);
  pinned_[key] = std::move(permutation);
}

std::vector<std::uint8_t> NestedScrambler::permutation(std::span<const std::uint8_t> prefix) const {
  std::uint64_t key = root_;
  for (auto digit : prefix) key = child_key(key, digit);
  std::vector<std::uint8_t> perm(base_);
  const std::uint64_t hash = mix64(key);
  for (unsigned v = 0; v < base_; ++v) perm[v] = permute(key, hash, static_cast<std::uint8_t>(v));
  return perm;
}

void NestedScrambler::apply(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const {
  std::uint64_t key = root_;
  const std::size_t limit = uniform_tail_ ? in.size() : std::min(in.size(), depth_);
  for (std::size_t j = 0; j < limit; ++j) {
    const std::uint8_t original = in[j];
    // Below depth_ the node's permutation is applied; beyond it the image of a
    // uniform permutation is a uniform digit, which is what permute() yields for
    // an unpinned node.
    const std::uint64_t hash = mix64(key);
    out[j] = permute(key, hash, original);
    key = hash + kDigitSalt * (static_cast<std::uint64_t>(original) + 1);
  }
  for (std::size_t j = limit; j < in.size(); ++j) out[j] = in[j];
}

DigitExpansion NestedScrambler::apply(const DigitExpansion& digits) const {
  if (digits.base() != base_) {
    throw std::invalid_argument("nested_scramble: base mismatch (" + std::to_string(digits.base()) +
                                " vs " + std::to_string(base_) + ")");
  }
  if (digits.size() < depth_) {
    throw std::invalid_argument("nested_scramble: expansion shorter than scrambling depth");
  }
  DigitExpansion result(base_, digits.size());
  apply(digits.digits(), result.mutable_digits());
  return result;
}

// ---------------------------------------------------------------------------
// LinearScrambler

LinearScrambler::LinearScrambler(unsigned base, std::size_t depth, std::uint64_t seed)
    : base_(base), depth_(depth), seed_(seed), matrix_(depth * depth, 0), shift_(depth, 0) {
  check_base(base);
  UniformStream stream(seed);
  for (std::size_t row = 0; row < depth; ++row) {
    for (std::size_t column = 0; column < row; ++column) {
      matrix_[row * depth + column] = static_cast<std::uint8_t>(stream.below(base));
    }
    matrix_[row * depth + row] = static_cast<std::uint8_t>(1 + stream.below(base - 1));
    shift_[row] = static_cast<std::uint8_t>(stream.below(base));
  }
  pack_binary_rows();
}

LinearScrambler::LinearScrambler(unsigned base, std::vector<std::vector<std::uint8_t>> matrix,
                                 std::vector<std::uint8_t> shift, std::uint64_t seed)
    : base_(base), depth_(matrix.size()), seed_(seed), shift_(std::move(shift)) {
  check_base(base);
  if (shift_.size() != depth_) throw std::invalid_argument("LinearScrambler: shift length mismatch");
  matrix_.assign(depth_ * depth_, 0);
  for (std::size_t row = 0; row < depth_; ++row) {
    if (matrix[row].size() != depth_) throw std::invalid_argument("LinearScrambler: matrix not square");
    for (std::size_t column = 0; column < depth_; ++column) {
      const auto entry = matrix[row][column];
      if (entry >= base) throw std::invalid_argument("LinearScrambler: matrix entry out of range");
      if (column > row && entry != 0) {
        throw std::invalid_argument("LinearScrambler: matrix must be lower triangular");
      }
      if (column == row && entry == 0) {
        throw std::invalid_argument("LinearScrambler: diagonal entries must be non-zero");
      }
      matrix_[row * depth_ + column] = entry;
    }
    if (shift_[row] >= base) throw std::invalid_argument("LinearScrambler: shift entry out of range");
  }
  pack_binary_rows();
}

void LinearScrambler::pack_binary_rows() {
  if (base_ != 2) return;
  binary_words_ = (depth_ + 63) / 64;
  binary_rows_.assign(depth_ * binary_words_, 0);
  for (std::size_t row = 0; row < depth_; ++row) {
    for (std::size_t column = 0; column <= row; ++column) {
      if (matrix_[row * depth_ + column]) {
        binary_rows_[row * binary_words_ + column / 64] |= std::uint64_t{1} << (column % 64);
      }
    }
  }
}

void LinearScrambler::apply(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) const {
  const std::size_t head = std::min(depth_, in.size());
  if (!binary_rows_.empty()) {
    std::array<std::uint64_t, 8> packed{};
    std::vector<std::uint64_t> spill;
    std::uint64_t* bits = packed.data();
    if (binary_words_ > packed.size()) {
      spill.assign(binary_words_, 0);
      bits = spill.data();
    }
    for (std::size_t j = 0; j < head; ++j) bits[j / 64] |= static_cast<std::uint64_t>(in[j]) << (j % 64);
    for (std::size_t row = 0; row < head; ++row) {
      const std::uint64_t* mask = &binary_rows_[row * binary_words_];
      int parity = 0;
      for (std::size_t w = 0; w <= row / 64; ++w) parity ^= std::popcount(mask[w] & bits[w]);
      out[row] = static_cast<std::uint8_t>((parity & 1) ^ shift_[row]);
    }
  } else {
    for (std::size_t row = 0; row < head; ++row) {
      unsigned sum = shift_[row];
      const std::uint8_t* coefficients = &matrix_[row * depth_];
      for (std::size_t column = 0; column <= row; ++column) {
        sum = (sum + static_cast<unsigned>(coefficients[column]) * in[column]) % base_;
      }
      out[row] = static_cast<std::uint8_t>(sum);
    }
  }
  if (in.size() <= depth_) return;
  if (!uniform_tail_) {
    std::copy(in.begin() + depth_, in.end(), out.begin() + depth_);
    return;
  }
  // Tail: uniform digits keyed by the original digit prefix, so distinct inputs
  // receive independent tails and identical inputs identical ones.
  std::uint64_t key = mix64(seed_ ^ 0x2545f4914f6cdd1dULL);
  for (std::size_t j = 0; j < in.size(); ++j) {
    const std::uint64_t hash = mix64(key);
    if (j >= depth_) {
      out[j] = static_cast<std::uint8_t>((static_cast<unsigned __int128>(hash) * base_) >> 64);
    }
    key = hash + kDigitSalt * (static_cast<std::uint64_t>(in[j]) + 1);
  }
}

DigitExpansion LinearScrambler::apply(const DigitExpansion& digits) const {
  if (digits.base() != base_) {
    throw std::invalid_argument("linear_scramble: base mismatch (" + std::to_string(digits.base()) +
                                " vs " + std::to_string(base_) + ")");
  }
  DigitExpansion result(base_, digits.size());
  apply(digits.digits(), result.mutable_digits());
  return result;
}

DigitExpansion nested_scramble(const NestedScrambler& scrambler, const DigitExpansion& digits) {
  return scrambler.apply(digits);
}

DigitExpansion linear_scramble(const LinearScrambler& scrambler, const DigitExpansion& digits) {
  return scrambler.apply(digits);
}

std::vector<double> scrambled_vdc_batch(unsigned base, unsigned m, ScrambleKind kind,
                                        std::uint64_t seed) {
  check_base(base);
  const std::uint64_t n = checked_power(base, m);
  const std::size_t length = std::max<std::size_t>(m, double_digit_cap(base));
  std::vector<std::uint8_t> original(length);
  std::vector<std::uint8_t> scrambled(length);
  std::vector<double> points;
  points.reserve(n);
  if (kind == ScrambleKind::nested) {
    const NestedScrambler scrambler(base, length, seed);
    for (std::uint64_t i = 0; i < n; ++i) {
      fill_index_digits(i, base, original);
      scrambler.apply(original, scrambled);
      points.push_back(radical_inverse(scrambled, base));
    }
  } else {
    const LinearScrambler scrambler(base, length, seed);
    for (std::uint64_t i = 0; i < n; ++i) {
      fill_index_digits(i, base, original);
      scrambler.apply(original, scrambled);
      points.push_back(radical_inverse(scrambled, base));
    }
  }
  return points;
}

}  // namespace hsfc
