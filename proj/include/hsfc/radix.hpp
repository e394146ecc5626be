#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hsfc {

// Fixed-length base-b digit vector, most significant first. Read as a point,
// digit j (0-based) carries weight b^-(j+1).
class DigitExpansion {
 public:
  DigitExpansion(unsigned base, std::size_t length);
  DigitExpansion(unsigned base, std::vector<std::uint8_t> digits);

  unsigned base() const noexcept { return base_; }
  std::size_t size() const noexcept { return digits_.size(); }
  std::uint8_t operator[](std::size_t j) const { return digits_[j]; }
  std::span<const std::uint8_t> digits() const noexcept { return digits_; }
  std::span<std::uint8_t> mutable_digits() noexcept { return digits_; }

  void set(std::size_t j, unsigned digit);

  bool operator==(const DigitExpansion&) const = default;

 private:
  unsigned base_;
  std::vector<std::uint8_t> digits_;
};

void check_base(unsigned base);

// Number of base-b digits used when converting to a double: the largest L with
// b^L <= 2^53 (53 for b = 2).
std::size_t double_digit_cap(unsigned base);

// Digits of i-1 in base b, least significant digit first, i.e. the van der
// Corput digits a_{i1..iL} of index i >= 1. Throws std::overflow_error if
// i-1 >= b^L.
DigitExpansion index_digits(std::uint64_t i, unsigned base, std::size_t length);

// Allocation-free variant for hot loops: writes the digits of `value` (= i-1)
// into `out`; digits that do not fit are silently dropped.
void fill_index_digits(std::uint64_t value, unsigned base, std::span<std::uint8_t> out) noexcept;

// sum_j digits_j * b^-(j+1), truncated to double_digit_cap(b) digits and
// rounded upward to the next double, so floor(b^m * x) is exact.
double radical_inverse(const DigitExpansion& digits);
double radical_inverse(std::span<const std::uint8_t> digits, unsigned base) noexcept;

// Exact integer value of the leading m digits, i.e. floor(b^m * x) for the
// point x the digits represent. Requires b^m < 2^64.
std::uint64_t leading_digits_value(std::span<const std::uint8_t> digits, unsigned base,
                                   std::size_t m);

// i-th point (i >= 1) of the van der Corput sequence in base b.
double vdc_point(std::uint64_t i, unsigned base);

// b^m with overflow check.
std::uint64_t checked_power(unsigned base, unsigned exponent);

}  // namespace hsfc
