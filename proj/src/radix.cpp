#include "hsfc/radix.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hsfc {

void check_base(unsigned base) {
  if (base < 2 || base > 256) {
    throw std::invalid_argument("base must be in [2, 256], got " + std::to_string(base));
  }
}

DigitExpansion::DigitExpansion(unsigned base, std::size_t length)
    : base_(base), digits_(length, 0) {
  check_base(base);
  if (length == 0) throw std::invalid_argument("DigitExpansion: length must be >= 1");
}

DigitExpansion::DigitExpansion(unsigned base, std::vector<std::uint8_t> digits)
    : base_(base), digits_(std::move(digits)) {
  check_base(base);
  if (digits_.empty()) throw std::invalid_argument("DigitExpansion: length must be >= 1");
  for (std::size_t j = 0; j < digits_.size(); ++j) {
    if (digits_[j] >= base_) {
      throw std::invalid_argument("DigitExpansion: digit " + std::to_string(digits_[j]) +
                                  " at position " + std::to_string(j) + " not below base " +
                                  std::to_string(base_));
    }
  }
}

void DigitExpansion::set(std::size_t j, unsigned digit) {
  if (digit >= base_) throw std::invalid_argument("DigitExpansion::set: digit out of range");
  digits_.at(j) = static_cast<std::uint8_t>(digit);
}

namespace {

// Largest L with b^L <= 2^53, so that b^L and every L-digit numerator are exact doubles.
constexpr std::array<std::uint8_t, 257> make_digit_caps() {
  std::array<std::uint8_t, 257> caps{};
  for (unsigned base = 2; base <= 256; ++base) {
    std::uint8_t length = 0;
    std::uint64_t power = 1;
    while (power <= (std::uint64_t{1} << 53) / base) {
      power *= base;
      ++length;
    }
    caps[base] = length;
  }
  return caps;
}

constexpr auto kDigitCaps = make_digit_caps();

std::size_t exact_digit_cap(unsigned base) noexcept { return kDigitCaps[base]; }

}  // namespace

std::size_t double_digit_cap(unsigned base) {
  check_base(base);
  return exact_digit_cap(base);
}

void fill_index_digits(std::uint64_t value, unsigned base, std::span<std::uint8_t> out) noexcept {
  if (base == 2) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = j < 64 ? static_cast<std::uint8_t>((value >> j) & 1U) : 0;
    }
    return;
  }
  std::size_t j = 0;
  for (; j < out.size() && value > 0xffffffffULL; ++j) {
    out[j] = static_cast<std::uint8_t>(value % base);
    value /= base;
  }
  auto narrow = static_cast<std::uint32_t>(value);
  for (; j < out.size(); ++j) {
    out[j] = static_cast<std::uint8_t>(narrow % base);
    narrow /= base;
  }
}

DigitExpansion index_digits(std::uint64_t i, unsigned base, std::size_t length) {
  check_base(base);
  if (i == 0) throw std::invalid_argument("index_digits: index is 1-based");
  DigitExpansion result(base, length);
  std::uint64_t rest = i - 1;
  for (auto& digit : result.mutable_digits()) {
    digit = static_cast<std::uint8_t>(rest % base);
    rest /= base;
  }
  if (rest != 0) {
    throw std::overflow_error("index_digits: " + std::to_string(i - 1) + " needs more than " +
                              std::to_string(length) + " base-" + std::to_string(base) +
                              " digits");
  }
  return result;
}

namespace {

// numerator / denominator rounded up to the next double. Both operands are
// exact (< 2^53), so floor(b^m x) equals the leading-digit value for every m up
// to the digit count, which round-to-nearest does not guarantee for b != 2^k.
double upward_quotient(std::uint64_t numerator, std::uint64_t denominator) noexcept {
  double value = static_cast<double>(numerator) / static_cast<double>(denominator);
  if (numerator == 0) return value;
  // value = mantissa * 2^-shift exactly (a normal double in (0,1)); compare
  // mantissa * den with num * 2^shift in 128 bits (both below 2^108).
  const auto bits = std::bit_cast<std::uint64_t>(value);
  const std::uint64_t mantissa = (bits & ((std::uint64_t{1} << 52) - 1)) | (std::uint64_t{1} << 52);
  const int shift = 1075 - static_cast<int>(bits >> 52);
  using u128 = unsigned __int128;
  if (static_cast<u128>(mantissa) * denominator < (static_cast<u128>(numerator) << shift)) {
    value = std::bit_cast<double>(bits + 1);
  }
  return value;
}

}  // namespace

double radical_inverse(std::span<const std::uint8_t> digits, unsigned base) noexcept {
  const std::size_t used = std::min(digits.size(), exact_digit_cap(base));
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  for (std::size_t j = 0; j < used; ++j) {
    numerator = numerator * base + digits[j];
    denominator *= base;
  }
  return upward_quotient(numerator, denominator);
}

double radical_inverse(const DigitExpansion& digits) {
  return radical_inverse(digits.digits(), digits.base());
}

std::uint64_t checked_power(unsigned base, unsigned exponent) {
  std::uint64_t result = 1;
  for (unsigned k = 0; k < exponent; ++k) {
    if (result > std::numeric_limits<std::uint64_t>::max() / base) {
      throw std::overflow_error("checked_power: " + std::to_string(base) + "^" +
                                std::to_string(exponent) + " overflows 64 bits");
    }
    result *= base;
  }
  return result;
}

std::uint64_t leading_digits_value(std::span<const std::uint8_t> digits, unsigned base,
                                   std::size_t m) {
  if (m > digits.size()) throw std::invalid_argument("leading_digits_value: m exceeds length");
  checked_power(base, static_cast<unsigned>(m));
  std::uint64_t value = 0;
  for (std::size_t j = 0; j < m; ++j) value = value * base + digits[j];
  return value;
}

double vdc_point(std::uint64_t i, unsigned base) {
  check_base(base);
  if (i == 0) throw std::invalid_argument("vdc_point: index is 1-based");
  const std::size_t cap = exact_digit_cap(base);
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  std::size_t used = 0;
  std::uint64_t rest = i - 1;
  for (; rest > 0xffffffffULL && used < cap; rest /= base, ++used) {
    numerator = numerator * base + rest % base;
    denominator *= base;
  }
  for (auto narrow = static_cast<std::uint32_t>(rest); narrow != 0 && used < cap; narrow /= base, ++used) {
    numerator = numerator * base + narrow % base;
    denominator *= base;
  }
  return upward_quotient(numerator, denominator);
}

}  // namespace hsfc
