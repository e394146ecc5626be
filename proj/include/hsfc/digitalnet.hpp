#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsfc/scramble.hpp"

namespace hsfc {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// One "d s a m_1 .. m_s" record: primitive polynomial of degree s with
// interior coefficients a, and initial direction integers m_j (odd, < 2^j).
struct DirectionRecord {
  unsigned dimension = 0;
  unsigned degree = 0;
  std::uint32_t coefficients = 0;
  std::vector<std::uint32_t> initial;
};

class DirectionNumbersTable {
 public:
  // Optional header line, then one record per dimension, starting at 2 and
  // consecutive. Throws ParseError (with line number) on malformed input.
  static DirectionNumbersTable parse(std::istream& in);
  static DirectionNumbersTable parse_file(const std::string& path);
  // Bundled table for dimensions 2..16.
  static const DirectionNumbersTable& bundled();

  // Dimension 1 (van der Corput) is implicit.
  unsigned max_dimension() const noexcept { return static_cast<unsigned>(records_.size()) + 1; }
  const std::vector<DirectionRecord>& records() const noexcept { return records_; }

 private:
  std::vector<DirectionRecord> records_;
};

// Binary generator matrices, one per coordinate, stored as W = 32 columns
// (column k applies to bit k of i-1, least significant first). Coordinate 1 is
// the identity, i.e. the van der Corput sequence in base 2.
class GeneratorMatrices {
 public:
  static constexpr unsigned kBits = 32;

  GeneratorMatrices(const DirectionNumbersTable& table, unsigned dim);

  unsigned dim() const noexcept { return static_cast<unsigned>(columns_.size()); }
  // Coordinate t of point i = index + 1, as a W-bit fraction (MSB = 1/2).
  std::uint32_t coordinate_bits(std::uint64_t index, unsigned t) const noexcept;

 private:
  std::vector<std::array<std::uint32_t, kBits>> columns_;
};

// Point i >= 1 of the unscrambled sequence. Throws std::out_of_range for i > 2^W.
std::vector<double> sobol_point(std::uint64_t i, const GeneratorMatrices& matrices);

// First n = 2^m points, each coordinate scrambled by its own independent
// scrambler of depth W (digits beyond W are uniform-completed). Row-major n x d.
std::vector<double> scrambled_sobol_batch(const GeneratorMatrices& matrices, unsigned m,
                                          ScrambleKind kind, std::uint64_t seed);

}  // namespace hsfc
