#include "hsfc/digitalnet.hpp"

#include <fstream>
#include <sstream>

#include "hsfc/random.hpp"

namespace hsfc {

namespace {

// Joe & Kuo direction numbers (new-joe-kuo-6.21201), dimensions 2..16.
constexpr const char* kBundledDirections = R"(d s a m_i
2 1 0 1
3 2 1 1 3
4 3 1 1 3 1
5 3 2 1 1 1
6 4 1 1 1 3 3
7 4 4 1 3 5 13
8 5 2 1 1 5 5 17
9 5 4 1 1 5 5 5
10 5 7 1 1 7 11 19
11 5 11 1 1 5 1 1
12 5 13 1 1 1 3 11
13 5 14 1 3 5 5 31
14 6 1 1 3 3 9 7 49
15 6 13 1 1 1 15 21 21
16 6 16 1 3 1 13 27 49
)";

bool parse_unsigned(const std::string& token, std::uint64_t& value) {
  if (token.empty()) return false;
  value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    if (value > 0xffffffffULL) return false;
  }
  return true;
}

}  // namespace

DirectionNumbersTable DirectionNumbersTable::parse(std::istream& in) {
  DirectionNumbersTable table;
  std::string line;
  std::size_t number = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string token; fields >> token;) tokens.push_back(token);
    if (tokens.empty()) continue;
    const bool first = !seen_content;
    seen_content = true;
    std::uint64_t probe = 0;
    if (first && !parse_unsigned(tokens.front(), probe)) continue;  // header line
    std::vector<std::uint64_t> values;
    for (const auto& token : tokens) {
      std::uint64_t v = 0;
      if (!parse_unsigned(token, v)) {
        throw ParseError(number, "expected an unsigned integer, got '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.size() < 3) throw ParseError(number, "record needs at least 'd s a'");
    DirectionRecord record;
    record.dimension = static_cast<unsigned>(values[0]);
    record.degree = static_cast<unsigned>(values[1]);
    record.coefficients = static_cast<std::uint32_t>(values[2]);
    const unsigned expected_dimension = table.max_dimension() + 1;
    if (record.dimension != expected_dimension) {
      throw ParseError(number, "expected dimension " + std::to_string(expected_dimension) +
                                   ", got " + std::to_string(record.dimension));
    }
    if (record.degree == 0 || record.degree >= GeneratorMatrices::kBits) {
      throw ParseError(number, "degree out of range");
    }
    if (values.size() != 3 + record.degree) {
      throw ParseError(number, "expected " + std::to_string(record.degree) + " m-values, got " +
                                   std::to_string(values.size() - 3));
    }
    if (record.degree > 1 && (record.coefficients >> (record.degree - 1)) != 0) {
      throw ParseError(number, "coefficient a needs more than s-1 bits");
    }
    if (record.degree == 1 && record.coefficients != 0) {
      throw ParseError(number, "coefficient a must be 0 for degree 1");
    }
    for (unsigned j = 1; j <= record.degree; ++j) {
      const auto mj = values[2 + j];
      if (mj % 2 == 0 || mj >= (std::uint64_t{1} << j)) {
        throw ParseError(number, "m_" + std::to_string(j) + " = " + std::to_string(mj) +
                                     " must be odd and below 2^" + std::to_string(j));
      }
      record.initial.push_back(static_cast<std::uint32_t>(mj));
    }
    table.records_.push_back(std::move(record));
  }
  return table;
}

DirectionNumbersTable DirectionNumbersTable::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open direction-number file '" + path + "'");
  return parse(in);
}

const DirectionNumbersTable& DirectionNumbersTable::bundled() {
  static const DirectionNumbersTable table = [] {
    std::istringstream in(kBundledDirections);
    return parse(in);
  }();
  return table;
}

GeneratorMatrices::GeneratorMatrices(const DirectionNumbersTable& table, unsigned dim) {
  if (dim == 0) throw std::invalid_argument("GeneratorMatrices: dimension must be >= 1");
  if (dim > table.max_dimension()) {
    throw std::invalid_argument("GeneratorMatrices: table supports " +
                                std::to_string(table.max_dimension()) + " dimensions, " +
                                std::to_string(dim) + " requested");
  }
  columns_.resize(dim);
  for (unsigned k = 0; k < kBits; ++k) columns_[0][k] = std::uint32_t{1} << (kBits - 1 - k);
  for (unsigned t = 1; t < dim; ++t) {
    const auto& record = table.records()[t - 1];
    const unsigned s = record.degree;
    auto& v = columns_[t];  // v[k] is V_{k+1}
    for (unsigned k = 0; k < kBits; ++k) {
      if (k < s) {
        v[k] = record.initial[k] << (kBits - 1 - k);
        continue;
      }
      std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
      for (unsigned l = 1; l < s; ++l) {
        if ((record.coefficients >> (s - 1 - l)) & 1U) value ^= v[k - l];
      }
      v[k] = value;
    }
  }
}

std::uint32_t GeneratorMatrices::coordinate_bits(std::uint64_t index, unsigned t) const noexcept {
  std::uint32_t bits = 0;
  const auto& v = columns_[t];
  for (unsigned k = 0; index != 0 && k < kBits; ++k, index >>= 1) {
    if (index & 1U) bits ^= v[k];
  }
  return bits;
}

std::vector<double> sobol_point(std::uint64_t i, const GeneratorMatrices& matrices) {
  if (i == 0) throw std::out_of_range("sobol_point: index is 1-based");
  if (i - 1 >= (std::uint64_t{1} << GeneratorMatrices::kBits)) {
    throw std::out_of_range("sobol_point: index exceeds 2^32");
  }
  std::vector<double> point(matrices.dim());
  for (unsigned t = 0; t < matrices.dim(); ++t) {
    point[t] = static_cast<double>(matrices.coordinate_bits(i - 1, t)) * 0x1.0p-32;
  }
  return point;
}

std::vector<double> scrambled_sobol_batch(const GeneratorMatrices& matrices, unsigned m,
                                          ScrambleKind kind, std::uint64_t seed) {
  if (m > GeneratorMatrices::kBits) throw std::invalid_argument("scrambled_sobol_batch: m exceeds 32");
  const unsigned dim = matrices.dim();
  const std::uint64_t n = std::uint64_t{1} << m;
  constexpr std::size_t kDigits = 53;
  std::vector<double> points(n * dim);
  std::vector<std::uint8_t> in(kDigits, 0);
  std::vector<std::uint8_t> out(kDigits);
  for (unsigned t = 0; t < dim; ++t) {
    const std::uint64_t coordinate_seed =
        derive_seed(seed, static_cast<std::uint64_t>(Stream::net_dimension) + t);
    auto run = [&](const auto& scrambler) {
      for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint32_t bits = matrices.coordinate_bits(i, t);
        for (unsigned j = 0; j < GeneratorMatrices::kBits; ++j) {
          in[j] = static_cast<std::uint8_t>((bits >> (GeneratorMatrices::kBits - 1 - j)) & 1U);
        }
        scrambler.apply(in, out);
        points[i * dim + t] = radical_inverse(out, 2);
      }
    };
    if (kind == ScrambleKind::nested) {
      run(NestedScrambler(2, GeneratorMatrices::kBits, coordinate_seed));
    } else {
      run(LinearScrambler(2, GeneratorMatrices::kBits, coordinate_seed));
    }
  }
  return points;
}

}  // namespace hsfc
