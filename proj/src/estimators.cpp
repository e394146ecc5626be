#include "hsfc/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "hsfc/hilbert.hpp"
#include "hsfc/random.hpp"

namespace hsfc {

namespace {

constexpr unsigned kMaxLog2Points = 40;

void check_integrand(const Integrand& f) {
  if (f.dim == 0 || !f.evaluate) throw std::invalid_argument("estimator needs a valid integrand");
}

std::uint64_t grid_points(unsigned dim, std::uint64_t per_axis) {
  std::uint64_t n = 1;
  for (unsigned t = 0; t < dim; ++t) {
    if (n > (std::uint64_t{1} << kMaxLog2Points) / per_axis) {
      throw std::invalid_argument("grid: " + std::to_string(per_axis) + "^" + std::to_string(dim) +
                                  " points is too many");
    }
    n *= per_axis;
  }
  return n;
}

// Sum of f over the n = 2^m HSFC points. Digits 1..m of x_i are the scrambled
// index digits; the scrambler is responsible for digits m+1..dK unless
// `fresh_tail`, in which case they are drawn i.i.d. from `residual`. Under
// nested scrambling those digits sit below pairwise distinct prefixes, so they
// are independent uniform digits either way.
template <class Scrambler>
double hsfc_sum(const Integrand& f, unsigned m, unsigned level, const Scrambler& scrambler,
                bool fresh_tail, UniformStream& residual) {
  const unsigned d = f.dim;
  const std::size_t length = static_cast<std::size_t>(d) * level;
  const std::size_t scrambled_length = fresh_tail ? m : length;
  const std::uint64_t n = std::uint64_t{1} << m;
  std::vector<std::uint8_t> digits(scrambled_length, 0), point(length);
  std::vector<std::uint64_t> scratch(d);
  std::vector<double> x(d);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    // Digit j of the point is digit j of i, least significant first.
    for (unsigned j = 0; j < m; ++j) digits[j] = static_cast<std::uint8_t>((i >> j) & 1U);
    scrambler.apply(digits, std::span<std::uint8_t>(point.data(), scrambled_length));
    for (std::size_t j = scrambled_length; j < length; j += 64) {
      std::uint64_t word = residual.bits();
      for (std::size_t k = j; k < std::min(length, j + 64); ++k, word >>= 1) {
        point[k] = static_cast<std::uint8_t>(word & 1U);
      }
    }
    map_point_into(std::span<const std::uint8_t>(point), d, level, residual,
                   std::span<std::uint64_t>(scratch), std::span<double>(x));
    sum += f(x);
  }
  return sum;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::mc: return "mc";
    case Method::grid: return "grid";
    case Method::hsfc: return "hsfc";
    case Method::dnet: return "dnet";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  for (auto m : {Method::mc, Method::grid, Method::hsfc, Method::dnet}) {
    if (text == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(text) + "' (mc, grid, hsfc, dnet)");
}

unsigned sampling_level(unsigned dim, unsigned m) { return (m + dim - 1) / dim + 8; }

std::uint64_t sample_size(const EstimatorConfig& config) {
  check_integrand(config.integrand);
  const unsigned d = config.dim();
  switch (config.method) {
    case Method::mc:
      if (config.size == 0) throw std::invalid_argument("mc: n must be >= 1");
      return config.size;
    case Method::grid:
      if (config.size == 0) throw std::invalid_argument("grid: points per axis must be >= 1");
      return grid_points(d, config.size);
    case Method::hsfc:
    case Method::dnet:
      if (config.size > kMaxLog2Points) {
        throw std::invalid_argument("m = " + std::to_string(config.size) + " is too large");
      }
      return std::uint64_t{1} << config.size;
  }
  throw std::invalid_argument("unknown method");
}

void validate(const EstimatorConfig& config) {
  sample_size(config);
  const unsigned d = config.dim();
  if (config.method == Method::hsfc) {
    const unsigned m = static_cast<unsigned>(config.size);
    const unsigned level = config.level ? config.level : sampling_level(d, m);
    if (d > kMaxHilbertDim) throw std::invalid_argument("hsfc: d exceeds " + std::to_string(kMaxHilbertDim));
    if (level > kMaxHilbertLevel) throw std::invalid_argument("hsfc: curve level too large");
    if (static_cast<std::size_t>(d) * level < m) {
      throw std::invalid_argument("hsfc: curve level too coarse for 2^m strata");
    }
  }
  if (config.method == Method::dnet) {
    const auto& table = config.directions ? *config.directions : DirectionNumbersTable::bundled();
    if (d > table.max_dimension()) {
      throw std::invalid_argument("dnet: direction numbers cover only " +
                                  std::to_string(table.max_dimension()) + " dimensions");
    }
    if (config.size > GeneratorMatrices::kBits) throw std::invalid_argument("dnet: m exceeds 32");
  }
}

double mc_estimate(const Integrand& f, std::uint64_t n, std::uint64_t seed) {
  check_integrand(f);
  if (n == 0) throw std::invalid_argument("mc: n must be >= 1");
  UniformStream u(derive_seed(seed, Stream::points));
  std::vector<double> x(f.dim);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (auto& v : x) v = u();
    sum += f(x);
  }
  return sum / static_cast<double>(n);
}

double grid_estimate(const Integrand& f, std::uint64_t per_axis, std::uint64_t seed) {
  check_integrand(f);
  if (per_axis == 0) throw std::invalid_argument("grid: points per axis must be >= 1");
  const std::uint64_t n = grid_points(f.dim, per_axis);
  const double side = 1.0 / static_cast<double>(per_axis);
  UniformStream u(derive_seed(seed, Stream::points));
  std::vector<std::uint64_t> cell(f.dim, 0);
  std::vector<double> x(f.dim);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (unsigned t = 0; t < f.dim; ++t) x[t] = (static_cast<double>(cell[t]) + u()) * side;
    sum += f(x);
    // Row-major: the last coordinate varies fastest.
    for (unsigned t = f.dim; t-- > 0;) {
      if (++cell[t] < per_axis) break;
      cell[t] = 0;
    }
  }
  return sum / static_cast<double>(n);
}

double hsfc_estimate(const Integrand& f, unsigned m, ScrambleKind kind, std::uint64_t seed,
                     unsigned level) {
  check_integrand(f);
  const unsigned d = f.dim;
  if (level == 0) level = sampling_level(d, m);
  if (m > kMaxLog2Points) throw std::invalid_argument("hsfc: m too large");
  if (static_cast<std::size_t>(d) * level < m) {
    throw std::invalid_argument("hsfc: curve level too coarse for 2^m strata");
  }
  const std::size_t length = static_cast<std::size_t>(d) * level;
  UniformStream residual(derive_seed(seed, Stream::residual));
  const std::uint64_t scrambler_seed = derive_seed(seed, Stream::scrambler);
  double sum = 0.0;
  if (kind == ScrambleKind::nested) {
    NestedScrambler scrambler(2, m, scrambler_seed);
    scrambler.set_uniform_tail(false);
    sum = hsfc_sum(f, m, level, scrambler, true, residual);
  } else {
    sum = hsfc_sum(f, m, level, LinearScrambler(2, length, scrambler_seed), false, residual);
  }
  return sum / static_cast<double>(std::uint64_t{1} << m);
}

double dnet_estimate(const Integrand& f, const GeneratorMatrices& matrices, unsigned m,
                     ScrambleKind kind, std::uint64_t seed) {
  check_integrand(f);
  if (f.dim != matrices.dim()) {
    throw std::invalid_argument("dnet: matrices must match the integrand dimension");
  }
  const auto points = scrambled_sobol_batch(matrices, m, kind, derive_seed(seed, Stream::scrambler));
  const std::uint64_t n = std::uint64_t{1} << m;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    sum += f(std::span<const double>(points.data() + i * f.dim, f.dim));
  }
  return sum / static_cast<double>(n);
}

double estimate(const EstimatorConfig& config, std::uint64_t seed) {
  const auto& f = config.integrand;
  switch (config.method) {
    case Method::mc: return mc_estimate(f, config.size, seed);
    case Method::grid: return grid_estimate(f, config.size, seed);
    case Method::hsfc:
      return hsfc_estimate(f, static_cast<unsigned>(config.size), config.scramble, seed, config.level);
    case Method::dnet: {
      const auto& table = config.directions ? *config.directions : DirectionNumbersTable::bundled();
      return dnet_estimate(f, GeneratorMatrices(table, f.dim), static_cast<unsigned>(config.size),
                           config.scramble, seed);
    }
  }
  throw std::invalid_argument("unknown method");
}

std::uint64_t replication_seed(std::uint64_t master, std::uint64_t r) {
  return derive_seed(master, r);
}

ReplicationSet replicate(const EstimatorConfig& config, std::size_t replications) {
  if (replications < 2) throw std::invalid_argument("replicate: need R >= 2");
  validate(config);
  ReplicationSet set;
  set.config = config;
  set.seeds.resize(replications);
  set.estimates.resize(replications);
  for (std::size_t r = 0; r < replications; ++r) set.seeds[r] = replication_seed(config.seed, r);

  std::unique_ptr<GeneratorMatrices> matrices;
  if (config.method == Method::dnet) {
    const auto& table = config.directions ? *config.directions : DirectionNumbersTable::bundled();
    matrices = std::make_unique<GeneratorMatrices>(table, config.dim());
  }
  auto run_one = [&](std::size_t r) {
    if (matrices) {
      set.estimates[r] = dnet_estimate(config.integrand, *matrices,
                                       static_cast<unsigned>(config.size), config.scramble,
                                       set.seeds[r]);
    } else {
      set.estimates[r] = estimate(config, set.seeds[r]);
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(config.jobs, 1U), replications));
  if (workers == 1) {
    for (std::size_t r = 0; r < replications; ++r) run_one(r);
    return set;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r; (r = next.fetch_add(1)) < replications;) {
        try {
          run_one(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = replications;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return set;
}

}  // namespace hsfc
