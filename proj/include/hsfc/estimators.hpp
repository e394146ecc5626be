#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "hsfc/digitalnet.hpp"
#include "hsfc/integrands.hpp"
#include "hsfc/scramble.hpp"

namespace hsfc {

enum class Method { mc, grid, hsfc, dnet };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);

struct EstimatorConfig {
  Method method = Method::hsfc;
  Integrand integrand;
  // mc: n; grid: points per axis (n = size^d); hsfc, dnet: m (n = 2^m).
  std::uint64_t size = 0;
  ScrambleKind scramble = ScrambleKind::nested;
  std::uint64_t seed = 0;
  // hsfc curve level; 0 selects ceil(m/d) + 8.
  unsigned level = 0;
  // dnet direction numbers; null selects the bundled table.
  std::shared_ptr<const DirectionNumbersTable> directions;
  unsigned jobs = 1;

  unsigned dim() const noexcept { return integrand.dim; }
};

// Number of points one estimate uses. Throws std::invalid_argument when the
// configuration is inconsistent (zero size, 2^m overflow, unsupported d, ...).
std::uint64_t sample_size(const EstimatorConfig& config);
void validate(const EstimatorConfig& config);

// Default hsfc curve level for n = 2^m points in d dimensions.
unsigned sampling_level(unsigned dim, unsigned m);

double mc_estimate(const Integrand& f, std::uint64_t n, std::uint64_t seed);
double grid_estimate(const Integrand& f, std::uint64_t per_axis, std::uint64_t seed);
double hsfc_estimate(const Integrand& f, unsigned m, ScrambleKind kind, std::uint64_t seed,
                     unsigned level = 0);
double dnet_estimate(const Integrand& f, const GeneratorMatrices& matrices, unsigned m,
                     ScrambleKind kind, std::uint64_t seed);

// One estimate under `config`, using `seed` in place of config.seed.
double estimate(const EstimatorConfig& config, std::uint64_t seed);

// Seed of replication r (0-based) under a master seed.
std::uint64_t replication_seed(std::uint64_t master, std::uint64_t r);

struct ReplicationSet {
  EstimatorConfig config;
  std::vector<std::uint64_t> seeds;
  std::vector<double> estimates;

  std::size_t size() const noexcept { return estimates.size(); }
};

// R >= 2 independent estimates, identical for a given config regardless of
// config.jobs.
ReplicationSet replicate(const EstimatorConfig& config, std::size_t replications);

}  // namespace hsfc
