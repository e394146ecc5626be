#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsfc/estimators.hpp"
#include "hsfc/hilbert.hpp"
#include "hsfc/stats.hpp"

namespace hsfc {

inline constexpr const char* kVarianceDecaySchema = "# schema: hsfc.variance_decay v1";
inline constexpr const char* kNormalitySchema = "# schema: hsfc.normality v1";
inline constexpr const char* kBoundaryCensusSchema = "# schema: hsfc.boundary_census v1";
inline constexpr int kSummaryVersion = 1;

struct ExperimentSpec {
  std::string command;
  std::string integrand = "f1";
  unsigned dim = 2;
  std::vector<Method> methods{Method::hsfc};
  unsigned m_min = 0;
  unsigned m_max = 12;
  unsigned m = 14;  // normality, strata-audit
  std::size_t reps = 500;
  std::uint64_t seed = 1;
  ScrambleKind scramble = ScrambleKind::nested;
  std::string out;
  unsigned jobs = 1;
  std::string dnet_table;  // empty: bundled table
  std::string region = "x1-plus-x2";
  unsigned level = 0;  // strata-audit curve level; 0: max(ceil(m/d), 1)
};

// Throws std::invalid_argument describing the first problem found.
void validate(const ExperimentSpec& spec, const IntegrandRegistry& registry);

// Estimator configuration for one (method, m) cell of an experiment. Grid uses
// 2^{m/d} points per axis and needs d | m.
EstimatorConfig experiment_config(const ExperimentSpec& spec, const IntegrandRegistry& registry,
                                  Method method, unsigned m);

struct VarianceDecayRow {
  Method method;
  unsigned m;
  std::uint64_t n;
  std::size_t reps;
  double variance;
  double mean;
};

// One row per (method, m) for m in [m_min, m_max]; grid rows only where d | m.
std::vector<VarianceDecayRow> run_variance_decay(const ExperimentSpec& spec,
                                                 const IntegrandRegistry& registry);
void write_variance_decay_csv(const ExperimentSpec& spec, const Integrand& f,
                              const std::vector<VarianceDecayRow>& rows, std::ostream& out);

struct NormalityResult {
  Method method;
  ScrambleKind scramble;
  unsigned m;
  double variance;
  std::vector<double> z;
  DensityCurve density;
  NormalityReport report;
};

std::vector<NormalityResult> run_normality(const ExperimentSpec& spec,
                                           const IntegrandRegistry& registry);
void write_normality_csv(const ExperimentSpec& spec, const std::vector<NormalityResult>& results,
                         std::ostream& out);
nlohmann::json normality_summary(const ExperimentSpec& spec,
                                 const std::vector<NormalityResult>& results);

nlohmann::json run_strata_audit(const ExperimentSpec& spec);

std::vector<BoundaryCensus> run_boundary_census(const ExperimentSpec& spec);
void write_boundary_census_csv(const ExperimentSpec& spec,
                               const std::vector<BoundaryCensus>& censuses, std::ostream& out);

// Shortest round-trip decimal form; used for every number written.
std::string format_number(double value);

}  // namespace hsfc
