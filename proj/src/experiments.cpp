#include "hsfc/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hsfc/random.hpp"

namespace hsfc {

namespace {

std::string describe(Method method, ScrambleKind kind) {
  std::string s(to_string(method));
  if (method == Method::hsfc || method == Method::dnet) s += "/" + std::string(to_string(kind));
  return s;
}

bool uses_scrambler(Method method) { return method == Method::hsfc || method == Method::dnet; }

std::shared_ptr<const DirectionNumbersTable> load_directions(const ExperimentSpec& spec) {
  if (spec.dnet_table.empty()) return nullptr;
  return std::make_shared<const DirectionNumbersTable>(
      DirectionNumbersTable::parse_file(spec.dnet_table));
}

std::uint64_t cell_seed(const ExperimentSpec& spec, unsigned m) { return derive_seed(spec.seed, m); }

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buffer, end);
}

void validate(const ExperimentSpec& spec, const IntegrandRegistry& registry) {
  static const std::vector<std::string> commands{"variance-decay", "normality", "strata-audit",
                                                 "boundary-census"};
  if (std::find(commands.begin(), commands.end(), spec.command) == commands.end()) {
    throw std::invalid_argument("unknown command '" + spec.command + "'");
  }
  if (spec.dim == 0) throw std::invalid_argument("--dim must be >= 1");
  if (spec.jobs == 0) throw std::invalid_argument("--jobs must be >= 1");
  if (spec.command == "strata-audit") {
    if (spec.dim > kMaxHilbertDim) throw std::invalid_argument("--dim too large for the curve");
    const unsigned level = spec.level ? spec.level : geometry_level(spec.dim, spec.m);
    if (spec.dim * level < spec.m) throw std::invalid_argument("--level too coarse for 2^m strata");
    if (spec.dim * level > 30) throw std::invalid_argument("strata audit limited to 2^30 cells");
    return;
  }
  if (spec.command == "boundary-census") {
    if (spec.m_min > spec.m_max) throw std::invalid_argument("--m-min exceeds --m-max");
    auto region = make_region(spec.region, spec.dim);
    if (!region->exact_volumes()) {
      throw std::invalid_argument("region '" + spec.region + "' has no exact volumes");
    }
    if (spec.dim * geometry_level(spec.dim, spec.m_max) > 30) {
      throw std::invalid_argument("boundary census limited to 2^30 cells");
    }
    return;
  }
  if (!registry.contains(spec.integrand)) {
    throw std::invalid_argument("unknown integrand '" + spec.integrand + "'");
  }
  registry.make(spec.integrand, spec.dim);
  if (spec.methods.empty()) throw std::invalid_argument("at least one --method is required");
  if (spec.command == "variance-decay") {
    if (spec.m_min > spec.m_max) throw std::invalid_argument("--m-min exceeds --m-max");
    if (spec.reps < 2) throw std::invalid_argument("--reps must be >= 2");
    for (auto method : spec.methods) {
      for (unsigned m = spec.m_min; m <= spec.m_max; ++m) {
        if (method == Method::grid && m % spec.dim != 0) continue;
        hsfc::validate(experiment_config(spec, registry, method, m));
      }
    }
  } else {
    if (spec.reps < 100) throw std::invalid_argument("normality needs --reps >= 100");
    for (auto method : spec.methods) {
      if (method == Method::grid && spec.m % spec.dim != 0) {
        throw std::invalid_argument("grid needs --m divisible by --dim");
      }
      hsfc::validate(experiment_config(spec, registry, method, spec.m));
    }
  }
}

EstimatorConfig experiment_config(const ExperimentSpec& spec, const IntegrandRegistry& registry,
                                  Method method, unsigned m) {
  EstimatorConfig c;
  c.method = method;
  c.integrand = registry.make(spec.integrand, spec.dim);
  c.scramble = spec.scramble;
  c.seed = cell_seed(spec, m);
  c.jobs = spec.jobs;
  switch (method) {
    case Method::mc:
      if (m > 40) throw std::invalid_argument("m too large");
      c.size = std::uint64_t{1} << m;
      break;
    case Method::grid:
      if (m % spec.dim != 0) {
        throw std::invalid_argument("grid needs m divisible by d (n = 2^m must be a d-th power)");
      }
      c.size = std::uint64_t{1} << (m / spec.dim);
      break;
    case Method::hsfc:
    case Method::dnet:
      c.size = m;
      break;
  }
  if (method == Method::dnet) c.directions = load_directions(spec);
  return c;
}

std::vector<VarianceDecayRow> run_variance_decay(const ExperimentSpec& spec,
                                                 const IntegrandRegistry& registry) {
  validate(spec, registry);
  std::vector<VarianceDecayRow> rows;
  for (auto method : spec.methods) {
    for (unsigned m = spec.m_min; m <= spec.m_max; ++m) {
      if (method == Method::grid && m % spec.dim != 0) continue;
      const auto config = experiment_config(spec, registry, method, m);
      const auto set = replicate(config, spec.reps);
      double mean = 0.0;
      for (double e : set.estimates) mean += e;
      mean /= static_cast<double>(set.size());
      rows.push_back({method, m, sample_size(config), spec.reps, empirical_variance(set), mean});
    }
  }
  return rows;
}

void write_variance_decay_csv(const ExperimentSpec& spec, const Integrand& f,
                              const std::vector<VarianceDecayRow>& rows, std::ostream& out) {
  out << kVarianceDecaySchema << "\n";
  out << "method,scramble,integrand,d,m,n,R,empirical_variance,lower_bound,upper_bound,"
         "mc_reference\n";
  for (const auto& r : rows) {
    const double n = static_cast<double>(r.n);
    out << to_string(r.method) << ',' << (uses_scrambler(r.method) ? to_string(spec.scramble) : "")
        << ',' << f.name << ',' << f.dim << ',' << r.m << ',' << r.n << ',' << r.reps << ','
        << format_number(r.variance) << ',';
    if (f.grad_sq_integral) out << format_number(hsfc_variance_lower_bound(*f.grad_sq_integral, f.dim, n));
    out << ',';
    if (f.lipschitz) out << format_number(hsfc_variance_upper_bound(*f.lipschitz, f.dim, n));
    out << ',';
    if (f.variance) out << format_number(*f.variance / n);
    out << '\n';
  }
}

std::vector<NormalityResult> run_normality(const ExperimentSpec& spec,
                                           const IntegrandRegistry& registry) {
  validate(spec, registry);
  const auto f = registry.make(spec.integrand, spec.dim);
  if (!f.exact_mean) {
    throw std::invalid_argument("normality needs an integrand with a known exact mean");
  }
  std::vector<NormalityResult> results;
  for (auto method : spec.methods) {
    const auto config = experiment_config(spec, registry, method, spec.m);
    const auto set = replicate(config, spec.reps);
    NormalityResult r{method, spec.scramble, spec.m, empirical_variance(set), {}, {}, {}};
    try {
      r.z = standardized_errors(set, *f.exact_mean);
    } catch (const std::domain_error& e) {
      throw std::domain_error(describe(method, spec.scramble) + " on " + f.name + ": " + e.what());
    }
    r.density = kde(r.z);
    r.report = normality_report(r.z);
    results.push_back(std::move(r));
  }
  return results;
}

void write_normality_csv(const ExperimentSpec& spec, const std::vector<NormalityResult>& results,
                         std::ostream& out) {
  out << kNormalitySchema << "\n";
  out << "method,scramble,integrand,d,m,series,index,x,density\n";
  for (const auto& r : results) {
    const std::string prefix = std::string(to_string(r.method)) + ',' +
                               (uses_scrambler(r.method) ? std::string(to_string(r.scramble)) : "") +
                               ',' + spec.integrand + ',' + std::to_string(spec.dim) + ',' +
                               std::to_string(r.m) + ',';
    for (std::size_t i = 0; i < r.z.size(); ++i) {
      out << prefix << "z," << i << ',' << format_number(r.z[i]) << ",\n";
    }
    for (std::size_t i = 0; i < r.density.x.size(); ++i) {
      out << prefix << "kde," << i << ',' << format_number(r.density.x[i]) << ','
          << format_number(r.density.density[i]) << '\n';
    }
  }
}

nlohmann::json normality_summary(const ExperimentSpec& spec,
                                 const std::vector<NormalityResult>& results) {
  nlohmann::json j;
  j["schema"] = "hsfc.normality_summary";
  j["version"] = kSummaryVersion;
  j["integrand"] = spec.integrand;
  j["d"] = spec.dim;
  j["m"] = spec.m;
  j["n"] = std::uint64_t{1} << spec.m;
  j["reps"] = spec.reps;
  j["seed"] = spec.seed;
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    j["results"].push_back({{"method", to_string(r.method)},
                            {"scramble", uses_scrambler(r.method) ? to_string(r.scramble) : ""},
                            {"empirical_variance", r.variance},
                            {"ks", r.report.ks},
                            {"skewness", r.report.skewness},
                            {"excess_kurtosis", r.report.excess_kurtosis},
                            {"bandwidth", r.density.bandwidth},
                            {"bandwidth_rule", r.density.bandwidth_rule}});
  }
  return j;
}

nlohmann::json run_strata_audit(const ExperimentSpec& spec) {
  ExperimentSpec checked = spec;
  checked.command = "strata-audit";
  validate(checked, IntegrandRegistry{});
  const unsigned d = spec.dim, m = spec.m;
  const unsigned level = spec.level ? spec.level : geometry_level(d, m);
  const std::uint64_t n = std::uint64_t{1} << m;
  const double bound = stratum_diameter_bound(d, static_cast<double>(n));
  nlohmann::json j;
  j["schema"] = "hsfc.strata_audit";
  j["version"] = kSummaryVersion;
  j["d"] = d;
  j["m"] = m;
  j["K"] = level;
  j["n"] = n;
  j["diameter_bound"] = bound;
  j["strata"] = nlohmann::json::array();
  double max_diameter = 0.0;
  bool measures_exact = true;
  const double cell_measure = std::ldexp(1.0, -static_cast<int>(d * level));
  for (std::uint64_t i = 1; i <= n; ++i) {
    const auto cells = stratum_cells(Stratum{i, 2, m}, d, level);
    const double measure = static_cast<double>(cells.size()) * cell_measure;
    const double diameter = cells_diameter(cells);
    measures_exact = measures_exact && measure == 1.0 / static_cast<double>(n);
    max_diameter = std::max(max_diameter, diameter);
    j["strata"].push_back(
        {{"index", i}, {"cells", cells.size()}, {"measure", measure}, {"diameter", diameter}});
  }
  j["max_diameter"] = max_diameter;
  j["within_bound"] = max_diameter <= bound;
  j["measures_exact"] = measures_exact;
  return j;
}

std::vector<BoundaryCensus> run_boundary_census(const ExperimentSpec& spec) {
  ExperimentSpec checked = spec;
  checked.command = "boundary-census";
  validate(checked, IntegrandRegistry{});
  auto region = make_region(spec.region, spec.dim);
  std::vector<BoundaryCensus> out;
  for (unsigned m = spec.m_min; m <= spec.m_max; ++m) out.push_back(boundary_census(*region, m));
  return out;
}

void write_boundary_census_csv(const ExperimentSpec& spec,
                               const std::vector<BoundaryCensus>& censuses, std::ostream& out) {
  out << kBoundaryCensusSchema << "\n";
  out << "region,d,m,n,interior,boundary,exterior,min_boundary_variance,max_boundary_variance,"
         "omega_volume\n";
  for (const auto& c : censuses) {
    out << spec.region << ',' << c.dim << ',' << c.m << ',' << c.n << ',' << c.interior << ','
        << c.boundary << ',' << c.exterior << ',';
    if (!c.boundary_variances.empty()) {
      const auto [lo, hi] = std::minmax_element(c.boundary_variances.begin(), c.boundary_variances.end());
      out << format_number(*lo) << ',' << format_number(*hi);
    } else {
      out << ',';
    }
    out << ',' << format_number(c.omega_volume) << '\n';
  }
}

}  // namespace hsfc
