// hsfcmc: batch experiments for HSFC stratified sampling.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsfc/experiments.hpp"

namespace {

constexpr const char* kSeedVariable = "HSFC_SEED";

struct Options {
  hsfc::ExperimentSpec spec;
  std::vector<std::string> methods{"hsfc"};
  std::string scramble = "nested";
  bool seed_given = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--dim,-d", o.spec.dim, "dimension d")->check(CLI::PositiveNumber);
  cmd->add_option("--out,-o", o.spec.out, "output file (default: stdout)");
}

void add_sampling(CLI::App* cmd, Options& o) {
  cmd->add_option("--integrand", o.spec.integrand, "f1, f2 or f3");
  cmd->add_option("--method", o.methods, "mc, grid, hsfc or dnet (repeatable)")->take_all();
  cmd->add_option("--reps,-R", o.spec.reps, "replications");
  cmd->add_option("--seed", o.spec.seed,
                  std::string("master seed (default ") + std::to_string(o.spec.seed) + ", or $" +
                      kSeedVariable + ")")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--scramble", o.scramble, "nested or linear")
      ->check(CLI::IsMember({"nested", "linear"}));
  cmd->add_option("--jobs,-j", o.spec.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--dnet-table", o.spec.dnet_table, "direction-number file for dnet");
}

void finalize(Options& o, const std::string& command) {
  o.spec.command = command;
  if (!o.seed_given) {
    if (const char* env = std::getenv(kSeedVariable); env && *env) {
      try {
        std::size_t used = 0;
        o.spec.seed = std::stoull(env, &used);
        if (env[used] != '\0') throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument(std::string("$") + kSeedVariable + " is not an unsigned integer");
      }
    }
  }
  o.spec.methods.clear();
  for (const auto& m : o.methods) o.spec.methods.push_back(hsfc::parse_method(m));
  o.spec.scramble = hsfc::parse_scramble_kind(o.scramble);
}

template <class Write>
void emit(const std::string& path, Write write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

std::string summary_path(const std::string& csv) {
  if (csv.empty() || csv == "-") return {};
  const auto dot = csv.rfind('.');
  const auto slash = csv.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return csv.substr(0, dot) + ".json";
  }
  return csv + ".json";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert space-filling-curve sampling experiments"};
  app.require_subcommand(1);
  Options o;

  auto* decay = app.add_subcommand("variance-decay", "empirical variance against n = 2^m (CSV)");
  add_common(decay, o);
  add_sampling(decay, o);
  decay->add_option("--m-min", o.spec.m_min, "smallest m");
  decay->add_option("--m-max", o.spec.m_max, "largest m");

  auto* normality = app.add_subcommand(
      "normality", "standardized errors, density and normality statistics (CSV + JSON)");
  add_common(normality, o);
  add_sampling(normality, o);
  normality->add_option("--m", o.spec.m, "n = 2^m");

  auto* audit = app.add_subcommand("strata-audit", "per-stratum measure and diameter (JSON)");
  add_common(audit, o);
  audit->add_option("--m", o.spec.m, "n = 2^m strata");
  audit->add_option("--level,-K", o.spec.level, "curve level (default max(ceil(m/d),1))");

  auto* census = app.add_subcommand("boundary-census", "strata crossing a region boundary (CSV)");
  add_common(census, o);
  census->add_option("--region", o.spec.region, "sum-half, x1-plus-x2 or unit-cube");
  census->add_option("--m-min", o.spec.m_min, "smallest m");
  census->add_option("--m-max", o.spec.m_max, "largest m");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto registry = hsfc::IntegrandRegistry::with_builtins();
    if (decay->parsed()) {
      finalize(o, "variance-decay");
      const auto rows = hsfc::run_variance_decay(o.spec, registry);
      const auto f = registry.make(o.spec.integrand, o.spec.dim);
      emit(o.spec.out, [&](std::ostream& s) { hsfc::write_variance_decay_csv(o.spec, f, rows, s); });
    } else if (normality->parsed()) {
      finalize(o, "normality");
      const auto results = hsfc::run_normality(o.spec, registry);
      emit(o.spec.out, [&](std::ostream& s) { hsfc::write_normality_csv(o.spec, results, s); });
      const auto summary = hsfc::normality_summary(o.spec, results).dump(2);
      const auto path = summary_path(o.spec.out);
      if (path.empty()) {
        std::cerr << summary << '\n';
      } else {
        emit(path, [&](std::ostream& s) { s << summary << '\n'; });
      }
    } else if (audit->parsed()) {
      finalize(o, "strata-audit");
      const auto report = hsfc::run_strata_audit(o.spec);
      emit(o.spec.out, [&](std::ostream& s) { s << report.dump(2) << '\n'; });
    } else if (census->parsed()) {
      finalize(o, "boundary-census");
      const auto rows = hsfc::run_boundary_census(o.spec);
      emit(o.spec.out, [&](std::ostream& s) { hsfc::write_boundary_census_csv(o.spec, rows, s); });
    }
  } catch (const std::exception& e) {
    std::cerr << "hsfcmc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
