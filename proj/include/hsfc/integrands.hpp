#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hsfc {

using Evaluator = std::function<double(std::span<const double>)>;
using Membership = std::function<bool(std::span<const double>)>;

struct Integrand {
  std::string name;
  unsigned dim = 0;
  Evaluator evaluate;
  std::optional<double> exact_mean;
  std::optional<double> grad_sq_integral;  // sigma^2 = integral of |grad f|^2
  std::optional<double> lipschitz;         // modulus M
  std::optional<double> variance;          // Var f(X) for X uniform
  // Piecewise integrands f = g * 1{region}; both empty for smooth ones.
  Evaluator smooth_part;
  Membership region;
  std::string region_name;

  bool piecewise() const noexcept { return static_cast<bool>(region); }
  double operator()(std::span<const double> x) const { return evaluate(x); }
};

// 12^{d/2} prod (x_t - 1/2).
double f1(std::span<const double> x);
// (x_1 - x_2) 1{sum x >= d/2}; requires d >= 2.
double f2(std::span<const double> x);
// 1{sum x >= d/2}.
double f3(std::span<const double> x);

Integrand make_f1(unsigned d);
Integrand make_f2(unsigned d);  // std::invalid_argument if d < 2
Integrand make_f3(unsigned d);
Integrand make_constant(unsigned d, double value);

// Lipschitz modulus of f1 in the Euclidean norm bound used for the upper bound:
// 12^{d/2} 2^{1-d} d.
double f1_lipschitz(unsigned d);

// (sigma^2/96) 2^{-2/d-d} n^{-1-2/d}.
double hsfc_variance_lower_bound(double grad_sq_integral, unsigned d, double n);
// 4 M^2 (d+3) n^{-1-2/d}.
double hsfc_variance_upper_bound(double lipschitz, unsigned d, double n);
// sigma^2 / 12, the limit of n^{1+2/d} Var for grid stratification.
double grid_variance_limit(double grad_sq_integral, unsigned d);

struct BoundsReport {
  std::uint64_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_formula;
  std::string upper_formula;
};

// Requires grad_sq_integral and lipschitz; std::invalid_argument otherwise.
BoundsReport variance_bounds(const Integrand& f, std::uint64_t n);

class IntegrandRegistry {
 public:
  using Factory = std::function<Integrand(unsigned)>;

  // Registry preloaded with f1, f2, f3.
  static IntegrandRegistry with_builtins();

  void add(const std::string& name, Factory factory);
  bool contains(const std::string& name) const { return factories_.count(name) != 0; }
  // std::invalid_argument for an unknown name or an unsupported dimension.
  Integrand make(const std::string& name, unsigned d) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Factory> factories_;
};

}  // namespace hsfc
