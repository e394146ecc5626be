#include "hsfc/integrands.hpp"

#include <cmath>
#include <stdexcept>

namespace hsfc {

namespace {

void check_dim(unsigned d) {
  if (d == 0) throw std::invalid_argument("integrand dimension must be >= 1");
}

double half_sum_margin(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s - 0.5 * static_cast<double>(x.size());
}

double rate_factor(unsigned d, double n) {
  return std::pow(n, -1.0 - 2.0 / static_cast<double>(d));
}

}  // namespace

double f1(std::span<const double> x) {
  double p = std::pow(12.0, 0.5 * static_cast<double>(x.size()));
  for (double v : x) p *= v - 0.5;
  return p;
}

double f2(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("f2 needs d >= 2");
  return half_sum_margin(x) >= 0.0 ? x[0] - x[1] : 0.0;
}

double f3(std::span<const double> x) { return half_sum_margin(x) >= 0.0 ? 1.0 : 0.0; }

double f1_lipschitz(unsigned d) {
  return std::pow(12.0, 0.5 * d) * std::ldexp(1.0, 1 - static_cast<int>(d)) * d;
}

Integrand make_f1(unsigned d) {
  check_dim(d);
  const double scale = std::pow(12.0, 0.5 * d);
  Integrand f;
  f.name = "f1";
  f.dim = d;
  f.evaluate = [scale](std::span<const double> x) {
    double p = scale;
    for (double v : x) p *= v - 0.5;
    return p;
  };
  f.exact_mean = 0.0;
  f.grad_sq_integral = 12.0 * d;
  f.lipschitz = f1_lipschitz(d);
  f.variance = 1.0;
  return f;
}

Integrand make_f2(unsigned d) {
  if (d < 2) throw std::invalid_argument("f2 needs d >= 2, got " + std::to_string(d));
  Integrand f;
  f.name = "f2";
  f.dim = d;
  f.evaluate = [](std::span<const double> x) { return f2(x); };
  f.smooth_part = [](std::span<const double> x) { return x[0] - x[1]; };
  f.region = [](std::span<const double> x) { return half_sum_margin(x) >= 0.0; };
  f.region_name = "sum-half";
  f.exact_mean = 0.0;
  f.variance = 1.0 / 12.0;
  return f;
}

Integrand make_f3(unsigned d) {
  check_dim(d);
  Integrand f;
  f.name = "f3";
  f.dim = d;
  f.evaluate = [](std::span<const double> x) { return f3(x); };
  f.smooth_part = [](std::span<const double>) { return 1.0; };
  f.region = [](std::span<const double> x) { return half_sum_margin(x) >= 0.0; };
  f.region_name = "sum-half";
  f.exact_mean = 0.5;
  f.variance = 0.25;
  return f;
}

Integrand make_constant(unsigned d, double value) {
  check_dim(d);
  Integrand f;
  f.name = "constant";
  f.dim = d;
  f.evaluate = [value](std::span<const double>) { return value; };
  f.exact_mean = value;
  f.grad_sq_integral = 0.0;
  f.lipschitz = 0.0;
  f.variance = 0.0;
  return f;
}

double hsfc_variance_lower_bound(double grad_sq_integral, unsigned d, double n) {
  check_dim(d);
  const double dd = static_cast<double>(d);
  return grad_sq_integral / 96.0 * std::exp2(-2.0 / dd - dd) * rate_factor(d, n);
}

double hsfc_variance_upper_bound(double lipschitz, unsigned d, double n) {
  check_dim(d);
  return 4.0 * lipschitz * lipschitz * (d + 3.0) * rate_factor(d, n);
}

double grid_variance_limit(double grad_sq_integral, unsigned d) {
  check_dim(d);
  return grad_sq_integral / 12.0;
}

BoundsReport variance_bounds(const Integrand& f, std::uint64_t n) {
  if (!f.grad_sq_integral || !f.lipschitz) {
    throw std::invalid_argument("variance bounds for '" + f.name +
                                "' need sigma^2 and a Lipschitz modulus");
  }
  BoundsReport r;
  r.n = n;
  r.lower = hsfc_variance_lower_bound(*f.grad_sq_integral, f.dim, static_cast<double>(n));
  r.upper = hsfc_variance_upper_bound(*f.lipschitz, f.dim, static_cast<double>(n));
  r.lower_formula = "(sigma^2/96) 2^(-2/d-d) n^(-1-2/d)";
  r.upper_formula = "4 M^2 (d+3) n^(-1-2/d)";
  return r;
}

IntegrandRegistry IntegrandRegistry::with_builtins() {
  IntegrandRegistry r;
  r.add("f1", make_f1);
  r.add("f2", make_f2);
  r.add("f3", make_f3);
  return r;
}

void IntegrandRegistry::add(const std::string& name, Factory factory) {
  factories_[name] = std::move(factory);
}

Integrand IntegrandRegistry::make(const std::string& name, unsigned d) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw std::invalid_argument("unknown integrand '" + name + "'");
  return it->second(d);
}

std::vector<std::string> IntegrandRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, factory] : factories_) out.push_back(name);
  return out;
}

}  // namespace hsfc
