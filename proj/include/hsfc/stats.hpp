#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsfc/estimators.hpp"

namespace hsfc {

// (1/(R-1)) sum (x - mean)^2; std::invalid_argument for fewer than 2 values.
double empirical_variance(std::span<const double> values);
double empirical_variance(const ReplicationSet& set);

// (estimate - mu) / sigma_hat; std::domain_error when the variance is zero.
std::vector<double> standardized_errors(std::span<const double> estimates, double mu);
std::vector<double> standardized_errors(const ReplicationSet& set, double mu);

struct DensityCurve {
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;
  std::string bandwidth_rule;
};

// Gaussian kernel density on 512 points over [min - 3h, max + 3h], scaled to
// unit trapezoid integral. Default h = 0.9 min(sd, IQR/1.34) R^{-1/5}, falling
// back to sd when the IQR is zero. Needs >= 10 values that are not all equal.
DensityCurve kde(std::span<const double> values, std::optional<double> bandwidth = std::nullopt);
double silverman_bandwidth(std::span<const double> values);
double trapezoid(std::span<const double> x, std::span<const double> y);

struct VariancePoint {
  std::uint64_t n = 0;
  double variance = 0.0;
  std::size_t replications = 0;
};

struct VarianceCurve {
  std::string method;
  std::string integrand;
  std::vector<VariancePoint> points;

  // Requires n strictly above the previous point and variance >= 0.
  void add(VariancePoint point);
};

// Least-squares slope of log variance against log n over the points with
// n in [n_min, n_max]. Needs at least 3 such points, all with variance > 0.
double loglog_slope(const VarianceCurve& curve, std::uint64_t n_min = 0,
                    std::uint64_t n_max = UINT64_MAX);
double loglog_slope(std::span<const double> n, std::span<const double> values);

struct NormalityReport {
  std::size_t count = 0;
  double ks = 0.0;  // sup |F_R - Phi|
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

// Needs >= 100 values.
NormalityReport normality_report(std::span<const double> z);
double normal_cdf(double x);

// A region Omega of the unit cube. Membership is always available; exact
// volumes of Omega within axis-aligned boxes only for some regions.
class Region {
 public:
  virtual ~Region() = default;
  virtual std::string name() const = 0;
  virtual unsigned dim() const = 0;
  virtual bool contains(std::span<const double> x) const = 0;
  virtual bool exact_volumes() const { return false; }
  // lambda(Omega within [lo, hi]); std::domain_error unless exact_volumes().
  virtual double box_volume(std::span<const double> lo, std::span<const double> hi) const;
};

// {x : a.x >= c}.
class HalfSpace : public Region {
 public:
  HalfSpace(std::vector<double> normal, double offset, std::string name = "halfspace");

  std::string name() const override { return name_; }
  unsigned dim() const override { return static_cast<unsigned>(normal_.size()); }
  bool contains(std::span<const double> x) const override;
  bool exact_volumes() const override { return true; }
  double box_volume(std::span<const double> lo, std::span<const double> hi) const override;

  std::span<const double> normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }

 private:
  std::vector<double> normal_;
  double offset_;
  std::string name_;
};

// Euclidean ball; membership only.
class Ball : public Region {
 public:
  Ball(std::vector<double> center, double radius, std::string name = "ball");

  std::string name() const override { return name_; }
  unsigned dim() const override { return static_cast<unsigned>(center_.size()); }
  bool contains(std::span<const double> x) const override;

 private:
  std::vector<double> center_;
  double radius_;
  std::string name_;
};

// Named regions: "sum-half" {sum x >= d/2}, "x1-plus-x2" {x1 + x2 >= 1},
// "unit-cube" (all of [0,1]^d), "ball" (centre 1/2, radius 1/2).
std::unique_ptr<Region> make_region(const std::string& name, unsigned d);
std::vector<std::string> region_names();

struct BoundaryCensus {
  unsigned dim = 0;
  unsigned m = 0;
  std::uint64_t n = 0;
  std::uint64_t interior = 0;   // lambda(E_i within Omega) = 1/n
  std::uint64_t boundary = 0;   // 0 < lambda(E_i within Omega) < 1/n
  std::uint64_t exterior = 0;
  std::vector<double> boundary_variances;  // p(1-p), p = n lambda(E_i within Omega)
  double omega_volume = 0.0;               // sum over strata of lambda(E_i within Omega)
};

// Exact census of the n = 2^m HSFC strata against Omega, using level
// max(ceil(m/d), 1) cells. std::domain_error for regions without exact volumes.
BoundaryCensus boundary_census(const Region& omega, unsigned m);

// Slope of log |T_bdy| against log n; 0 when every census has an empty
// boundary. Needs >= 3 censuses.
double census_rate_check(std::span<const BoundaryCensus> censuses);

}  // namespace hsfc
