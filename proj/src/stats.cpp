#include "hsfc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hsfc/hilbert.hpp"

namespace hsfc {

namespace {

constexpr std::size_t kDensityPoints = 512;

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Linearly interpolated quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// P(sum beta_t u_t <= g) for u uniform on the unit cube, beta_t > 0.
long double simplex_cdf(const std::vector<long double>& beta, long double g) {
  const std::size_t k = beta.size();
  long double total = 0.0L;
  for (auto b : beta) total += b;
  if (g <= 0.0L) return 0.0L;
  if (g >= total) return 1.0L;
  long double scale = 1.0L;
  for (std::size_t t = 0; t < k; ++t) scale *= beta[t] * static_cast<long double>(t + 1);
  long double sum = 0.0L;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << k); ++subset) {
    long double shifted = g;
    int sign = 1;
    for (std::size_t t = 0; t < k; ++t) {
      if ((subset >> t) & 1U) {
        shifted -= beta[t];
        sign = -sign;
      }
    }
    if (shifted > 0.0L) sum += sign * std::pow(shifted, static_cast<long double>(k));
  }
  return std::clamp(sum / scale, 0.0L, 1.0L);
}

}  // namespace

double empirical_variance(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("empirical variance needs at least 2 values");
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(values.size() - 1);
}

double empirical_variance(const ReplicationSet& set) { return empirical_variance(set.estimates); }

std::vector<double> standardized_errors(std::span<const double> estimates, double mu) {
  const double variance = empirical_variance(estimates);
  if (!(variance > 0.0)) {
    throw std::domain_error("standardized errors: zero empirical variance (degenerate estimator)");
  }
  const double sigma = std::sqrt(variance);
  std::vector<double> z;
  z.reserve(estimates.size());
  for (double e : estimates) z.push_back((e - mu) / sigma);
  return z;
}

std::vector<double> standardized_errors(const ReplicationSet& set, double mu) {
  return standardized_errors(set.estimates, mu);
}

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("bandwidth needs at least 2 values");
  const double sd = std::sqrt(empirical_variance(values));
  if (!(sd > 0.0)) throw std::domain_error("bandwidth: all values are equal");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

DensityCurve kde(std::span<const double> values, std::optional<double> bandwidth) {
  if (values.size() < 10) throw std::invalid_argument("kde needs at least 10 values");
  DensityCurve curve;
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
    curve.bandwidth = *bandwidth;
    curve.bandwidth_rule = "fixed";
  } else {
    curve.bandwidth = silverman_bandwidth(values);
    curve.bandwidth_rule = "silverman: 0.9*min(sd,IQR/1.34)*R^(-1/5)";
  }
  const double h = curve.bandwidth;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - 3 * h, hi = *hi_it + 3 * h;
  curve.x.resize(kDensityPoints);
  curve.density.assign(kDensityPoints, 0.0);
  const double step = (hi - lo) / static_cast<double>(kDensityPoints - 1);
  const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2 * std::numbers::pi));
  for (std::size_t k = 0; k < kDensityPoints; ++k) {
    const double x = lo + step * static_cast<double>(k);
    curve.x[k] = x;
    double s = 0.0;
    for (double v : values) {
      const double u = (x - v) / h;
      s += std::exp(-0.5 * u * u);
    }
    curve.density[k] = s * norm;
  }
  // Mass beyond +-3h and the trapezoid error leave the raw curve slightly
  // below 1; rescale so that the tabulated curve is a density.
  const double area = trapezoid(curve.x, curve.density);
  for (auto& y : curve.density) y /= area;
  return curve;
}

void VarianceCurve::add(VariancePoint point) {
  if (!points.empty() && point.n <= points.back().n) {
    throw std::invalid_argument("variance curve: n must be strictly increasing");
  }
  if (!(point.variance >= 0.0)) throw std::invalid_argument("variance curve: negative variance");
  points.push_back(point);
}

double loglog_slope(std::span<const double> n, std::span<const double> values) {
  if (n.size() != values.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  if (n.size() < 3) throw std::invalid_argument("loglog_slope needs at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(values[i] > 0.0)) {
      throw std::domain_error("loglog_slope: values must be positive");
    }
    const double x = std::log(n[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(n.size());
  const double denominator = k * sxx - sx * sx;
  if (!(denominator > 0.0)) throw std::domain_error("loglog_slope: n values are all equal");
  return (k * sxy - sx * sy) / denominator;
}

double loglog_slope(const VarianceCurve& curve, std::uint64_t n_min, std::uint64_t n_max) {
  std::vector<double> n, v;
  for (const auto& p : curve.points) {
    if (p.n < n_min || p.n > n_max) continue;
    n.push_back(static_cast<double>(p.n));
    v.push_back(p.variance);
  }
  return loglog_slope(n, v);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

NormalityReport normality_report(std::span<const double> z) {
  if (z.size() < 100) throw std::invalid_argument("normality report needs at least 100 values");
  NormalityReport r;
  r.count = z.size();
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = normal_cdf(sorted[i]);
    r.ks = std::max({r.ks, static_cast<double>(i + 1) / count - phi, phi - static_cast<double>(i) / count});
  }
  const double mean = mean_of(z);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : z) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= count;
  m3 /= count;
  m4 /= count;
  if (m2 > 0.0) {
    r.skewness = m3 / std::pow(m2, 1.5);
    r.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Regions

double Region::box_volume(std::span<const double>, std::span<const double>) const {
  throw std::domain_error("region '" + name() + "' has no exact volume routine");
}

HalfSpace::HalfSpace(std::vector<double> normal, double offset, std::string name)
    : normal_(std::move(normal)), offset_(offset), name_(std::move(name)) {
  if (normal_.empty()) throw std::invalid_argument("half-space needs d >= 1");
}

bool HalfSpace::contains(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t t = 0; t < normal_.size(); ++t) s += normal_[t] * x[t];
  return s >= offset_;
}

double HalfSpace::box_volume(std::span<const double> lo, std::span<const double> hi) const {
  // x = lo + w u with u in the unit cube: a.x >= c  <=>  sum b_t u_t >= g.
  long double box = 1.0L;
  long double g = offset_;
  std::vector<long double> beta;
  for (std::size_t t = 0; t < normal_.size(); ++t) {
    const long double w = static_cast<long double>(hi[t]) - lo[t];
    box *= w;
    g -= static_cast<long double>(normal_[t]) * lo[t];
    const long double b = normal_[t] * w;
    if (b > 0.0L) {
      beta.push_back(b);
    } else if (b < 0.0L) {
      beta.push_back(-b);  // u -> 1 - u
      g -= b;
    }
  }
  if (box == 0.0L) return 0.0;
  long double total = 0.0L;
  for (auto b : beta) total += b;
  // P(sum beta u >= g) = P(sum beta u <= total - g); use the smaller argument.
  const long double above =
      g <= total / 2 ? 1.0L - simplex_cdf(beta, g) : simplex_cdf(beta, total - g);
  if (beta.empty()) return g <= 0.0L ? static_cast<double>(box) : 0.0;
  return static_cast<double>(box * above);
}

Ball::Ball(std::vector<double> center, double radius, std::string name)
    : center_(std::move(center)), radius_(radius), name_(std::move(name)) {
  if (center_.empty()) throw std::invalid_argument("ball needs d >= 1");
  if (!(radius_ >= 0.0)) throw std::invalid_argument("ball radius must be non-negative");
}

bool Ball::contains(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t t = 0; t < center_.size(); ++t) s += (x[t] - center_[t]) * (x[t] - center_[t]);
  return s <= radius_ * radius_;
}

std::vector<std::string> region_names() { return {"sum-half", "x1-plus-x2", "unit-cube", "ball"}; }

std::unique_ptr<Region> make_region(const std::string& name, unsigned d) {
  if (d == 0) throw std::invalid_argument("region dimension must be >= 1");
  if (name == "sum-half") {
    return std::make_unique<HalfSpace>(std::vector<double>(d, 1.0), 0.5 * d, name);
  }
  if (name == "x1-plus-x2") {
    if (d < 2) throw std::invalid_argument("x1-plus-x2 needs d >= 2");
    std::vector<double> a(d, 0.0);
    a[0] = a[1] = 1.0;
    return std::make_unique<HalfSpace>(std::move(a), 1.0, name);
  }
  if (name == "unit-cube") return std::make_unique<HalfSpace>(std::vector<double>(d, 0.0), 0.0, name);
  if (name == "ball") return std::make_unique<Ball>(std::vector<double>(d, 0.5), 0.5, name);
  throw std::invalid_argument("unknown region '" + name + "'");
}

// ---------------------------------------------------------------------------
// Boundary census

BoundaryCensus boundary_census(const Region& omega, unsigned m) {
  if (!omega.exact_volumes()) {
    throw std::domain_error("boundary census: region '" + omega.name() + "' has no exact volumes");
  }
  const unsigned d = omega.dim();
  const unsigned level = geometry_level(d, m);
  const unsigned bits = d * level;
  if (bits > kMaxHilbertLevel) throw std::invalid_argument("boundary census: too many cells");
  BoundaryCensus census;
  census.dim = d;
  census.m = m;
  census.n = std::uint64_t{1} << m;
  const std::uint64_t cells = std::uint64_t{1} << bits;
  const unsigned per_stratum_bits = bits - m;
  const double side = std::ldexp(1.0, -static_cast<int>(level));
  const double cell_volume = std::ldexp(1.0, -static_cast<int>(bits));
  const double n = static_cast<double>(census.n);

  std::vector<std::uint64_t> chunks(level), coords(d);
  std::vector<double> lo(d), hi(d);
  double stratum_volume = 0.0;
  bool any_full = false, any_empty = false, any_partial = false;
  for (std::uint64_t h = 0; h < cells; ++h) {
    for (unsigned l = 0; l < level; ++l) {
      chunks[l] = (h >> (d * (level - 1 - l))) & ((std::uint64_t{1} << d) - 1);
    }
    decode_chunks(chunks, d, coords);
    for (unsigned t = 0; t < d; ++t) {
      lo[t] = static_cast<double>(coords[t]) * side;
      hi[t] = lo[t] + side;
    }
    const double v = omega.box_volume(lo, hi);
    stratum_volume += v;
    if (v >= cell_volume) {
      any_full = true;
    } else if (v <= 0.0) {
      any_empty = true;
    } else {
      any_partial = true;
    }
    if (((h + 1) & ((std::uint64_t{1} << per_stratum_bits) - 1)) != 0) continue;
    // Last cell of stratum h >> per_stratum_bits.
    census.omega_volume += stratum_volume;
    if (any_partial || (any_full && any_empty)) {
      ++census.boundary;
      const double p = n * stratum_volume;
      census.boundary_variances.push_back(p * (1.0 - p));
    } else if (any_full) {
      ++census.interior;
    } else {
      ++census.exterior;
    }
    stratum_volume = 0.0;
    any_full = any_empty = any_partial = false;
  }
  return census;
}

double census_rate_check(std::span<const BoundaryCensus> censuses) {
  if (censuses.size() < 3) throw std::invalid_argument("census rate needs at least 3 levels");
  std::vector<double> n, count;
  for (const auto& c : censuses) {
    if (c.boundary == 0) continue;
    n.push_back(static_cast<double>(c.n));
    count.push_back(static_cast<double>(c.boundary));
  }
  if (n.size() < 3) return 0.0;
  return loglog_slope(n, count);
}

}  // namespace hsfc
