#include "d2dcoop/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace d2dcoop {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt5 = 2.2360679774997896;
}  // namespace

ClusterLayout build_layout(double hotspot_side, int cluster_count) {
  if (cluster_count < 1) throw std::domain_error("cluster_count must be >= 1");
  if (!(hotspot_side > 0.0)) throw std::domain_error("hotspot_side must be > 0");
  ClusterLayout l;
  l.hotspot_side = hotspot_side;
  l.cluster_count = cluster_count;
  // Largest divisor of B not exceeding sqrt(B); exact for perfect squares.
  int gx = static_cast<int>(std::sqrt(static_cast<double>(cluster_count)));
  while (gx > 1 && cluster_count % gx != 0) --gx;
  l.grid_x = gx;
  l.grid_y = cluster_count / gx;
  l.cell_width = hotspot_side / l.grid_x;
  l.cell_height = hotspot_side / l.grid_y;
  l.cell_side = hotspot_side / std::sqrt(static_cast<double>(cluster_count));
  return l;
}

double intra_pdf(double r) {
  if (r <= 0.0 || r >= kSqrt2) return 0.0;
  if (r < 1.0) return 2.0 * r * (r * r - 4.0 * r + M_PI);
  const double e = std::sqrt(r * r - 1.0);
  return 8.0 * r * e - 2.0 * r * (r * r + 2.0) +
         4.0 * r * (std::asin(1.0 / r) - std::acos(1.0 / r));
}

double inter_pdf(double r) {
  if (r <= 0.0 || r >= kSqrt5) return 0.0;
  if (r < 1.0) return 2.0 * r * r - r * r * r;
  if (r < kSqrt2) {
    // The 3r linear term makes the density continuous at r = 1
    // (validated against the geometric sampler).
    const double e = std::sqrt(r * r - 1.0);
    return 2.0 * r * r * r - 4.0 * r * r + 3.0 * r - 4.0 * r * e +
           4.0 * r * std::acos(1.0 / r);
  }
  if (r < 2.0) {
    const double e = std::sqrt(r * r - 1.0);
    return 4.0 * r * e + 4.0 * r * std::asin(1.0 / r) - r - 4.0 * r * r;
  }
  const double e = std::sqrt(r * r - 1.0);
  const double xi = std::sqrt(r * r - 4.0);
  return -5.0 * r - r * r * r + 4.0 * r * e -
         4.0 * r * (std::acos(2.0 / r) - std::asin(1.0 / r)) + 2.0 * r * xi;
}

double sample_intra(std::mt19937_64& rng) {
  const double dx = uniform01(rng) - uniform01(rng);
  const double dy = uniform01(rng) - uniform01(rng);
  return std::hypot(dx, dy);
}

double sample_inter(std::mt19937_64& rng) {
  const double dx = (1.0 + uniform01(rng)) - uniform01(rng);
  const double dy = uniform01(rng) - uniform01(rng);
  return std::hypot(dx, dy);
}

namespace {

// Piecewise integration with splits at the density branch points, so the
// adaptive rule only ever sees smooth integrands.
template <typename F>
double integrate_pieces(const F& f, double lo, const double* breaks, int n_breaks,
                        double hi) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  double a = lo;
  for (int i = 0; i <= n_breaks; ++i) {
    const double b = (i < n_breaks) ? breaks[i] : hi;
    if (b <= a) continue;
    total += gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-9);
    a = b;
  }
  return total;
}

void check_q_args(double alpha, double r_min) {
  if (!(r_min > 0.0) || r_min >= 1.0)
    throw std::domain_error("r_min must be in (0, 1); the integrals diverge at 0");
  (void)alpha;  // alpha < 2 is allowed; the integrals are finite for any alpha with r_min > 0
}

}  // namespace

double q2(double alpha, double r_min) {
  check_q_args(alpha, r_min);
  static const double breaks[] = {1.0, kSqrt2, 2.0};
  return integrate_pieces(
      [alpha](double r) { return std::pow(r, -alpha) * inter_pdf(r); }, r_min, breaks, 3,
      kSqrt5);
}

double q1(double alpha, double r_min) {
  check_q_args(alpha, r_min);
  static const double breaks[] = {1.0};
  const double intra = integrate_pieces(
      [alpha](double r) { return std::pow(r, -alpha) * intra_pdf(r); }, r_min, breaks, 1,
      kSqrt2);
  return intra + 8.0 * q2(alpha, r_min);
}

}  // namespace d2dcoop
