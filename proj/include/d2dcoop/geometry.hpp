#pragma once

#include <cstdint>
#include <random>

namespace d2dcoop {

// Square hotspot of side `hotspot_side` split into a grid of B cells.
// For non-square B the grid falls back to the closest rectangular factorization;
// `cell_side` is always the analytic square-cell side hotspot_side / sqrt(B).
struct ClusterLayout {
  double hotspot_side = 0.0;
  int cluster_count = 0;
  int grid_x = 0;  // columns
  int grid_y = 0;  // rows
  double cell_width = 0.0;
  double cell_height = 0.0;
  double cell_side = 0.0;  // hotspot_side / sqrt(cluster_count)
};

ClusterLayout build_layout(double hotspot_side, int cluster_count);

// Distance density between two uniform points in a unit square; support [0, sqrt(2)].
double intra_pdf(double r);

// Distance density between uniform points in horizontally adjacent unit squares;
// support [0, sqrt(5)].
double inter_pdf(double r);

// Direct geometric samplers for the two densities above (unit-square scale).
double sample_intra(std::mt19937_64& rng);
double sample_inter(std::mt19937_64& rng);

// Path-loss moments of the signal and interference link distances with a
// near-field cutoff r_min (normalized by the cell side):
//   q1 = int_{r_min}^{sqrt 2} r^-alpha g(r) dr + 8 int_{r_min}^{sqrt 5} r^-alpha f(r) dr
//   q2 = int_{r_min}^{sqrt 5} r^-alpha f(r) dr
double q1(double alpha, double r_min);
double q2(double alpha, double r_min);

// Uniform double in [0,1) from the top 53 bits of the engine output.
// Used everywhere instead of std::uniform_real_distribution so that streams
// are identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace d2dcoop
