#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "degfem/mesh.hpp"

namespace degfem {

class InvalidRowSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class BlockOutOfRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class BandInconsistent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Alternating chain K_0, K~_1, K_1, ..., K~_N, K_N along the straight line Gamma.
struct Band {
  std::vector<int> odd_elements;                // K_0..K_N, longest edge on Gamma
  std::vector<int> even_elements;               // K~_1..K~_N, apex on Gamma
  std::vector<std::array<int, 2>> gamma_edges;  // vertex pairs, ordered along direction
  double length = 0.0;                          // L
  Vec2 direction{1.0, 0.0};                     // g
  double base_h = 0.0;
  double height = 0.0;                          // hbar
  int strip = -1;                               // generating strip, -1 if none

  int n() const { return static_cast<int>(even_elements.size()); }
};

struct BandCheck {
  bool alternation_ok = true;       // A_{K_i} off Gamma, A_{K~_i} on Gamma
  double collinearity_error = 0.0;  // max distance of Gamma vertices from the line, relative to L
  int first_alternation_failure = -1;
};

/// Structural checks throw BandInconsistent; the angle alternation is reported.
BandCheck check_band(const Triangulation& tri, const Band& band);

/// Vertex of the Gamma-side apex of K~_i (shared with K_{i-1} and K_i).
int tilde_apex(const Triangulation& tri, const Band& band, int i);

struct RowSpec {
  std::vector<double> y_levels;  // 0 = y_0 < ... < y_m = 1
  std::vector<int> parity;       // 0: x = i h, 1: x = 0, (i+1/2) h, 1
};

struct RowMesh {
  Triangulation mesh;
  std::vector<Band> bands;
  std::vector<int> cutoff_elements;    // half-base boundary elements of zig-zag strips
  std::vector<int> strip_of_element;
};

RowMesh row_mesh(const RowSpec& rows, double base_h);

/// n x n squares, each cut along the diagonal from (a,b) to (a+1,b+1).
Triangulation unit_square_uniform(int n);

/// Uniform rows of height 1/ny with alternating parity, base 1/nx.
RowMesh babuska_aziz(int nx, int ny);

struct SingleBandMesh {
  Triangulation mesh;
  Band band;
  int band_strip = -1;
  std::vector<int> strip_elements;   // every element of the thin strip
  double max_angle_outside = 0.0;    // over elements off the thin strip
  std::vector<Band> all_bands;
};

SingleBandMesh single_band_mesh(int nx, double hbar);

struct SubdividedBandMesh {
  Triangulation mesh;
  std::vector<int> tilde_elements;   // the K~ elements, left unsplit
  std::vector<int> split_elements;   // right-angled halves
  std::vector<std::array<int, 2>> gamma_edges;
  std::size_t source_count = 0;      // element count before splitting
  std::size_t split_sources = 0;     // number of elements that were split
  double base_h = 0.0;
  double height = 0.0;
};

SubdividedBandMesh subdivided_band_mesh(int nx, double hbar);

struct ClusterBlock {
  int i = 0;  // lower-left cell
  int j = 0;
  int k = 1;  // block is k x k cells
};

struct ClusterMesh {
  Triangulation mesh;
  std::vector<int> cluster;       // block rows plus the side fans
  double diameter = 0.0;          // of the whole cluster
  double block_diameter = 0.0;    // k sqrt(2) / n
  int n = 0;
  ClusterBlock block;
  int rows_in_block = 0;
};

ClusterMesh cluster_mesh(int n, ClusterBlock block, int rows_in_block);

struct ClusterTopology {
  bool edge_connected = false;
  int boundary_loops = 0;
  int euler_characteristic = 0;
  bool simply_connected() const { return edge_connected && boundary_loops == 1 && euler_characteristic == 1; }
};

ClusterTopology cluster_topology(const Triangulation& tri, const std::vector<int>& elements);

/// Largest distance between vertices of the given elements.
double element_set_diameter(const Triangulation& tri, const std::vector<int>& elements);

}  // namespace degfem
