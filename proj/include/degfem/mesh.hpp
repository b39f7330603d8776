#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "degfem/geometry.hpp"

namespace degfem {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NonConforming : public MeshError {
 public:
  using MeshError::MeshError;
};
class InvertedElement : public MeshError {
 public:
  using MeshError::MeshError;
};
class DuplicateVertex : public MeshError {
 public:
  using MeshError::MeshError;
};

using Triangle = std::array<int, 3>;

/// Sorted vertex pair; orientation-free edge identity.
struct EdgeKey {
  int lo = 0;
  int hi = 0;
  EdgeKey() = default;
  EdgeKey(int a, int b) : lo(a < b ? a : b), hi(a < b ? b : a) {}
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct Edge {
  EdgeKey key;
  std::array<int, 2> triangles{-1, -1};  // second is -1 on the boundary
  bool boundary() const { return triangles[1] < 0; }
};

struct BoundingBox {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diameter() const;
};

/// Conforming triangulation of an axis-aligned rectangle; immutable after build().
class Triangulation {
 public:
  Triangulation() = default;

  /// Validates conformity, orientation, vertex uniqueness and area coverage.
  static Triangulation build(std::vector<Point2> vertices, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  Point2 vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Triangle& triangle(int k) const { return triangles_[static_cast<std::size_t>(k)]; }
  const TriangleGeom& geom(int k) const { return geoms_[static_cast<std::size_t>(k)]; }
  const std::vector<TriangleGeom>& geoms() const { return geoms_; }

  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<int> edge_index(int a, int b) const;
  bool is_boundary_vertex(int v) const { return boundary_flags_[static_cast<std::size_t>(v)] != 0; }
  std::size_t num_boundary_vertices() const;
  std::size_t num_interior_edges() const;
  std::size_t num_boundary_edges() const;

  /// Triangles incident to each vertex (CSR-style lists).
  const std::vector<std::vector<int>>& vertex_triangles() const { return vertex_triangles_; }

  double mesh_size() const { return mesh_size_; }
  const BoundingBox& bounds() const { return bounds_; }
  double total_area() const { return total_area_; }

 private:
  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<TriangleGeom> geoms_;
  std::vector<Edge> edges_;
  std::map<EdgeKey, int> edge_lookup_;
  std::vector<char> boundary_flags_;
  std::vector<std::vector<int>> vertex_triangles_;
  BoundingBox bounds_;
  double mesh_size_ = 0.0;
  double total_area_ = 0.0;
};

struct MeshClassification {
  double alpha0 = 0.0;
  std::vector<int> t1;  // max angle <= alpha0
  std::vector<int> t2;  // max angle > alpha0
};

MeshClassification classify(const Triangulation& tri, double alpha0);

// Native text format: "nv nt", nv lines "x y", nt lines "i0 i1 i2" (0-based).
void write_mesh(std::ostream& os, const Triangulation& tri);
Triangulation read_mesh(std::istream& is);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_shortest(double v);

}  // namespace degfem
