#pragma once

#include "anisofrac/core.hpp"

#include <string>
#include <vector>

namespace anisofrac {

/// Uniform 1-D mesh over the collar-extended domain [a - W, b + W].
///
/// Nodes strictly inside (a, b) are the unknowns; boundary and collar nodes
/// carry the homogeneous volume constraint.
struct Grid {
  int dimension = 1;
  double a = -1.0;
  double b = 1.0;
  double h = 0.0;
  double collar = 0.0;
  /// Node coordinates, left to right, node k at a + (k - collar_cells) h.
  std::vector<double> nodes;
  int collar_cells = 0;
  /// Interior dof index of each node, -1 for constrained nodes.
  std::vector<int> dof_of_node;
  /// Node index of each interior dof.
  std::vector<int> node_of_dof;

  int dof_count() const { return static_cast<int>(node_of_dof.size()); }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return node_count() - 1; }
  double left() const { return nodes.front(); }
  double right() const { return nodes.back(); }
  std::vector<double> dof_coordinates() const;
  /// True when element e = [nodes[e], nodes[e+1]] lies inside [a, b].
  bool element_in_domain(int e) const;
  std::string id() const;
};

Grid build_grid(double a, double b, double h, double collar);

/// Coefficients over the interior dofs of a grid; constrained values are zero.
struct DiscreteFunction {
  std::string grid_id;
  Vector coefficients;
};

}  // namespace anisofrac
