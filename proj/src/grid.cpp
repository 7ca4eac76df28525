#include "anisofrac/grid.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace anisofrac {

Grid build_grid(double a, double b, double h, double collar) {
  if (!(b > a)) throw DomainError("build_grid: degenerate domain (need a < b)");
  if (!(h > 0.0)) throw DomainError("build_grid: mesh size must be positive");
  if (!(collar >= h)) throw DomainError("build_grid: collar width must be at least h");
  const double cells_real = (b - a) / h;
  const long cells = std::lround(cells_real);
  if (cells < 2 || std::abs(cells_real - cells) > 1e-9 * cells_real)
    throw DomainError("build_grid: h must divide the domain length into at least two cells");
  const long collar_cells = static_cast<long>(std::floor(collar / h + 1e-9));

  Grid g;
  g.a = a;
  g.b = b;
  g.h = (b - a) / cells;
  g.collar = collar;
  g.collar_cells = static_cast<int>(collar_cells);
  const long total = cells + 2 * collar_cells + 1;
  g.nodes.resize(total);
  g.dof_of_node.assign(total, -1);
  for (long k = 0; k < total; ++k) {
    const long offset = k - collar_cells;
    g.nodes[k] = (offset == cells) ? b : a + offset * g.h;
    if (offset > 0 && offset < cells) {
      g.dof_of_node[k] = static_cast<int>(g.node_of_dof.size());
      g.node_of_dof.push_back(static_cast<int>(k));
    }
  }
  return g;
}

std::vector<double> Grid::dof_coordinates() const {
  std::vector<double> out;
  out.reserve(node_of_dof.size());
  for (int k : node_of_dof) out.push_back(nodes[k]);
  return out;
}

bool Grid::element_in_domain(int e) const {
  const int first = collar_cells;
  const int last = node_count() - 1 - collar_cells;
  return e >= first && e + 1 <= last;
}

std::string Grid::id() const {
  std::ostringstream os;
  os << std::setprecision(10) << "grid1d(" << a << "," << b << ")-h" << h << "-W" << collar;
  return os.str();
}

}  // namespace anisofrac
