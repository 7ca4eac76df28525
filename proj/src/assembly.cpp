#include "anisofrac/assembly.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anisofrac {

namespace {

double antiderivative(double t, double s) {
  const double a = std::pow(std::abs(t), 1.0 - s) / (1.0 - s);
  return t < 0.0 ? -a : a;
}

void require_1d(const Grid& grid, const char* who) {
  if (grid.dimension != 1) throw DomainError(std::string(who) + ": only 1-D grids are supported");
}

// Maps [0,1] onto itself with vanishing derivatives of order < degree at both ends.
struct Sigmoid {
  int degree;
  double map(double tau) const {
    const double a = std::pow(tau, degree);
    const double b = std::pow(1.0 - tau, degree);
    return a / (a + b);
  }
  double jacobian(double tau) const {
    const double a = std::pow(tau, degree);
    const double b = std::pow(1.0 - tau, degree);
    const double da = degree * std::pow(tau, degree - 1);
    const double db = -degree * std::pow(1.0 - tau, degree - 1);
    return (da * b - a * db) / ((a + b) * (a + b));
  }
};

void add_sigmoid_panel(double a, double b, int order, std::vector<double>& x, std::vector<double>& w) {
  const Sigmoid sig{4};
  const QuadratureRule& rule = gauss_legendre(order);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double tau = 0.5 * (1.0 + rule.nodes[k]);
    x.push_back(a + (b - a) * sig.map(tau));
    w.push_back(0.5 * rule.weights[k] * (b - a) * sig.jacobian(tau));
  }
}

void add_gauss_panel(double a, double b, int order, std::vector<double>& x, std::vector<double>& w) {
  const QuadratureRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    x.push_back(0.5 * (a + b) + half * rule.nodes[k]);
    w.push_back(half * rule.weights[k]);
  }
}

// Value and slope of phi_node on element e = [nodes[e], nodes[e+1]].
struct LocalHat {
  int dof;
  double slope;
  double value_at_left;
};

int element_hats(const Grid& grid, int e, LocalHat out[2]) {
  int count = 0;
  const int left_dof = grid.dof_of_node[e];
  const int right_dof = grid.dof_of_node[e + 1];
  if (left_dof >= 0) out[count++] = {left_dof, -1.0 / grid.h, 1.0};
  if (right_dof >= 0) out[count++] = {right_dof, 1.0 / grid.h, 0.0};
  return count;
}

// Contribution of the element pair (e, f) to row `dof` of K_iso, added into `row`.
void add_pair(const Grid& grid, const KernelSpec& spec, int dof, int e, int f, double factor, Vector& row) {
  const double s = spec.s;
  const double half_c = 0.5 * spec.c_ns;
  const double h = grid.h;
  LocalHat he[2];
  LocalHat hf[2];
  const int ne = element_hats(grid, e, he);
  const int nf = element_hats(grid, f, hf);
  if (ne + nf == 0) return;

  // Collect the dofs active on E union F with their slopes on each element.
  struct Active {
    int dof;
    double slope_e, slope_f, left_e, left_f;
  };
  Active act[4];
  int na = 0;
  auto find_or_add = [&](int d) -> Active& {
    for (int k = 0; k < na; ++k)
      if (act[k].dof == d) return act[k];
    act[na] = {d, 0.0, 0.0, 0.0, 0.0};
    return act[na++];
  };
  for (int k = 0; k < ne; ++k) {
    Active& a = find_or_add(he[k].dof);
    a.slope_e = he[k].slope;
    a.left_e = he[k].value_at_left;
  }
  for (int k = 0; k < nf; ++k) {
    Active& a = find_or_add(hf[k].dof);
    a.slope_f = hf[k].slope;
    a.left_f = hf[k].value_at_left;
  }
  int me = -1;
  for (int k = 0; k < na; ++k)
    if (act[k].dof == dof) me = k;
  if (me < 0) return;

  const int gap = std::abs(e - f);
  if (gap == 0) {
    const double moment = 2.0 * std::pow(h, 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
    for (int k = 0; k < na; ++k)
      row(act[k].dof) += factor * half_c * act[me].slope_e * act[k].slope_e * moment;
    return;
  }
  if (gap == 1) {
    // Shared node x0: x = x0 + se xi on E, y = x0 + sf eta on F, |x - y| = xi + eta.
    // Splitting the square along xi = eta leaves an exact radial factor.
    const double se = (f > e) ? -1.0 : 1.0;
    const double sf = -se;
    double coef_a[4];
    double coef_b[4];
    for (int k = 0; k < na; ++k) {
      coef_a[k] = se * act[k].slope_e;
      coef_b[k] = -sf * act[k].slope_f;
    }
    const QuadratureRule& rule = gauss_legendre(20);
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = 0.5 * (1.0 + rule.nodes[q]);
      const double wq = 0.5 * rule.weights[q] * std::pow(1.0 + u, -1.0 - 2.0 * s);
      const double pm1 = coef_a[me] + coef_b[me] * u;
      const double pm2 = coef_a[me] * u + coef_b[me];
      for (int k = 0; k < na; ++k) {
        acc[k] += wq * (pm1 * (coef_a[k] + coef_b[k] * u) + pm2 * (coef_a[k] * u + coef_b[k]));
      }
    }
    const double radial = std::pow(h, 3.0 - 2.0 * s) / (3.0 - 2.0 * s);
    for (int k = 0; k < na; ++k) row(act[k].dof) += factor * half_c * radial * acc[k];
    return;
  }
  const int order = gap == 2 ? 10 : gap == 3 ? 8 : gap <= 8 ? 6 : 4;
  const QuadratureRule& rule = gauss_legendre(order);
  const double xe = grid.nodes[e];
  const double xf = grid.nodes[f];
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t p = 0; p < rule.nodes.size(); ++p) {
    const double ue = 0.5 * h * (1.0 + rule.nodes[p]);
    const double wp = 0.5 * h * rule.weights[p];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double uf = 0.5 * h * (1.0 + rule.nodes[q]);
      const double wq = 0.5 * h * rule.weights[q];
      const double r = std::abs((xe + ue) - (xf + uf));
      const double kern = wp * wq * std::pow(r, -1.0 - 2.0 * s);
      auto psi = [&](int k) {
        const double phi_x = act[k].left_e + act[k].slope_e * ue;
        const double phi_y = act[k].left_f + act[k].slope_f * uf;
        return phi_x - phi_y;
      };
      const double pm = psi(me);
      for (int k = 0; k < na; ++k) acc[k] += kern * pm * psi(k);
    }
  }
  for (int k = 0; k < na; ++k) row(act[k].dof) += factor * half_c * acc[k];
}

}  // namespace

VelocityField constant_velocity(int n, double speed) {
  VelocityField v;
  v.dimension = n;
  Point c = Point::Zero(n);
  c(0) = speed;
  v.eval = [c](const Point&) { return c; };
  std::ostringstream os;
  os << "constant-velocity-" << speed;
  v.id = os.str();
  return v;
}

Matrix assemble_mass(const Grid& grid) {
  require_1d(grid, "assemble_mass");
  const int n = grid.dof_count();
  Matrix m = Matrix::Zero(n, n);
  const double h = grid.h;
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * h / 3.0;
    const int node = grid.node_of_dof[i];
    const int right = grid.dof_of_node[node + 1];
    if (right >= 0) {
      m(i, right) = h / 6.0;
      m(right, i) = h / 6.0;
    }
  }
  return m;
}

double hat_weighted_gradient(const KernelSpec& spec, double node, double h, double x) {
  const double s = spec.s;
  const double c = spec.c_omega / (s * h);
  return c * (2.0 * antiderivative(node - x, s) - antiderivative(node - h - x, s) - antiderivative(node + h - x, s));
}

GradientSamples sample_weighted_gradients(const Grid& grid, const KernelSpec& spec, const QuadratureBudget& budget,
                                          Execution execution) {
  require_1d(grid, "sample_weighted_gradients");
  if (spec.n != 1) throw DomainError("sample_weighted_gradients: kernel dimension must be 1");
  budget.validate();
  GradientSamples out;
  const int lo = grid.collar_cells;
  const int hi = grid.node_count() - 1 - grid.collar_cells;
  const int singular_order = 3 * budget.base_order;
  const int smooth_order = budget.base_order;
  for (int e = 0; e < grid.element_count(); ++e) {
    const double a = grid.nodes[e];
    const double b = grid.nodes[e + 1];
    if (e + 1 >= lo && e <= hi)
      add_sigmoid_panel(a, b, singular_order, out.points, out.weights);
    else
      add_gauss_panel(a, b, smooth_order, out.points, out.weights);
  }
  // Far field on both sides: geometric panels, then the |x|^{-(2+2s)} power-law tail.
  const double span = grid.right() - grid.left();
  const double center = 0.5 * (grid.left() + grid.right());
  const double far = 1e4 * span;
  const double q = std::pow(2.0, 1.0 / budget.panels_per_annulus);
  for (int side = 0; side < 2; ++side) {
    const double edge = side == 0 ? grid.right() : grid.left();
    const double sign = side == 0 ? 1.0 : -1.0;
    double d0 = 0.0;
    double d1 = span / 8.0;
    while (d0 < far) {
      const double a = edge + sign * d0;
      const double b = edge + sign * std::min(d1, far);
      add_gauss_panel(std::min(a, b), std::max(a, b), smooth_order + 2, out.points, out.weights);
      d0 = std::min(d1, far);
      d1 = d0 * q;
    }
    const double xt = edge + sign * far;
    out.points.push_back(xt);
    out.weights.push_back(std::abs(xt - center) / (1.0 + 2.0 * spec.s));
  }

  const int npts = static_cast<int>(out.points.size());
  const int ndof = grid.dof_count();
  out.values.resize(npts, ndof);
  const double s = spec.s;
  const double c = spec.c_omega / (s * grid.h);
  detail::for_each_index(npts, execution, [&](int p) {
    const double x = out.points[p];
    std::vector<double> f(hi - lo + 1);
    for (int k = lo; k <= hi; ++k) f[k - lo] = antiderivative(grid.nodes[k] - x, s);
    for (int i = 0; i < ndof; ++i) {
      const int k = grid.node_of_dof[i] - lo;
      out.values(p, i) = c * (2.0 * f[k] - f[k - 1] - f[k + 1]);
    }
  });
  return out;
}

StiffnessResult assemble_stiffness_weighted(const Grid& grid, const KernelSpec& spec,
                                            const DiffusionTensorField& a, const QuadratureBudget& budget,
                                            Execution execution) {
  if (a.dimension != 1) throw DomainError("assemble_stiffness_weighted: tensor dimension must be 1");
  const GradientSamples samples = sample_weighted_gradients(grid, spec, budget, execution);
  const int npts = static_cast<int>(samples.points.size());
  Vector wa(npts);
  for (int p = 0; p < npts; ++p) wa(p) = samples.weights[p] * a.eval(point1(samples.points[p]))(0, 0);
  const Matrix weighted = samples.values.array().colwise() * wa.array();
  Matrix k = samples.values.transpose() * weighted;
  StiffnessResult out;
  out.asymmetry = (k - k.transpose()).cwiseAbs().maxCoeff();
  const double scale = k.cwiseAbs().maxCoeff();
  if (out.asymmetry > 10.0 * budget.tolerance * scale)
    throw ConvergenceError("assemble_stiffness_weighted: asymmetry exceeds 10x the quadrature tolerance");
  out.matrix = 0.5 * (k + k.transpose());
  return out;
}

Matrix assemble_gram_isotropic(const Grid& grid, const KernelSpec& spec, const QuadratureBudget& budget,
                               Execution execution) {
  require_1d(grid, "assemble_gram_isotropic");
  if (spec.n != 1) throw DomainError("assemble_gram_isotropic: kernel dimension must be 1");
  budget.validate();
  const int ndof = grid.dof_count();
  const int nel = grid.element_count();
  const double s = spec.s;
  const double left = grid.left();
  const double right = grid.right();
  const double tail_coef = 0.5 * spec.c_ns / (2.0 * s);
  Matrix rows = Matrix::Zero(ndof, ndof);
  detail::for_each_index(ndof, execution, [&](int i) {
    Vector row = Vector::Zero(ndof);
    const int node = grid.node_of_dof[i];
    const int adjacent[2] = {node - 1, node};
    for (int e : adjacent)
      for (int f = 0; f < nel; ++f) add_pair(grid, spec, i, e, f, 2.0, row);
    for (int e : adjacent)
      for (int f : adjacent) add_pair(grid, spec, i, e, f, -1.0, row);
    // Interaction with everything beyond the meshed band, where all basis functions vanish.
    const QuadratureRule& rule = gauss_legendre(budget.base_order);
    for (int e : adjacent) {
      LocalHat hats[2];
      const int nh = element_hats(grid, e, hats);
      const double xe = grid.nodes[e];
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = 0.5 * grid.h * (1.0 + rule.nodes[q]);
        const double x = xe + u;
        const double kappa = tail_coef * (std::pow(x - left, -2.0 * s) + std::pow(right - x, -2.0 * s));
        const double w = 0.5 * grid.h * rule.weights[q] * 2.0 * kappa;
        double phi_i = 0.0;
        for (int k = 0; k < nh; ++k)
          if (hats[k].dof == i) phi_i = hats[k].value_at_left + hats[k].slope * u;
        for (int k = 0; k < nh; ++k) row(hats[k].dof) += w * phi_i * (hats[k].value_at_left + hats[k].slope * u);
      }
    }
    rows.row(i) = row.transpose();
  });
  return 0.5 * (rows + rows.transpose());
}

Matrix assemble_advection(const Grid& grid, const VelocityField& velocity) {
  require_1d(grid, "assemble_advection");
  if (velocity.dimension != 1) throw DomainError("assemble_advection: velocity dimension must be 1");
  // A solenoidal field in 1-D is constant; sample it across the domain.
  const double v0 = velocity.eval(point1(grid.a))(0);
  for (int k = 0; k <= 16; ++k) {
    const double x = grid.a + (grid.b - grid.a) * k / 16.0;
    const double v = velocity.eval(point1(x))(0);
    if (std::abs(v - v0) > 1e-12 * std::max(1.0, std::abs(v0)))
      throw DomainError("assemble_advection: velocity is not divergence-free (non-constant in 1-D)");
  }
  const int n = grid.dof_count();
  Matrix c = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int node = grid.node_of_dof[i];
    const int right = grid.dof_of_node[node + 1];
    if (right >= 0) {
      c(i, right) = 0.5 * v0;
      c(right, i) = -0.5 * v0;
    }
  }
  return c;
}

Vector assemble_load(const Grid& grid, const ScalarField& f) {
  require_1d(grid, "assemble_load");
  const int n = grid.dof_count();
  Vector out = Vector::Zero(n);
  const QuadratureRule& rule = gauss_legendre(8);
  for (int i = 0; i < n; ++i) {
    const int node = grid.node_of_dof[i];
    const double xi = grid.nodes[node];
    double acc = 0.0;
    for (int side = -1; side <= 1; side += 2) {
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = 0.5 * (1.0 + rule.nodes[q]);
        const double x = xi + side * grid.h * u;
        acc += 0.5 * grid.h * rule.weights[q] * f(point1(x)) * (1.0 - u);
      }
    }
    out(i) = acc;
  }
  return out;
}

Vector interpolate(const Grid& grid, const ScalarField& u) {
  Vector out(grid.dof_count());
  for (int i = 0; i < grid.dof_count(); ++i) out(i) = u(point1(grid.nodes[grid.node_of_dof[i]]));
  return out;
}

DiscreteSystem build_system(const Grid& grid, const KernelSpec& spec, const DiffusionTensorField& a,
                            const ScalarField& load, const SystemOptions& options, const VelocityField* velocity) {
  DiscreteSystem sys;
  sys.grid = grid;
  sys.spec = spec;
  sys.tensor_id = a.id;
  sys.lambda_min = a.lambda_min;
  sys.lambda_max = a.lambda_max;
  sys.mass = assemble_mass(grid);
  const StiffnessResult k = assemble_stiffness_weighted(grid, spec, a, options.budget, options.execution);
  sys.stiffness = k.matrix;
  sys.stiffness_asymmetry = k.asymmetry;
  if (options.with_gram) sys.gram = assemble_gram_isotropic(grid, spec, options.budget, options.execution);
  sys.load = assemble_load(grid, load);
  sys.load_id = load.id;
  if (velocity) {
    sys.advection = assemble_advection(grid, *velocity);
    sys.velocity_id = velocity->id;
  } else {
    sys.advection = Matrix::Zero(grid.dof_count(), grid.dof_count());
    sys.velocity_id = "none";
  }
  return sys;
}

}  // namespace anisofrac
