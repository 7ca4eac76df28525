#pragma once

#include "anisofrac/core.hpp"
#include "anisofrac/fields.hpp"
#include "anisofrac/grid.hpp"
#include "anisofrac/kernel.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/tensor_field.hpp"

#include <functional>
#include <string>
#include <vector>

namespace anisofrac {

struct VelocityField {
  int dimension = 1;
  std::function<Point(const Point&)> eval;
  std::string id;
};

VelocityField constant_velocity(int n, double speed);

/// Piecewise-linear mass matrix on the interior dofs.
Matrix assemble_mass(const Grid& grid);

/// Closed-form weighted gradient of the hat function centred at `node`,
/// G_omega phi(x) = (C_omega / (s h)) [2F(node - x) - F(node - h - x) - F(node + h - x)]
/// with F(t) = sign(t) |t|^{1-s} / (1 - s).
double hat_weighted_gradient(const KernelSpec& spec, double node, double h, double x);

/// Outer quadrature on the real line together with the weighted gradients of
/// every interior basis function at its points (rows: points, columns: dofs).
struct GradientSamples {
  std::vector<double> points;
  std::vector<double> weights;
  Matrix values;
};

GradientSamples sample_weighted_gradients(const Grid& grid, const KernelSpec& spec, const QuadratureBudget& budget,
                                          Execution execution = Execution::Serial);

struct StiffnessResult {
  Matrix matrix;
  double asymmetry = 0.0;
};

/// K_A[i][j] = int G_omega phi_j . A G_omega phi_i dx, symmetrised.
StiffnessResult assemble_stiffness_weighted(const Grid& grid, const KernelSpec& spec,
                                            const DiffusionTensorField& a, const QuadratureBudget& budget,
                                            Execution execution = Execution::Serial);

/// K_iso[i][j] = double integral of (phi_i(x)-phi_i(y))(phi_j(x)-phi_j(y)) gamma_FL(x,y).
Matrix assemble_gram_isotropic(const Grid& grid, const KernelSpec& spec, const QuadratureBudget& budget,
                               Execution execution = Execution::Serial);

/// C[i][j] = int (v . grad phi_j) phi_i dx.
Matrix assemble_advection(const Grid& grid, const VelocityField& velocity);

/// F[i] = int f phi_i dx over the domain.
Vector assemble_load(const Grid& grid, const ScalarField& f);

/// Nodal interpolant of a field on the interior dofs.
Vector interpolate(const Grid& grid, const ScalarField& u);

struct DiscreteSystem {
  Grid grid;
  KernelSpec spec;
  std::string tensor_id;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  Matrix mass;
  Matrix stiffness;
  Matrix gram;
  Matrix advection;
  Vector load;
  double stiffness_asymmetry = 0.0;
  std::string load_id;
  std::string velocity_id;
};

struct SystemOptions {
  QuadratureBudget budget;
  Execution execution = Execution::Serial;
  bool with_gram = true;
};

DiscreteSystem build_system(const Grid& grid, const KernelSpec& spec, const DiffusionTensorField& a,
                            const ScalarField& load, const SystemOptions& options,
                            const VelocityField* velocity = nullptr);

}  // namespace anisofrac
