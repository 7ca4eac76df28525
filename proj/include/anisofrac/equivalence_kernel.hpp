#pragma once

#include "anisofrac/core.hpp"
#include "anisofrac/kernel.hpp"
#include "anisofrac/quadrature.hpp"
#include "anisofrac/tensor_field.hpp"

namespace anisofrac {

/// The three parts of the symmetric kernel generated by the weight
/// omega~(x,y) = omega(x,y) A^{1/2}(x), and the kernel value itself.
///
///   gamma_I    = omega~(x,z) alpha(x,z) . PV int omega~(x,y) alpha(x,y) dy
///   gamma_IIA  = int omega~(y,z) alpha(y,z) . omega~(y,x) alpha(x,y) dy
///   gamma_IIB  = omega~(z,x) alpha(x,z) . PV int omega~(z,y) alpha(y,z) dy
///   value      = (gamma_I + gamma_IIA + gamma_IIB) / 2
///
/// With this normalisation D_omega(A G_omega u)(x) = 2 int (u(z) - u(x)) value(x,z) dz.
struct EquivalenceKernelTerms {
  double gamma_i = 0.0;
  double gamma_iia = 0.0;
  double gamma_iib = 0.0;
  double value = 0.0;
  double error = 0.0;
};

EquivalenceKernelTerms equivalence_kernel_terms(const KernelSpec& spec, const DiffusionTensorField& a,
                                                const Point& x, const Point& z, const QuadratureBudget& budget);

double equivalence_kernel(const KernelSpec& spec, const DiffusionTensorField& a, const Point& x, const Point& z,
                          const QuadratureBudget& budget);

}  // namespace anisofrac
