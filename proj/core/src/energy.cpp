#include "fatigue/energy.hpp"

#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace fatigue {

DiscreteState make_state(const FeOperators& ops, Vector alpha, Vector u, Vector V) {
  if (alpha.size() != ops.num_nodes() || V.size() != ops.num_elements()) {
    throw std::invalid_argument("state shape does not match the mesh");
  }
  GradField g = element_gradients(ops, u);
  return DiscreteState{std::move(alpha), std::move(u), std::move(g), std::move(V)};
}

EnergyBreakdown total_energy(const Vector& alpha, const GradField& grad_u, const FeOperators& ops,
                             const MaterialLaws& laws) {
  const Vector abar = element_average(ops, alpha);
  double elastic = 0.0;
  for (Eigen::Index e = 0; e < ops.num_elements(); ++e) {
    elastic += 0.5 * ops.areas[static_cast<std::size_t>(e)] * eval_mu(laws, abar[e]).value *
               grad_u.col(e).squaredNorm();
  }
  const double gradient = 0.5 * alpha.dot(ops.stiffness * alpha);
  return {elastic, gradient};
}

EnergyBreakdown total_energy(const DiscreteState& state, const FeOperators& ops, const MaterialLaws& laws) {
  return total_energy(state.alpha, state.grad_u, ops, laws);
}

Vector grad_alpha_energy(const Vector& alpha, const GradField& grad_u, const FeOperators& ops,
                         const MaterialLaws& laws) {
  const Vector abar = element_average(ops, alpha);
  Vector density(ops.num_elements());
  for (Eigen::Index e = 0; e < ops.num_elements(); ++e) {
    density[e] = 0.5 * eval_mu(laws, abar[e]).slope * grad_u.col(e).squaredNorm();
  }
  Vector g = lump_to_nodes(ops, density);
  g += ops.stiffness * alpha;
  return g;
}

Vector grad_alpha_energy(const DiscreteState& state, const FeOperators& ops, const MaterialLaws& laws) {
  return grad_alpha_energy(state.alpha, state.grad_u, ops, laws);
}

Vector dissipation_load(const Vector& V, const FeOperators& ops, const MaterialLaws& laws) {
  if (V.size() != ops.num_elements()) throw std::invalid_argument("cumulation field has wrong length");
  Vector fv(V.size());
  for (Eigen::Index e = 0; e < V.size(); ++e) fv[e] = eval_f(laws, V[e]).value;
  return lump_to_nodes(ops, fv);
}

double dissipation_R(const Vector& beta, const Vector& V, const FeOperators& ops, const MaterialLaws& laws) {
  if (beta.size() != ops.num_nodes()) throw std::invalid_argument("rate field has wrong length");
  const double worst = beta.size() ? beta.maxCoeff() : 0.0;
  if (worst > 1e-12) {
    throw std::invalid_argument(fmt::format("dissipation rate must be nonpositive (max entry {})", worst));
  }
  return -dissipation_load(V, ops, laws).dot(beta);
}

Vector element_modulus(const Vector& alpha, const FeOperators& ops, const MaterialLaws& laws) {
  Vector abar = element_average(ops, alpha);
  for (Eigen::Index e = 0; e < abar.size(); ++e) abar[e] = eval_mu(laws, abar[e]).value;
  return abar;
}

ZetaField zeta_field(const Vector& alpha, const GradField& grad_u, const FeOperators& ops, const MaterialLaws& laws) {
  const Vector abar = element_average(ops, alpha);
  ZetaField z(laws.zeta_rows(), ops.num_elements());
  for (Eigen::Index e = 0; e < ops.num_elements(); ++e) {
    z.col(e) = eval_g_zeta(laws, abar[e], grad_u.col(e));
  }
  return z;
}

}  // namespace fatigue
