#pragma once

#include <vector>

#include "dnp/grid.hpp"
#include "dnp/operators.hpp"

namespace dnp {

/// direct evolves u; log_variable evolves w = log u through
/// w_t = H(Dw, D^2 w + Dw (x) Dw).
enum class SchemeMode { direct, log_variable };

const char* to_string(SchemeMode mode);

/// Discrete operator at one interior node and a bound on the sum of its
/// partial derivatives in the stencil values.
struct NodeEval {
  double H = 0.0;
  double lipschitz = 0.0;
};

/// Discrete H at interior node i. Second derivatives are unequal-arm
/// directional differences along the grid stencil; see README for the
/// per-family forms.
NodeEval discrete_operator(const OperatorSpec& op, const GridDomain& grid, const std::vector<double>& u, int i,
                           SchemeMode mode = SchemeMode::direct);

/// Evaluates every interior node (parallel, deterministic).
void discrete_operator_all(const OperatorSpec& op, const GridDomain& grid, const std::vector<double>& u,
                           SchemeMode mode, std::vector<double>& H, std::vector<double>& lipschitz);

/// Centered unequal-arm gradient, exact for quadratics.
Vec discrete_gradient(const GridDomain& grid, const std::vector<double>& u, int i);

/// Whether the discrete operator is nondecreasing in every neighbor value for
/// this family and dimension (the frozen-coefficient 2D forms for p_laplacian
/// and infinity_laplacian are not).
bool scheme_exactly_monotone(const OperatorSpec& op, int dim, SchemeMode mode = SchemeMode::direct);

}  // namespace dnp
