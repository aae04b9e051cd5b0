#pragma once

#include <vector>

#include "calderon/collar.hpp"
#include "calderon/projector_field.hpp"

namespace calderon {
namespace fixtures {

/// Scalar first-order dbar-type operator on the circle: i xi_n + xi.
CollarOperator scalar_dbar_circle();

/// Dirac-type pair on the circle matching the unit-disc model: A_0 = i sigma,
/// adapted symbol diag(xi, -xi).
CollarOperator dirac2_circle();

/// Scalar Laplace-type on the circle: xi_n^2 + xi^2.
CollarOperator laplace_circle();

/// Rank-2 second-order operator with distinct characteristic roots and a
/// first-order coupling block.
CollarOperator laplace_rank2_circle();

/// Scalar third-order operator, roots {i xi, -2i xi, 3i xi}.
CollarOperator order3_scalar_circle();

/// Rank-2 third-order block operator with mirrored root patterns and a
/// degree-3 coupling entry.
CollarOperator order3_rank2_circle();

/// Scalar second-order operator with a defective double root (xi_n - i xi)^2.
CollarOperator defective_m2_circle();

/// Scalar Laplace-type on the 2-torus boundary: xi_n^2 + |xi'|^2.
CollarOperator laplace_torus();

/// Non-elliptic scalar wave-type symbol xi_n^2 - xi^2 (for failure paths).
CollarOperator wave_circle();

/// All elliptic fixtures used by the acceptance sweeps (orders 1,2,3 and
/// ranks 1,2, plus the defective one).
std::vector<CollarOperator> standard_fixtures();

// common projector fields on a grid
ProjectorField dirichlet_field(const CosphereGrid& grid);  // diag(1,0) on 2-dim traces
ProjectorField neumann_field(const CosphereGrid& grid);    // diag(0,1)
ProjectorField identity_field(const CosphereGrid& grid, int dim);
ProjectorField zero_field(const CosphereGrid& grid, int dim);

}  // namespace fixtures
}  // namespace calderon
