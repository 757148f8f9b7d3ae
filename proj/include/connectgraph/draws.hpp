#pragma once

#include <random>

#include "connectgraph/graph_core.hpp"
#include "connectgraph/sbm.hpp"

namespace connectgraph::draws {

// Parameter samplers shared by the verify suites, tests and the CLI.
// Adjacent sorted values are kept at least 1e-3 apart.

/// rho' largest, gamma' smallest, alpha' and beta' in random order.
ToyKernelParams favorable_toy(std::mt19937_64& rng);
/// A favorable draw with alpha' and gamma' swapped; the pair-level alpha is
/// then below both beta and gamma.
ToyKernelParams flipped_toy(std::mt19937_64& rng);

/// beta' = gamma' = 0, rho' = 1 - 2 alpha' > alpha'.
SeparationKernelParams separation_zero_beta_gamma(std::mt19937_64& rng);
/// Strictly ordered separation parameters.
SeparationKernelParams separation_ordered(std::mt19937_64& rng);

/// rho > max(alpha, beta) > min(alpha, beta) > gamma, all in [0.02, 0.98].
SbmParams ordered_sbm(std::mt19937_64& rng, int r, int m, int n);

}  // namespace connectgraph::draws
