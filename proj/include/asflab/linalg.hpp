#pragma once

#include <optional>
#include <vector>

#include "asflab/rational.hpp"

namespace asflab {

// Exact solver for A x = b over the rationals via fraction-free (Bareiss)
// elimination; free variables are set to zero; nullopt when inconsistent.
std::optional<std::vector<Rational>> linsolve_exact(std::vector<std::vector<Rational>> a,
                                                    std::vector<Rational> b);

size_t matrix_rank_exact(std::vector<std::vector<Rational>> a);

}  // namespace asflab
