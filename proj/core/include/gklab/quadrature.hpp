#pragma once

#include <cstddef>
#include <vector>

namespace gklab {

struct GaussLegendre {
    std::vector<double> nodes;    // in (-1, 1), ascending
    std::vector<double> weights;  // sum to 2
};

// Nodes/weights by Newton iteration on Legendre polynomials; deterministic
// and accurate to ~1e-15 for the orders used here.
GaussLegendre gauss_legendre(int order);

// Same rule mapped onto [a, b].
GaussLegendre gauss_legendre(int order, double a, double b);

}  // namespace gklab
