#pragma once

#include <vector>

#include "qsys/algebra.hpp"

namespace qsys {

// All complex roots of p via the balanced companion matrix.  The leading
// coefficient must be meaningfully nonzero; near-zero leading coefficients
// should be trimmed by the caller first.
std::vector<Complex> poly_roots(const UniPoly& p);

// Clusters a point set: points closer than tol * max(1, |p|) are merged.
// Returns representatives (cluster means) and cluster sizes.
void cluster_points(const std::vector<Complex>& pts, double tol,
                    std::vector<Complex>& reps, std::vector<int>& counts);

}  // namespace qsys
