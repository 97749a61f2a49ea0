#pragma once

#include <cstdint>
#include <vector>

#include "core/graph.hpp"

namespace ng {

struct QapResult {
  double rho_observed = 0;
  std::int64_t permutations = 0;
  double p_value = 0;
  std::vector<double> null_samples;  // one correlation per permutation trial
};

// Graph covariance over all n^2 adjacency entries (diagonal included, absent
// edges are zero): cov = (sum_ij A1*A2 - n^2*mu1*mu2) / (n^2 - 1).
// Both graphs must already be restricted to a common vertex set with
// identical indexing (restrict_to_common_vertices).
double graph_covariance(const Graph& a, const Graph& b, bool binarize = false);
double graph_variance(const Graph& g, bool binarize = false);

// rho = cov / sqrt(var(a) var(b)). Throws Error(numeric) when either
// variance is zero (edgeless or uniformly complete graph).
double graph_correlation(const Graph& a, const Graph& b, bool binarize = false);

// QAP significance test: repeated random simultaneous row/column permutations
// of the second adjacency matrix; p = |{pi : rho_pi >= rho_observed}| /
// permutations. Trial t draws its RNG stream from (seed, t), so results do
// not depend on scheduling.
QapResult qap_test(const Graph& a, const Graph& b, std::int64_t permutations,
                   std::uint64_t seed, bool binarize = false, int threads = 1);

}  // namespace ng
