#pragma once

#include <vector>

#include "block_graph.hpp"

namespace symtherm::detail {

struct PerronData {
  double log_lambda = 0.0;
  double scaled_lambda = 0.0;  // eigenvalue of the matrix divided by exp(shift)
  double shift = 0.0;          // max log weight
  std::vector<double> right, left;
  double residual = 0.0;
  double bracket = 0.0;
};

// Leading eigendata of M(u,v) = sum over edges u->v of exp(w_e). With
// need_vectors false only the eigenvalue is certified.
PerronData perron(const BlockGraph& g, const std::vector<double>& log_weights, double rel_tol,
                  bool need_vectors = true);

}  // namespace symtherm::detail
