#pragma once

#include <algorithm>
#include <vector>

#include "symtherm/potential.hpp"
#include "symtherm/sft.hpp"

namespace symtherm::detail {

// Edge list of the (D-1)-block presentation. Edge e = tail -> head spells an
// admissible D-word, so any potential of depth <= D is a weight on edges.
struct BlockGraph {
  HigherBlock blocks;
  std::vector<int> tail, head;
  std::vector<std::vector<int>> out;

  BlockGraph(const Sft& sft, int depth) : blocks(sft, std::max(depth, 2)) {
    const int n = blocks.states();
    out.resize(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
      for (Symbol v : blocks.spec().successors(u)) {
        out[static_cast<std::size_t>(u)].push_back(static_cast<int>(tail.size()));
        tail.push_back(u);
        head.push_back(v);
      }
    }
  }

  int vertices() const { return blocks.states(); }
  int edges() const { return static_cast<int>(tail.size()); }
  int depth() const { return blocks.depth(); }

  Word edge_word(int e) const {
    return blocks.edge_word(tail[static_cast<std::size_t>(e)], head[static_cast<std::size_t>(e)]);
  }

  std::vector<double> weights(const Potential& f) const {
    std::vector<double> w(tail.size());
    for (int e = 0; e < edges(); ++e) w[static_cast<std::size_t>(e)] = f.at(edge_word(e));
    return w;
  }

  // Base-alphabet period word of a block cycle given as a vertex loop.
  Word cycle_word(const std::vector<int>& loop) const {
    Word w;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      w.push_back(blocks.block(loop[(i + 1) % loop.size()]).back());
    }
    return w;
  }
};

inline int common_depth(const Potential& a) { return std::max(2, a.depth()); }
inline int common_depth(const Potential& a, const Potential& b) { return std::max({2, a.depth(), b.depth()}); }

}  // namespace symtherm::detail
