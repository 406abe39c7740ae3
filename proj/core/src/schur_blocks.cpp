#include "weylkit/schur_blocks.hpp"

#include <algorithm>
#include <numeric>

namespace weylkit {

std::size_t BlockPartition::class_of(const Weight& mu) const {
  for (std::size_t k = 0; k < classes.size(); ++k)
    if (std::find(classes[k].begin(), classes[k].end(), mu) != classes[k].end()) return k;
  throw std::out_of_range(mu.to_string() + " is not in the saturated set");
}

BlockPartition blocks(const Weight& lam, const Workspace& ws) {
  return blocks(saturated_below(lam, ws.root_system()), ws);
}

BlockPartition blocks(const std::vector<Weight>& saturated, const Workspace& ws) {
  const auto& rs = ws.root_system();
  BlockPartition out;
  out.weights = saturated;
  std::sort(out.weights.begin(), out.weights.end(), [&](const Weight& a, const Weight& b) { return linear_order_less(a, b, rs); });
  std::map<Weight, std::size_t> index;
  for (std::size_t k = 0; k < out.weights.size(); ++k) index[out.weights[k]] = k;

  std::vector<std::size_t> parent(out.weights.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < out.weights.size(); ++k)
    for (const auto& [mu, d] : decomposition_numbers(out.weights[k], ws)) {
      auto it = index.find(mu);
      if (it == index.end()) throw std::invalid_argument("weight set is not saturated: missing " + mu.to_string());
      if (d != 0) parent[find(it->second)] = find(k);
    }

  std::map<std::size_t, std::vector<Weight>> by_root;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < out.weights.size(); ++k) {
    std::size_t r = find(k);
    if (!by_root.count(r)) order.push_back(r);
    by_root[r].push_back(out.weights[k]);
  }
  for (std::size_t r : order) out.classes.push_back(std::move(by_root[r]));
  return out;
}

}  // namespace weylkit
