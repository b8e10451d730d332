// Copyright 2026 The Moorcast Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Histogram regression tree grown depth-first on binned features.
//
// The builder works on gradient sums: with g_i the loss gradient and unit
// hessians, a node of n rows and gradient sum G has score
// soft(G, alpha)^2 / (n + lambda) and leaf value -soft(G, alpha) / (n + lambda).
// A plain variance-reduction tree is the case g_i = -y_i, alpha = lambda = 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "moorcast/ml/binning.hpp"

namespace moorcast::ml {

struct Tree {
  std::vector<std::int32_t> feature;  // -1 for leaves
  std::vector<double> threshold;      // go left iff x <= threshold
  std::vector<std::uint8_t> bin;      // same split on codes: left iff code <= bin
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  std::vector<double> value;

  std::size_t size() const { return feature.size(); }

  double predict(const double* x) const {
    std::int32_t k = 0;
    while (feature[k] >= 0) k = x[feature[k]] <= threshold[k] ? left[k] : right[k];
    return value[k];
  }

  double predict_binned(const BinnedMatrix& b, std::size_t i) const {
    std::int32_t k = 0;
    while (feature[k] >= 0) k = b(i, feature[k]) <= bin[k] ? left[k] : right[k];
    return value[k];
  }

  void scale(double f) {
    for (auto& v : value) v *= f;
  }

  bool uses_feature(std::size_t j) const {
    return std::find(feature.begin(), feature.end(), static_cast<std::int32_t>(j)) !=
           feature.end();
  }
};

struct GrowParams {
  int max_depth = 30;
  std::size_t min_samples_leaf = 1;
  double l1_alpha = 0.0;
  double l2_lambda = 0.0;
};

namespace detail {

inline double soft_threshold(double g, double a) {
  if (g > a) return g - a;
  if (g < -a) return g + a;
  return 0.0;
}

struct HistBin {
  double g = 0.0;
  std::uint32_t n = 0;
};

class TreeGrower {
 public:
  TreeGrower(const BinnedMatrix& b, const BinMapper& m, const std::vector<double>& g,
             const std::vector<std::size_t>& active, const GrowParams& p)
      : b_(b), m_(m), g_(g), active_(active), p_(p) {}

  // rows may repeat (bootstrap).
  Tree grow(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    tree_ = Tree{};
    Pending root;
    root.begin = 0;
    root.end = rows_.size();
    if (rows_.size() >= kHistMinRows) root.hist = build_hist(root.begin, root.end);
    root.g = 0.0;
    for (std::size_t k = root.begin; k < root.end; ++k) root.g += g_[rows_[k]];
    root.node = new_node();
    std::vector<Pending> stack;
    stack.push_back(std::move(root));
    while (!stack.empty()) {
      Pending nd = std::move(stack.back());
      stack.pop_back();
      process(nd, stack);
    }
    return std::move(tree_);
  }

 private:
  struct Pending {
    std::size_t begin = 0;
    std::size_t end = 0;
    int depth = 0;
    double g = 0.0;
    std::int32_t node = 0;
    std::vector<HistBin> hist;  // active_.size() * kMaxBins
  };

  std::int32_t new_node() {
    tree_.feature.push_back(-1);
    tree_.threshold.push_back(0.0);
    tree_.bin.push_back(0);
    tree_.left.push_back(-1);
    tree_.right.push_back(-1);
    tree_.value.push_back(0.0);
    return static_cast<std::int32_t>(tree_.feature.size() - 1);
  }

  // Smaller nodes find splits by sorting codes instead of histograms.
  static constexpr std::size_t kHistMinRows = 256;

  struct Best {
    bool found = false;
    double gain = 0.0;
    std::size_t a = 0;
    std::size_t bin = 0;
  };

  void consider(Best& best, double gain, std::size_t a, std::size_t bin) const {
    if (gain > best.gain) {
      best.gain = gain;
      best.a = a;
      best.bin = bin;
      best.found = true;
    }
  }

  Best split_from_hist(const Pending& nd, double parent) const {
    Best best;
    const std::size_t n = nd.end - nd.begin;
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const HistBin* hb = nd.hist.data() + a * kMaxBins;
      const std::size_t nb = b_.n_bins[active_[a]];
      double gl = 0.0;
      std::size_t nl = 0;
      for (std::size_t bin = 0; bin + 1 < nb; ++bin) {
        gl += hb[bin].g;
        nl += hb[bin].n;
        if (nl < p_.min_samples_leaf || nl == 0) continue;
        const std::size_t nr = n - nl;
        if (nr < p_.min_samples_leaf || nr == 0) break;
        consider(best,
                 score(gl, static_cast<double>(nl)) +
                     score(nd.g - gl, static_cast<double>(nr)) - parent,
                 a, bin);
      }
    }
    return best;
  }

  // Nodes below kHistMinRows: tiny ones sort their codes, the rest use a
  // scratch histogram limited to the touched code range.
  Best split_by_sort(const Pending& nd, double parent) {
    Best best;
    const std::size_t n = nd.end - nd.begin;
    if (scratch_.size() < kMaxBins) scratch_.resize(kMaxBins);
    std::vector<std::pair<std::uint8_t, double>>& cg = sort_buf_;
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const std::uint8_t* col = b_.column(active_[a]);
      auto scan = [&](auto&& next_bin) {
        double gl = 0.0;
        std::size_t nl = 0;
        std::uint8_t code = 0;
        double g = 0.0;
        std::size_t c = 0;
        while (next_bin(code, g, c)) {
          gl += g;
          nl += c;
          if (nl >= n) break;
          const std::size_t nr = n - nl;
          if (nl < p_.min_samples_leaf) continue;
          if (nr < p_.min_samples_leaf) break;
          consider(best,
                   score(gl, static_cast<double>(nl)) +
                       score(nd.g - gl, static_cast<double>(nr)) - parent,
                   a, code);
        }
      };
      if (n <= 32) {
        cg.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t i = rows_[nd.begin + k];
          cg[k] = {col[i], g_[i]};
        }
        std::sort(cg.begin(), cg.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::size_t k = 0;
        scan([&](std::uint8_t& code, double& g, std::size_t& c) {
          if (k >= n) return false;
          code = cg[k].first;
          g = 0.0;
          c = 0;
          while (k < n && cg[k].first == code) {
            g += cg[k].second;
            ++c;
            ++k;
          }
          return true;
        });
      } else {
        std::size_t lo = kMaxBins, hi = 0;
        for (std::size_t k = nd.begin; k < nd.end; ++k) {
          const std::size_t i = rows_[k];
          const std::uint8_t c = col[i];
          scratch_[c].g += g_[i];
          scratch_[c].n += 1;
          lo = std::min<std::size_t>(lo, c);
          hi = std::max<std::size_t>(hi, c);
        }
        std::size_t b = lo;
        scan([&](std::uint8_t& code, double& g, std::size_t& c) {
          while (b <= hi && scratch_[b].n == 0) ++b;
          if (b > hi) return false;
          code = static_cast<std::uint8_t>(b);
          g = scratch_[b].g;
          c = scratch_[b].n;
          ++b;
          return true;
        });
        for (std::size_t k = lo; k <= hi; ++k) scratch_[k] = HistBin{};
      }
    }
    return best;
  }

  double score(double g, double n) const {
    const double s = soft_threshold(g, p_.l1_alpha);
    return s * s / (n + p_.l2_lambda);
  }

  double leaf(double g, double n) const {
    const double d = n + p_.l2_lambda;
    return d > 0.0 ? -soft_threshold(g, p_.l1_alpha) / d : 0.0;
  }

  std::vector<HistBin> build_hist(std::size_t begin, std::size_t end) const {
    std::vector<HistBin> h(active_.size() * kMaxBins);
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const std::uint8_t* col = b_.column(active_[a]);
      HistBin* hb = h.data() + a * kMaxBins;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t i = rows_[k];
        hb[col[i]].g += g_[i];
        hb[col[i]].n += 1;
      }
    }
    return h;
  }

  void process(Pending& nd, std::vector<Pending>& stack) {
    const std::size_t n = nd.end - nd.begin;
    const double nn = static_cast<double>(n);
    tree_.value[nd.node] = leaf(nd.g, nn);
    if (nd.depth >= p_.max_depth || n < 2 * std::max<std::size_t>(p_.min_samples_leaf, 1))
      return;
    const double parent = score(nd.g, nn);
    Best best;
    if (!nd.hist.empty())
      best = split_from_hist(nd, parent);
    else
      best = split_by_sort(nd, parent);
    const bool found = best.found;
    const double best_gain = best.gain;
    const std::size_t best_a = best.a;
    const std::size_t best_bin = best.bin;
    if (!found || !(best_gain > 1e-12 * parent) || !(best_gain > 0.0)) return;

    const std::size_t f = active_[best_a];
    const std::uint8_t* col = b_.column(f);
    const auto cut = static_cast<std::uint8_t>(best_bin);
    auto mid = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(nd.begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(nd.end),
        [&](std::size_t i) { return col[i] <= cut; });
    const std::size_t split = static_cast<std::size_t>(mid - rows_.begin());

    tree_.feature[nd.node] = static_cast<std::int32_t>(f);
    tree_.bin[nd.node] = cut;
    tree_.threshold[nd.node] = m_.edges[f][best_bin];

    Pending l, r;
    l.begin = nd.begin;
    l.end = split;
    r.begin = split;
    r.end = nd.end;
    l.depth = r.depth = nd.depth + 1;
    for (std::size_t k = l.begin; k < l.end; ++k) l.g += g_[rows_[k]];
    r.g = 0.0;
    for (std::size_t k = r.begin; k < r.end; ++k) r.g += g_[rows_[k]];
    Pending& small = (l.end - l.begin) <= (r.end - r.begin) ? l : r;
    Pending& large = &small == &l ? r : l;
    if (!nd.hist.empty() && large.end - large.begin >= kHistMinRows) {
      auto sh = build_hist(small.begin, small.end);
      large.hist = std::move(nd.hist);
      for (std::size_t k = 0; k < large.hist.size(); ++k) {
        large.hist[k].g -= sh[k].g;
        large.hist[k].n -= sh[k].n;
      }
      if (small.end - small.begin >= kHistMinRows) small.hist = std::move(sh);
    }
    l.node = new_node();
    r.node = new_node();
    tree_.left[nd.node] = l.node;
    tree_.right[nd.node] = r.node;
    // Right pushed first so the left subtree is grown first.
    stack.push_back(std::move(r));
    stack.push_back(std::move(l));
  }

  const BinnedMatrix& b_;
  const BinMapper& m_;
  const std::vector<double>& g_;
  std::vector<std::size_t> active_;
  GrowParams p_;
  std::vector<std::size_t> rows_;
  std::vector<HistBin> scratch_;
  std::vector<std::pair<std::uint8_t, double>> sort_buf_;
  Tree tree_;
};

}  // namespace detail

inline Tree grow_tree(const BinnedMatrix& b, const BinMapper& m,
                      const std::vector<double>& gradients,
                      std::vector<std::size_t> rows,
                      const std::vector<std::size_t>& active_features,
                      const GrowParams& p) {
  if (rows.empty()) throw Error("empty_table", "grow_tree: no rows");
  detail::TreeGrower g(b, m, gradients, active_features, p);
  return g.grow(std::move(rows));
}

}  // namespace moorcast::ml
