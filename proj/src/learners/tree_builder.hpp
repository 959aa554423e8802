#pragma once

#include <cstdint>
#include <vector>

#include "mph/dataset.hpp"
#include "mph/learners.hpp"

// Internal CART machinery. Columns are presorted once per fit; node splits
// stable-partition the per-feature index arrays so each node sees its rows in
// sorted feature order without re-sorting. Split scans walk features in
// ascending index and thresholds in ascending value with strict improvement,
// which pins the tie-break to lowest feature index, then lowest threshold.

namespace mph::learn::detail {

class ColumnStore {
public:
    explicit ColumnStore(const data::FeatureMatrix& X);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return cols_.size(); }
    const std::vector<double>& col(std::size_t f) const { return cols_[f]; }
    const std::vector<std::uint32_t>& sorted_order(std::size_t f) const { return order_[f]; }

private:
    std::size_t n_rows_;
    std::vector<std::vector<double>> cols_;
    std::vector<std::vector<std::uint32_t>> order_;
};

struct TreeParams {
    int max_depth = 6;
    std::size_t min_samples_leaf = 1;
    double feature_fraction = 1.0;  // per-split feature sampling when < 1
    double lambda = 0.0;            // second-order leaf regularization
    double gamma = 0.0;             // second-order minimum split gain
};

/// CART on raw targets: leaf = mean(y), split criterion = variance reduction.
/// `feature_rng` is consumed only when feature_fraction < 1.
RegressionTree build_variance_tree(const ColumnStore& store,
                                   const std::vector<std::uint8_t>& in_sample,
                                   std::span<const double> target, const TreeParams& params,
                                   Rng* feature_rng);

/// Second-order boosting tree on per-row gradients (unit hessians):
/// leaf = -G / (H + lambda), split kept when
/// 0.5*(GL^2/(HL+lambda) + GR^2/(HR+lambda) - G^2/(H+lambda)) > gamma.
RegressionTree build_second_order_tree(const ColumnStore& store,
                                       const std::vector<std::uint8_t>& in_sample,
                                       std::span<const double> grad, const TreeParams& params);

}  // namespace mph::learn::detail
