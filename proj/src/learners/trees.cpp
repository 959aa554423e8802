#include "tree_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mph::learn {

double RegressionTree::predict_row(std::span<const double> row) const {
    if (nodes.empty()) return 0.0;
    const TreeNode* node = &nodes[0];
    while (node->feature >= 0) {
        node = row[static_cast<std::size_t>(node->feature)] < node->threshold
                   ? &nodes[static_cast<std::size_t>(node->left)]
                   : &nodes[static_cast<std::size_t>(node->right)];
    }
    return node->value;
}

int RegressionTree::depth() const {
    if (nodes.empty()) return 0;
    // Iterative depth over the explicit child links.
    std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
    int best = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        if (n.feature >= 0) {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return best;
}

namespace detail {

ColumnStore::ColumnStore(const data::FeatureMatrix& X) : n_rows_(X.n_rows()) {
    cols_.resize(X.n_cols());
    order_.resize(X.n_cols());
    for (std::size_t f = 0; f < X.n_cols(); ++f) {
        cols_[f] = X.column_copy(f);
        order_[f].resize(n_rows_);
        std::iota(order_[f].begin(), order_[f].end(), 0u);
        const std::vector<double>& v = cols_[f];
        std::stable_sort(order_[f].begin(), order_[f].end(),
                         [&v](std::uint32_t a, std::uint32_t b) { return v[a] < v[b]; });
    }
}

namespace {

// Gain/leaf policies. These are the two algebraic routes: variance reduction
// on raw targets vs second-order gain on gradients. With lambda = gamma = 0
// they make bit-identical decisions, which the tests rely on.

struct VariancePolicy {
    std::span<const double> value;
    double leaf(double sum, double count) const { return sum / count; }
    double gain(double ls, double ln, double rs, double rn, double ts, double tn) const {
        return ls * ls / ln + rs * rs / rn - ts * ts / tn;
    }
    double accept_threshold() const { return 0.0; }
};

struct SecondOrderPolicy {
    std::span<const double> value;  // per-row gradient, hessian = 1
    double lambda;
    double gamma;
    double leaf(double g_sum, double count) const { return -g_sum / (count + lambda); }
    double gain(double gl, double nl, double gr, double nr, double gt, double nt) const {
        return 0.5 * (gl * gl / (nl + lambda) + gr * gr / (nr + lambda) -
                      gt * gt / (nt + lambda));
    }
    double accept_threshold() const { return gamma; }
};

struct Frame {
    std::size_t begin, end;
    int depth;
    std::int32_t node;
    double sum;
};

template <typename Policy>
RegressionTree build_tree(const ColumnStore& store, const std::vector<std::uint8_t>& in_sample,
                          const Policy& policy, const TreeParams& params, Rng* feature_rng) {
    const std::size_t n_cols = store.n_cols();
    const std::size_t n_rows = store.n_rows();

    // Filter each presorted column order down to the sampled rows.
    std::vector<std::vector<std::uint32_t>> idx(n_cols);
    std::size_t m = 0;
    for (std::uint32_t r = 0; r < n_rows; ++r) m += in_sample[r] != 0;
    for (std::size_t f = 0; f < n_cols; ++f) {
        idx[f].reserve(m);
        for (std::uint32_t r : store.sorted_order(f)) {
            if (in_sample[r]) idx[f].push_back(r);
        }
    }

    RegressionTree tree;
    if (m == 0) {
        tree.nodes.push_back(TreeNode{});
        return tree;
    }

    double root_sum = 0.0;
    for (std::uint32_t r : idx[0]) root_sum += policy.value[r];

    std::vector<std::uint8_t> goes_left(n_rows, 0);
    std::vector<std::uint32_t> scratch(m);
    std::vector<std::size_t> feature_pool(n_cols);
    std::vector<std::size_t> candidates;
    std::size_t n_candidates = n_cols;
    if (params.feature_fraction < 1.0) {
        n_candidates = static_cast<std::size_t>(
            std::ceil(params.feature_fraction * static_cast<double>(n_cols)));
        n_candidates = std::max<std::size_t>(1, std::min(n_candidates, n_cols));
    }

    tree.nodes.push_back(TreeNode{});
    std::vector<Frame> stack{{0, m, 0, 0, root_sum}};

    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const std::size_t count = fr.end - fr.begin;
        TreeNode& node0 = tree.nodes[static_cast<std::size_t>(fr.node)];
        node0.value = policy.leaf(fr.sum, static_cast<double>(count));

        if (fr.depth >= params.max_depth || count < 2 * params.min_samples_leaf || count < 2)
            continue;

        // Candidate features for this node.
        candidates.clear();
        if (n_candidates == n_cols) {
            for (std::size_t f = 0; f < n_cols; ++f) candidates.push_back(f);
        } else {
            std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
            for (std::size_t i = 0; i < n_candidates; ++i) {
                std::size_t j =
                    i + static_cast<std::size_t>(feature_rng->uniform_int(
                            static_cast<std::uint64_t>(n_cols - i)));
                std::swap(feature_pool[i], feature_pool[j]);
                candidates.push_back(feature_pool[i]);
            }
            std::sort(candidates.begin(), candidates.end());
        }

        double best_gain = 0.0;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;
        const double total = fr.sum;
        const double tn = static_cast<double>(count);

        for (std::size_t f : candidates) {
            const std::vector<double>& x = store.col(f);
            const std::uint32_t* rows = idx[f].data() + fr.begin;
            double left_sum = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                const std::uint32_t r = rows[i];
                if (i > 0 && x[r] > x[rows[i - 1]]) {
                    const std::size_t ln = i;
                    const std::size_t rn = count - i;
                    if (ln >= params.min_samples_leaf && rn >= params.min_samples_leaf) {
                        double gain =
                            policy.gain(left_sum, static_cast<double>(ln), total - left_sum,
                                        static_cast<double>(rn), total, tn) -
                            policy.accept_threshold();
                        if (gain > 0.0 && (!found || gain > best_gain)) {
                            double lo = x[rows[i - 1]];
                            double hi = x[r];
                            double thr = 0.5 * (lo + hi);
                            if (!(thr > lo)) thr = hi;  // adjacent doubles
                            best_gain = gain;
                            best_feature = f;
                            best_threshold = thr;
                            found = true;
                        }
                    }
                }
                left_sum += policy.value[r];
            }
        }

        if (!found) continue;

        // Mark membership and compute the left stats.
        const std::vector<double>& xs = store.col(best_feature);
        double left_sum = 0.0;
        std::size_t left_count = 0;
        for (std::size_t i = fr.begin; i < fr.end; ++i) {
            std::uint32_t r = idx[best_feature][i];
            bool l = xs[r] < best_threshold;
            goes_left[r] = l;
            if (l) {
                left_sum += policy.value[r];
                ++left_count;
            }
        }

        // Stable-partition every feature's segment by membership.
        for (std::size_t f = 0; f < n_cols; ++f) {
            std::uint32_t* seg = idx[f].data() + fr.begin;
            std::size_t nl = 0, nr = 0;
            for (std::size_t i = 0; i < count; ++i) {
                std::uint32_t r = seg[i];
                if (goes_left[r])
                    seg[nl++] = r;
                else
                    scratch[nr++] = r;
            }
            std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(nr),
                      seg + nl);
        }

        std::int32_t left_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        std::int32_t right_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        TreeNode& node = tree.nodes[static_cast<std::size_t>(fr.node)];
        node.feature = static_cast<std::int32_t>(best_feature);
        node.threshold = best_threshold;
        node.left = left_id;
        node.right = right_id;

        // Left is processed first (preorder node numbering).
        stack.push_back({fr.begin + left_count, fr.end, fr.depth + 1, right_id,
                         fr.sum - left_sum});
        stack.push_back({fr.begin, fr.begin + left_count, fr.depth + 1, left_id, left_sum});
    }

    return tree;
}

}  // namespace

RegressionTree build_variance_tree(const ColumnStore& store,
                                   const std::vector<std::uint8_t>& in_sample,
                                   std::span<const double> target, const TreeParams& params,
                                   Rng* feature_rng) {
    VariancePolicy policy{target};
    return build_tree(store, in_sample, policy, params, feature_rng);
}

RegressionTree build_second_order_tree(const ColumnStore& store,
                                       const std::vector<std::uint8_t>& in_sample,
                                       std::span<const double> grad, const TreeParams& params) {
    SecondOrderPolicy policy{grad, params.lambda, params.gamma};
    return build_tree(store, in_sample, policy, params, nullptr);
}

}  // namespace detail
}  // namespace mph::learn
