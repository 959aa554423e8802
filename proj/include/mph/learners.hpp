#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mph/dataset.hpp"
#include "mph/params.hpp"

namespace mph::learn {

// Fixed family order; ties in model selection resolve to the earlier entry.
enum class Family { MLP = 0, RF = 1, GB = 2, XGBStyle = 3 };

inline constexpr Family kAllFamilies[] = {Family::MLP, Family::RF, Family::GB, Family::XGBStyle};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// The spec'd search space for a family.
hpo::ParamSpace default_space(Family f);

/// A reasonable fixed setting (used by tests and degenerate searches).
hpo::ParamSetting default_setting(Family f);

// ---------------------------------------------------------------------------
// Regression trees (shared by RF / GB / XGBStyle)
// ---------------------------------------------------------------------------

struct TreeNode {
    std::int32_t feature = -1;  // -1 => leaf
    double threshold = 0.0;     // go left when x[feature] < threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf prediction
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root; empty means zero tree

    double predict_row(std::span<const double> row) const;
    int depth() const;
};

// ---------------------------------------------------------------------------
// Fitted models
// ---------------------------------------------------------------------------

class Regressor {
public:
    virtual ~Regressor() = default;

    Family family() const { return family_; }
    const hpo::ParamSetting& setting() const { return setting_; }
    const std::vector<std::string>& columns() const { return columns_; }

    /// Per-row predictions; throws SchemaError when X's columns differ from
    /// the training columns (names and order).
    std::vector<double> predict(const data::FeatureMatrix& X) const;

    nlohmann::json to_json() const;

protected:
    Regressor(Family family, hpo::ParamSetting setting, std::vector<std::string> columns)
        : family_(family), setting_(std::move(setting)), columns_(std::move(columns)) {}

    virtual double predict_row(std::span<const double> row) const = 0;
    virtual nlohmann::json state_to_json() const = 0;

    Family family_;
    hpo::ParamSetting setting_;
    std::vector<std::string> columns_;

    friend std::unique_ptr<Regressor> regressor_from_json(const nlohmann::json& j);
};

/// Trains a model. `budget` in (0, 1]: fractions below 1 train on a seeded
/// uniform subsample of ceil(budget * n) rows. Deterministic given
/// (family, setting, X, y, budget, seed).
std::unique_ptr<Regressor> fit(Family family, const hpo::ParamSetting& setting,
                               const data::FeatureMatrix& X, std::span<const double> y,
                               double budget, std::uint64_t seed);

std::unique_ptr<Regressor> regressor_from_json(const nlohmann::json& j);

/// Per-iteration training MSE for boosted models (GB / XGBStyle); empty for
/// other families. Index m holds the MSE after tree m was added.
std::span<const double> training_mse_trace(const Regressor& model);

// ---------------------------------------------------------------------------
// MLP internals, exposed for gradient checking
// ---------------------------------------------------------------------------

enum class Activation { Relu, Tanh };

struct MlpArch {
    std::size_t input_dim = 0;
    int hidden_layers = 1;  // 1 or 2
    std::size_t units = 8;
    Activation activation = Activation::Relu;

    std::size_t n_weights() const;
};

/// Raw network over a flat weight vector (no input/output scaling).
class MlpNet {
public:
    explicit MlpNet(MlpArch arch);

    const MlpArch& arch() const { return arch_; }
    std::size_t n_weights() const { return arch_.n_weights(); }

    double forward(std::span<const double> weights, std::span<const double> row) const;

    /// loss(w) = mean_i (f(x_i; w) - y_i)^2 + l2 * sum of squared matrix
    /// weights (biases unpenalized). Returns the loss and writes d loss / d w.
    double loss_gradient(std::span<const double> weights, const data::FeatureMatrix& X,
                         std::span<const double> y, double l2, std::span<double> grad) const;

private:
    friend class MlpModel;
    struct LayerSpec {
        std::size_t in, out;
        std::size_t w_offset, b_offset;
    };
    std::vector<LayerSpec> layers_;
    MlpArch arch_;

    // Forward pass keeping pre-activations; scratch sized by caller.
    double forward_cached(std::span<const double> weights, std::span<const double> row,
                          std::vector<std::vector<double>>& z,
                          std::vector<std::vector<double>>& h) const;
    void accumulate_gradient(std::span<const double> weights, std::span<const double> row,
                             double dout, const std::vector<std::vector<double>>& z,
                             const std::vector<std::vector<double>>& h,
                             std::span<double> grad) const;
};

}  // namespace mph::learn
