#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mph/common.hpp"

namespace mph::hpo {

using ParamValue = std::variant<double, std::int64_t, std::string>;

enum class DimKind { Uniform, LogUniform, Integer, LogInteger, Categorical };

struct Dimension {
    std::string name;
    DimKind kind = DimKind::Uniform;
    double low = 0.0;   // numeric kinds
    double high = 0.0;  // numeric kinds
    std::vector<std::string> categories;  // categorical kind

    bool is_numeric() const { return kind != DimKind::Categorical; }
    bool is_integer() const { return kind == DimKind::Integer || kind == DimKind::LogInteger; }
    bool is_log() const { return kind == DimKind::LogUniform || kind == DimKind::LogInteger; }
};

/// Ordered list of search dimensions.
class ParamSpace {
public:
    ParamSpace() = default;
    explicit ParamSpace(std::vector<Dimension> dims);

    static Dimension uniform(std::string name, double lo, double hi);
    static Dimension log_uniform(std::string name, double lo, double hi);
    static Dimension integer(std::string name, std::int64_t lo, std::int64_t hi);
    static Dimension log_integer(std::string name, std::int64_t lo, std::int64_t hi);
    static Dimension categorical(std::string name, std::vector<std::string> categories);

    const std::vector<Dimension>& dimensions() const { return dims_; }
    bool empty() const { return dims_.empty(); }

    /// Throws ValidationError if a value is missing, mistyped, or out of bounds.
    void check_setting(const std::map<std::string, ParamValue>& values) const;

private:
    std::vector<Dimension> dims_;
};

/// A concrete assignment, one value per dimension.
struct ParamSetting {
    std::map<std::string, ParamValue> values;

    double get_double(const std::string& name) const;
    std::int64_t get_int(const std::string& name) const;
    const std::string& get_string(const std::string& name) const;
    bool has(const std::string& name) const { return values.count(name) != 0; }

    bool operator==(const ParamSetting&) const = default;
    std::string to_json_string() const;
};

/// One evaluated (setting, budget) pair.
struct Trial {
    ParamSetting setting;
    double loss = 0.0;                // MAE; +inf when the evaluation failed
    double budget = 1.0;              // training-row fraction in (0, 1]
    std::vector<double> fold_losses;  // per-fold values when k-fold scored
    int round = 0;                    // halving round; -1 for sampler warmup trials
    std::optional<std::string> error;
};

}  // namespace mph::hpo
