#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mph/common.hpp"

namespace mph::data {

// ---------------------------------------------------------------------------
// Calendar dates
// ---------------------------------------------------------------------------

struct Date {
    int year = 1970;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31

    std::chrono::sys_days to_sys_days() const {
        return std::chrono::sys_days{std::chrono::year{year} / std::chrono::month{month} /
                                     std::chrono::day{day}};
    }
    /// ISO weekday: 1 = Monday .. 7 = Sunday.
    unsigned iso_weekday() const { return std::chrono::weekday{to_sys_days()}.iso_encoding(); }
    bool valid() const {
        return (std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}).ok();
    }
    std::string to_iso_string() const;

    auto operator<=>(const Date&) const = default;
};

/// Accepts ISO-8601 (2018-01-31) and day/month/year (31/1/2018).
Date parse_date(const std::string& text);

Date add_days(const Date& d, int days);

// ---------------------------------------------------------------------------
// Core containers
// ---------------------------------------------------------------------------

enum class Level { Parent, Child };

struct SeriesId {
    Level level = Level::Parent;
    std::size_t index = 0;  // 0 for the parent, 0..n-1 for children

    bool operator==(const SeriesId&) const = default;
    std::string label() const;
};

/// One raw input row before feature derivation.
struct Observation {
    Date date;
    int promotion = 0;  // {0,1}
    int holiday = 0;    // {0,1}
    double demand = 0.0;
};

/// Row-aligned design matrix with named columns. Row-major storage.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> column_names, std::size_t n_rows);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return column_names_.size(); }
    const std::vector<std::string>& column_names() const { return column_names_; }

    double& at(std::size_t r, std::size_t c) { return values_[r * n_cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return values_[r * n_cols() + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * n_cols(), n_cols()};
    }
    std::span<double> row(std::size_t r) { return {values_.data() + r * n_cols(), n_cols()}; }

    /// Column index by name; throws SchemaError when absent.
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column_copy(std::size_t c) const;

    void append_column(const std::string& name, std::span<const double> values);
    FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

    /// Enforces unique column names and finite values.
    void validate() const;

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::vector<std::string> column_names_;
    std::vector<double> values_;
    std::size_t n_rows_ = 0;
};

struct SeriesData {
    FeatureMatrix features;
    std::vector<double> target;
};

/// Two-level hierarchy: one parent, n children, all on one shared date index.
struct HierarchyBundle {
    SeriesData parent;
    std::vector<SeriesData> children;
    std::vector<Date> dates;
    std::vector<int> promotion;  // kept so the bundle can be written back out
    std::vector<int> holiday;
    bool coherent = false;

    std::size_t n_rows() const { return dates.size(); }
    std::size_t n_children() const { return children.size(); }
    void validate() const;
};

/// Absolute tolerance for parent == sum(children) per row.
inline constexpr double kCoherenceTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Maps CSV header names to roles. Children are either listed explicitly or
/// discovered as `<child_prefix>0..<child_prefix>{n-1}`.
struct ColumnMap {
    std::string date = "date";
    std::string promotion = "promotion";
    std::string holiday = "holiday";
    std::string parent = "parent";
    std::string child_prefix = "child_";
    std::vector<std::string> children;  // optional explicit list

    static ColumnMap from_json_file(const std::string& path);
};

HierarchyBundle load_csv(const std::string& path, const ColumnMap& schema = {});
void save_csv(const HierarchyBundle& bundle, const std::string& path);

/// Derived design matrix: [promotion, holiday, dow_mon..dow_sun,
/// day_of_month, month, year]. Exactly one day-of-week dummy per row.
FeatureMatrix derive_calendar_features(std::span<const Date> dates, std::span<const int> promotion,
                                       std::span<const int> holiday);

inline constexpr std::size_t kCalendarFeatureCount = 12;

/// Elementwise sum of child targets. Throws ValidationError on empty input or
/// ragged lengths.
std::vector<double> aggregate_children(const std::vector<std::vector<double>>& children);

/// Builds a bundle (with derived features and coherence flag) from raw series.
HierarchyBundle make_bundle(std::vector<Date> dates, std::vector<int> promotion,
                            std::vector<int> holiday, std::vector<double> parent_demand,
                            std::vector<std::vector<double>> child_demand);

}  // namespace mph::data
