#include "mph/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mph/kernels.hpp"

namespace mph::data {

// ---------------------------------------------------------------------------
// Dates
// ---------------------------------------------------------------------------

std::string Date::to_iso_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
    return buf;
}

Date parse_date(const std::string& text) {
    int a = 0, b = 0, c = 0;
    char sep1 = 0, sep2 = 0, trail = 0;
    int matched = std::sscanf(text.c_str(), "%d%c%d%c%d%c", &a, &sep1, &b, &sep2, &c, &trail);
    if (matched != 5 || sep1 != sep2) throw Error("unrecognized date '" + text + "'");
    Date d;
    if (sep1 == '-') {
        d = Date{a, static_cast<unsigned>(b), static_cast<unsigned>(c)};
    } else if (sep1 == '/') {
        // day/month/year
        d = Date{c, static_cast<unsigned>(b), static_cast<unsigned>(a)};
    } else {
        throw Error("unrecognized date separator in '" + text + "'");
    }
    if (!d.valid()) throw Error("invalid calendar date '" + text + "'");
    return d;
}

Date add_days(const Date& d, int days) {
    std::chrono::sys_days sd = d.to_sys_days() + std::chrono::days{days};
    std::chrono::year_month_day ymd{sd};
    return Date{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day())};
}

std::string SeriesId::label() const {
    return level == Level::Parent ? std::string("parent") : "child_" + std::to_string(index);
}

// ---------------------------------------------------------------------------
// FeatureMatrix
// ---------------------------------------------------------------------------

FeatureMatrix::FeatureMatrix(std::vector<std::string> column_names, std::size_t n_rows)
    : column_names_(std::move(column_names)),
      values_(n_rows * column_names_.size(), 0.0),
      n_rows_(n_rows) {}

std::size_t FeatureMatrix::column_index(const std::string& name) const {
    auto it = std::find(column_names_.begin(), column_names_.end(), name);
    if (it == column_names_.end()) throw SchemaError("no column named '" + name + "'");
    return static_cast<std::size_t>(it - column_names_.begin());
}

std::vector<double> FeatureMatrix::column_copy(std::size_t c) const {
    std::vector<double> out(n_rows_);
    for (std::size_t r = 0; r < n_rows_; ++r) out[r] = at(r, c);
    return out;
}

void FeatureMatrix::append_column(const std::string& name, std::span<const double> values) {
    if (values.size() != n_rows_)
        throw ValidationError("appended column '" + name + "' has " +
                              std::to_string(values.size()) + " rows, matrix has " +
                              std::to_string(n_rows_));
    std::size_t old_cols = n_cols();
    std::vector<double> next(n_rows_ * (old_cols + 1));
    for (std::size_t r = 0; r < n_rows_; ++r) {
        for (std::size_t c = 0; c < old_cols; ++c) next[r * (old_cols + 1) + c] = at(r, c);
        next[r * (old_cols + 1) + old_cols] = values[r];
    }
    column_names_.push_back(name);
    values_ = std::move(next);
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
    FeatureMatrix out(column_names_, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < n_cols(); ++c) out.at(i, c) = at(rows[i], c);
    }
    return out;
}

void FeatureMatrix::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& name : column_names_) {
        if (!seen.insert(name).second) throw SchemaError("duplicate column name '" + name + "'");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("feature matrix contains a non-finite value");
    }
}

// ---------------------------------------------------------------------------
// HierarchyBundle
// ---------------------------------------------------------------------------

void HierarchyBundle::validate() const {
    std::size_t n = dates.size();
    if (parent.target.size() != n || parent.features.n_rows() != n)
        throw ValidationError("parent series length does not match the date index");
    for (std::size_t j = 0; j < children.size(); ++j) {
        if (children[j].target.size() != n || children[j].features.n_rows() != n)
            throw ValidationError("child " + std::to_string(j) +
                                  " length does not match the date index");
    }
    for (std::size_t t = 1; t < n; ++t) {
        if (!(dates[t - 1] < dates[t]))
            throw ValidationError("dates are not strictly increasing at row " + std::to_string(t));
    }
    parent.features.validate();
    for (const auto& c : children) c.features.validate();
}

namespace {

bool compute_coherent(const HierarchyBundle& b) {
    for (std::size_t t = 0; t < b.n_rows(); ++t) {
        double s = 0.0;
        for (const auto& c : b.children) s += c.target[t];
        if (std::abs(b.parent.target[t] - s) > kCoherenceTolerance) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

FeatureMatrix derive_calendar_features(std::span<const Date> dates, std::span<const int> promotion,
                                       std::span<const int> holiday) {
    if (promotion.size() != dates.size() || holiday.size() != dates.size())
        throw ValidationError("dates, promotion, and holiday must have equal lengths");
    static const std::vector<std::string> names = {
        "promotion", "holiday", "dow_mon",      "dow_tue", "dow_wed", "dow_thu",
        "dow_fri",   "dow_sat", "dow_sun",      "day_of_month", "month", "year"};
    FeatureMatrix m(names, dates.size());
    for (std::size_t r = 0; r < dates.size(); ++r) {
        m.at(r, 0) = static_cast<double>(promotion[r]);
        m.at(r, 1) = static_cast<double>(holiday[r]);
        unsigned wd = dates[r].iso_weekday();  // 1=Mon..7=Sun
        m.at(r, 1 + wd) = 1.0;
        m.at(r, 9) = static_cast<double>(dates[r].day);
        m.at(r, 10) = static_cast<double>(dates[r].month);
        m.at(r, 11) = static_cast<double>(dates[r].year);
    }
    return m;
}

std::vector<double> aggregate_children(const std::vector<std::vector<double>>& children) {
    if (children.empty()) throw ValidationError("aggregate_children requires at least one child");
    std::size_t n = children[0].size();
    for (const auto& c : children) {
        if (c.size() != n) throw ValidationError("child series have unequal lengths");
    }
    std::vector<double> out(n, 0.0);
    for (const auto& c : children) kernels::add(c, out);
    return out;
}

HierarchyBundle make_bundle(std::vector<Date> dates, std::vector<int> promotion,
                            std::vector<int> holiday, std::vector<double> parent_demand,
                            std::vector<std::vector<double>> child_demand) {
    HierarchyBundle b;
    FeatureMatrix features = derive_calendar_features(dates, promotion, holiday);
    b.parent = SeriesData{features, std::move(parent_demand)};
    b.children.reserve(child_demand.size());
    for (auto& y : child_demand) b.children.push_back(SeriesData{features, std::move(y)});
    b.dates = std::move(dates);
    b.promotion = std::move(promotion);
    b.holiday = std::move(holiday);
    b.validate();
    b.coherent = compute_coherent(b);
    return b;
}

// ---------------------------------------------------------------------------
// CSV I/O
// ---------------------------------------------------------------------------

ColumnMap ColumnMap::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open schema file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("schema file '" + path + "': " + e.what());
    }
    ColumnMap m;
    m.date = j.value("date", m.date);
    m.promotion = j.value("promotion", m.promotion);
    m.holiday = j.value("holiday", m.holiday);
    m.parent = j.value("parent", m.parent);
    m.child_prefix = j.value("child_prefix", m.child_prefix);
    if (j.contains("children")) m.children = j["children"].get<std::vector<std::string>>();
    return m;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    // Simple CSV: no quoted fields in the dataset format.
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_demand(const std::string& cell, std::size_t line_no, const std::string& col) {
    std::string t = trim(cell);
    if (t.empty()) throw ParseError("missing value in column '" + col + "'", line_no);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
        throw ParseError("unparseable number '" + t + "' in column '" + col + "'", line_no);
    if (!std::isfinite(v))
        throw ParseError("non-finite value in column '" + col + "'", line_no);
    return v;
}

int parse_flag(const std::string& cell, std::size_t line_no, const std::string& col) {
    std::string t = trim(cell);
    if (t == "0") return 0;
    if (t == "1") return 1;
    throw ParseError("column '" + col + "' must be 0 or 1, got '" + t + "'", line_no);
}

}  // namespace

HierarchyBundle load_csv(const std::string& path, const ColumnMap& schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open data file '" + path + "'");

    std::string header_line;
    if (!std::getline(in, header_line)) throw ParseError("empty file", 1);
    std::vector<std::string> header = split_csv_line(header_line);
    for (auto& h : header) h = trim(h);

    auto find_col = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw SchemaError("missing required column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };

    std::size_t c_date = find_col(schema.date);
    std::size_t c_promo = find_col(schema.promotion);
    std::size_t c_holiday = find_col(schema.holiday);
    std::size_t c_parent = find_col(schema.parent);

    std::vector<std::string> child_names = schema.children;
    if (child_names.empty()) {
        // Discover child_0..child_{n-1}; indices must be contiguous from 0.
        for (std::size_t j = 0;; ++j) {
            std::string name = schema.child_prefix + std::to_string(j);
            if (std::find(header.begin(), header.end(), name) == header.end()) break;
            child_names.push_back(name);
        }
    }
    if (child_names.empty())
        throw SchemaError("no child demand columns found (expected '" + schema.child_prefix +
                          "0', ... or an explicit schema)");
    std::vector<std::size_t> c_children;
    for (const auto& name : child_names) c_children.push_back(find_col(name));

    struct Row {
        Date date;
        int promo, holiday;
        double parent;
        std::vector<double> children;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() < header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " columns, got " +
                             std::to_string(cells.size()), line_no);
        Row row;
        try {
            row.date = parse_date(trim(cells[c_date]));
        } catch (const std::exception& e) {
            throw ParseError(e.what(), line_no);
        }
        row.promo = parse_flag(cells[c_promo], line_no, schema.promotion);
        row.holiday = parse_flag(cells[c_holiday], line_no, schema.holiday);
        row.parent = parse_demand(cells[c_parent], line_no, schema.parent);
        if (row.parent < 0.0)
            throw ParseError("negative demand in column '" + schema.parent + "'", line_no);
        row.children.reserve(c_children.size());
        for (std::size_t j = 0; j < c_children.size(); ++j) {
            double v = parse_demand(cells[c_children[j]], line_no, child_names[j]);
            if (v < 0.0)
                throw ParseError("negative demand in column '" + child_names[j] + "'", line_no);
            row.children.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data rows", line_no);

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t t = 1; t < rows.size(); ++t) {
        if (rows[t].date == rows[t - 1].date)
            throw ValidationError("duplicate date " + rows[t].date.to_iso_string());
    }

    std::size_t n = rows.size();
    std::vector<Date> dates(n);
    std::vector<int> promo(n), holiday(n);
    std::vector<double> parent(n);
    std::vector<std::vector<double>> children(c_children.size(), std::vector<double>(n));
    for (std::size_t t = 0; t < n; ++t) {
        dates[t] = rows[t].date;
        promo[t] = rows[t].promo;
        holiday[t] = rows[t].holiday;
        parent[t] = rows[t].parent;
        for (std::size_t j = 0; j < children.size(); ++j) children[j][t] = rows[t].children[j];
    }
    return make_bundle(std::move(dates), std::move(promo), std::move(holiday), std::move(parent),
                       std::move(children));
}

void save_csv(const HierarchyBundle& bundle, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write data file '" + path + "'");
    out << "date,promotion,holiday,parent";
    for (std::size_t j = 0; j < bundle.n_children(); ++j) out << ",child_" << j;
    out << "\n";
    char buf[40];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t t = 0; t < bundle.n_rows(); ++t) {
        out << bundle.dates[t].to_iso_string() << ',' << bundle.promotion[t] << ','
            << bundle.holiday[t] << ',' << fmt(bundle.parent.target[t]);
        for (std::size_t j = 0; j < bundle.n_children(); ++j)
            out << ',' << fmt(bundle.children[j].target[t]);
        out << "\n";
    }
    if (!out) throw Error("failed while writing '" + path + "'");
}

}  // namespace mph::data
