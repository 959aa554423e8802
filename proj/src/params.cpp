#include "mph/params.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace mph::hpo {

ParamSpace::ParamSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    for (const auto& d : dims_) {
        if (d.kind == DimKind::Categorical) {
            if (d.categories.empty())
                throw ConfigError("dimension '" + d.name + "' has no categories");
            continue;
        }
        if (!(d.low < d.high))
            throw ConfigError("dimension '" + d.name + "' requires low < high");
        if (d.is_log() && !(d.low > 0.0))
            throw ConfigError("log dimension '" + d.name + "' requires low > 0");
    }
}

Dimension ParamSpace::uniform(std::string name, double lo, double hi) {
    return {std::move(name), DimKind::Uniform, lo, hi, {}};
}
Dimension ParamSpace::log_uniform(std::string name, double lo, double hi) {
    return {std::move(name), DimKind::LogUniform, lo, hi, {}};
}
Dimension ParamSpace::integer(std::string name, std::int64_t lo, std::int64_t hi) {
    return {std::move(name), DimKind::Integer, static_cast<double>(lo), static_cast<double>(hi), {}};
}
Dimension ParamSpace::log_integer(std::string name, std::int64_t lo, std::int64_t hi) {
    return {std::move(name), DimKind::LogInteger, static_cast<double>(lo),
            static_cast<double>(hi), {}};
}
Dimension ParamSpace::categorical(std::string name, std::vector<std::string> categories) {
    return {std::move(name), DimKind::Categorical, 0.0, 0.0, std::move(categories)};
}

void ParamSpace::check_setting(const std::map<std::string, ParamValue>& values) const {
    for (const auto& d : dims_) {
        auto it = values.find(d.name);
        if (it == values.end())
            throw ValidationError("setting is missing dimension '" + d.name + "'");
        const ParamValue& v = it->second;
        switch (d.kind) {
            case DimKind::Uniform:
            case DimKind::LogUniform: {
                const double* x = std::get_if<double>(&v);
                if (!x) throw ValidationError("dimension '" + d.name + "' expects a real value");
                if (*x < d.low || *x > d.high)
                    throw ValidationError("value for '" + d.name + "' is out of bounds");
                break;
            }
            case DimKind::Integer:
            case DimKind::LogInteger: {
                const std::int64_t* x = std::get_if<std::int64_t>(&v);
                if (!x) throw ValidationError("dimension '" + d.name + "' expects an integer");
                if (static_cast<double>(*x) < d.low || static_cast<double>(*x) > d.high)
                    throw ValidationError("value for '" + d.name + "' is out of bounds");
                break;
            }
            case DimKind::Categorical: {
                const std::string* x = std::get_if<std::string>(&v);
                if (!x) throw ValidationError("dimension '" + d.name + "' expects a category");
                bool ok = false;
                for (const auto& c : d.categories) ok = ok || c == *x;
                if (!ok)
                    throw ValidationError("value '" + *x + "' is not a category of '" + d.name +
                                          "'");
                break;
            }
        }
    }
}

double ParamSetting::get_double(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ValidationError("setting has no parameter '" + name + "'");
    if (const double* x = std::get_if<double>(&it->second)) return *x;
    if (const std::int64_t* x = std::get_if<std::int64_t>(&it->second))
        return static_cast<double>(*x);
    throw ValidationError("parameter '" + name + "' is not numeric");
}

std::int64_t ParamSetting::get_int(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ValidationError("setting has no parameter '" + name + "'");
    if (const std::int64_t* x = std::get_if<std::int64_t>(&it->second)) return *x;
    throw ValidationError("parameter '" + name + "' is not an integer");
}

const std::string& ParamSetting::get_string(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw ValidationError("setting has no parameter '" + name + "'");
    if (const std::string* x = std::get_if<std::string>(&it->second)) return *x;
    throw ValidationError("parameter '" + name + "' is not a category");
}

std::string ParamSetting::to_json_string() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, value] : values) {
        std::visit([&](const auto& v) { j[name] = v; }, value);
    }
    return j.dump();
}

}  // namespace mph::hpo
