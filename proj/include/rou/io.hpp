#pragma once

/**
 * @file io.hpp
 * @brief JSON encoding of parameter types and CSV encoding of paths.
 *
 * Boundary encoding: "Free", "LowerAtZero", or {"Double": {"d": <real>}}.
 * CSV floats are printed with 17 significant digits.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rou/errors.hpp"
#include "rou/model.hpp"

namespace rou {

inline constexpr int kSchemaVersion = 1;

inline void to_json(nlohmann::json& j, const Boundary& b) {
    switch (b.kind) {
    case BoundaryKind::Free: j = "Free"; break;
    case BoundaryKind::LowerAtZero: j = "LowerAtZero"; break;
    case BoundaryKind::Double: j = {{"Double", {{"d", b.upper}}}}; break;
    }
}

inline void from_json(const nlohmann::json& j, Boundary& b) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Free") b = Boundary::free();
        else if (s == "LowerAtZero") b = Boundary::lower_at_zero();
        else throw ValidationError("unknown boundary '" + s + "'");
        return;
    }
    if (j.is_object() && j.contains("Double") && j.at("Double").contains("d")) {
        b = Boundary::two_sided(j.at("Double").at("d").get<double>());
        return;
    }
    throw ValidationError("boundary must be \"Free\", \"LowerAtZero\" or {\"Double\": {\"d\": ...}}");
}

inline void to_json(nlohmann::json& j, const ModelParams& p) {
    j = {{"alpha", p.alpha}, {"gamma", p.gamma},       {"sigma", p.sigma},
         {"epsilon", p.epsilon}, {"boundary", p.boundary}, {"x0", p.x0}};
}

inline void from_json(const nlohmann::json& j, ModelParams& p) {
    ModelParams out;
    if (j.contains("alpha")) out.alpha = j.at("alpha").get<double>();
    if (j.contains("gamma")) out.gamma = j.at("gamma").get<double>();
    if (j.contains("sigma")) out.sigma = j.at("sigma").get<double>();
    if (j.contains("epsilon")) out.epsilon = j.at("epsilon").get<double>();
    if (j.contains("boundary")) out.boundary = j.at("boundary").get<Boundary>();
    if (j.contains("x0")) out.x0 = j.at("x0").get<double>();
    p = out;
}

inline void to_json(nlohmann::json& j, const QueryParams& q) {
    j = {{"horizon_T", q.horizon_T}, {"level_b", q.level_b}};
    if (q.level_a) j["level_a"] = *q.level_a;
}

inline void from_json(const nlohmann::json& j, QueryParams& q) {
    QueryParams out;
    if (j.contains("horizon_T")) out.horizon_T = j.at("horizon_T").get<double>();
    if (j.contains("level_b")) out.level_b = j.at("level_b").get<double>();
    if (j.contains("level_a") && !j.at("level_a").is_null()) out.level_a = j.at("level_a").get<double>();
    q = out;
}

namespace csv {

inline std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Header line plus one row per index; every column must have the same length.
inline void write_columns(std::ostream& os, const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& columns) {
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format(columns[c][r]);
        os << '\n';
    }
}

inline std::vector<double> times(const DiscretePath& p) {
    std::vector<double> t(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) t[k] = p.time(k);
    return t;
}

inline void write_path(std::ostream& os, const DiscretePath& p) { write_columns(os, {"t", "value"}, {times(p), p.values()}); }

inline void write_triple(std::ostream& os, const ReflectedTriple& tr) {
    write_columns(os, {"t", "z", "l", "u"}, {times(tr.state), tr.state.values(), tr.lower.values(), tr.upper.values()});
}

/// Reads numeric columns under a header line.
inline std::vector<std::vector<double>> read_columns(std::istream& is, std::vector<std::string>* header = nullptr) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty CSV input");
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) names.push_back(cell);
    }
    std::vector<std::vector<double>> cols(names.size());
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= cols.size()) throw ValidationError("too many fields on CSV line " + std::to_string(row));
            try {
                cols[c].push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError("bad number '" + cell + "' on CSV line " + std::to_string(row));
            }
            ++c;
        }
        if (c != cols.size()) throw ValidationError("missing fields on CSV line " + std::to_string(row));
    }
    if (header) *header = names;
    return cols;
}

/// Path from a `t,value` CSV; the grid must be uniform.
inline DiscretePath read_path(std::istream& is) {
    std::vector<std::string> names;
    auto cols = read_columns(is, &names);
    if (cols.size() < 2) throw ValidationError("path CSV needs columns t,value");
    const auto& t = cols[0];
    if (t.size() < 2) throw ValidationError("path CSV needs at least two rows");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t k = 1; k < t.size(); ++k)
        if (std::fabs(t[k] - t[k - 1] - dt) > 1e-9 * std::max(1.0, std::fabs(dt)))
            throw ValidationError("path CSV time grid is not uniform");
    return DiscretePath(t.front(), dt, std::move(cols[1]));
}

} // namespace csv
} // namespace rou
