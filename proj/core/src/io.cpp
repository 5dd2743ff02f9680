#include "nuinarch/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nuinarch/errors.hpp"

namespace nuinarch {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_count(const std::string& raw, std::uint64_t& out) {
    const std::string s = trimmed(raw);
    if (s.empty()) return false;
    if (s[0] == '-') return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (const std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string level_key(double level) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.3f", level);
    return buf;
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool row_has_data = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty())
                    throw data_error("row " + std::to_string(line) +
                                     ": stray quote inside unquoted field");
                quoted = true;
                row_has_data = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                row_has_data = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_has_data || !field.empty()) {
                    row.push_back(std::move(field));
                    field.clear();
                    rows.push_back(std::move(row));
                    row.clear();
                    row_has_data = false;
                }
                ++line;
                break;
            default:
                field += c;
                row_has_data = true;
                break;
        }
    }
    if (quoted)
        throw data_error("row " + std::to_string(line) +
                         ": unterminated quoted field");
    if (row_has_data || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

CountDataset ingest_csv(const std::string& path, const std::string& column,
                        bool parse_dates) {
    const std::string text = read_text_file(path);
    const auto rows = parse_csv(text);
    if (rows.size() < 2)
        throw data_error(path + ": need a header row and data rows");
    const auto& header = rows[0];
    const std::size_t ncol = header.size();
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != ncol)
            throw data_error("row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(ncol) + " fields, found " +
                             std::to_string(rows[r].size()));

    auto column_is_numeric = [&](std::size_t c) {
        std::uint64_t v;
        for (std::size_t r = 1; r < rows.size(); ++r)
            if (!parse_count(rows[r][c], v)) return false;
        return true;
    };

    std::size_t count_col = ncol;
    if (!column.empty()) {
        for (std::size_t c = 0; c < ncol; ++c)
            if (header[c] == column) { count_col = c; break; }
        if (count_col == ncol)
            throw data_error(path + ": no column named \"" + column + "\"");
    } else {
        for (std::size_t c = 0; c < ncol; ++c)
            if (lower(header[c]) == "count") { count_col = c; break; }
        if (count_col == ncol)
            for (std::size_t c = 0; c < ncol; ++c)
                if (lower(header[c]) == "deaths") { count_col = c; break; }
        if (count_col == ncol) {
            for (std::size_t c = ncol; c-- > 0;)
                if (column_is_numeric(c)) { count_col = c; break; }
            if (count_col >= ncol)
                throw data_error(
                    path + ": no column of non-negative integer counts found");
        }
    }

    CountDataset out;
    out.count_column = header[count_col];
    out.series.values.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        std::uint64_t v;
        if (!parse_count(rows[r][count_col], v))
            throw data_error("row " + std::to_string(r + 1) +
                             ": cannot read \"" + rows[r][count_col] +
                             "\" as a non-negative integer count");
        out.series.values.push_back(v);
    }

    if (parse_dates) {
        std::size_t date_col = ncol;
        for (std::size_t c = 0; c < ncol; ++c)
            if (lower(header[c]) == "date") { date_col = c; break; }
        if (date_col < ncol) {
            out.dates.reserve(rows.size() - 1);
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const std::string d = trimmed(rows[r][date_col]);
                if (!is_iso_date(d))
                    throw data_error("row " + std::to_string(r + 1) +
                                     ": \"" + d +
                                     "\" is not an ISO-8601 calendar date");
                out.dates.push_back(d);
            }
            bool ascending = true;
            bool descending = true;
            for (std::size_t i = 1; i < out.dates.size(); ++i) {
                if (!(out.dates[i - 1] < out.dates[i])) ascending = false;
                if (!(out.dates[i - 1] > out.dates[i])) descending = false;
                if (!ascending && !descending)
                    throw data_error(path + ": row " +
                                     std::to_string(i + 2) +
                                     ": dates are not strictly monotone; "
                                     "cannot orient the series");
            }
            if (descending && out.dates.size() > 1) {
                std::reverse(out.dates.begin(), out.dates.end());
                std::reverse(out.series.values.begin(),
                             out.series.values.end());
                out.reversed = true;
            }
        }
    }

    if (out.series.values.size() < 3)
        throw data_error(path + ": need at least 3 observations");
    return out;
}

void write_series_csv(const std::string& path, const CountSeries& series) {
    std::ostringstream out;
    out << "t,count\n";
    for (std::size_t i = 0; i < series.values.size(); ++i)
        out << i << ',' << series.values[i] << '\n';
    write_text_file(path, out.str());
}

void write_values_csv(const std::string& path, const std::string& header,
                      const std::vector<double>& values) {
    std::ostringstream out;
    out << header << '\n';
    for (const double v : values) out << fmt(v) << '\n';
    write_text_file(path, out.str());
}

std::vector<double> read_values_csv(const std::string& path) {
    const auto rows = parse_csv(read_text_file(path));
    if (rows.size() < 2)
        throw data_error(path + ": need a header row and data rows");
    std::vector<double> out;
    out.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string s = trimmed(rows[r].front());
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() ||
            !std::isfinite(v))
            throw data_error("row " + std::to_string(r + 1) +
                             ": cannot read \"" + s + "\" as a real number");
        out.push_back(v);
    }
    return out;
}

void write_pairs_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& pairs) {
    std::ostringstream out;
    out << header << '\n';
    for (const auto& [a, b] : pairs) out << fmt(a) << ',' << fmt(b) << '\n';
    write_text_file(path, out.str());
}

std::string table_to_json(const CriticalValueTable& table) {
    nlohmann::json j;
    j["beta"] = table.prov.beta;
    j["gamma"] = table.prov.gamma;
    j["steps"] = table.prov.steps;
    j["draws"] = table.prov.draws;
    j["seed"] = table.prov.seed;
    nlohmann::json q = nlohmann::json::object();
    for (const auto& [level, value] : table.entries)
        q[level_key(level)] = value;
    j["quantiles"] = std::move(q);
    return j.dump(2) + "\n";
}

CriticalValueTable table_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("table is not valid JSON: ") + e.what());
    }
    CriticalValueTable table;
    try {
        table.prov.beta = j.at("beta").get<double>();
        table.prov.gamma = j.at("gamma").get<double>();
        table.prov.steps = j.at("steps").get<std::uint32_t>();
        table.prov.draws = j.at("draws").get<std::uint64_t>();
        table.prov.seed = j.at("seed").get<std::uint64_t>();
        const auto& q = j.at("quantiles");
        if (!q.is_object() || q.empty())
            throw data_error("table has no quantile entries");
        for (const auto& [key, value] : q.items()) {
            double level = 0.0;
            const auto res =
                std::from_chars(key.data(), key.data() + key.size(), level);
            if (res.ec != std::errc() || res.ptr != key.data() + key.size() ||
                !(level > 0.0) || !(level < 1.0))
                throw data_error("table has a malformed quantile level \"" +
                                 key + "\"");
            const double v = value.get<double>();
            if (!std::isfinite(v))
                throw data_error("table quantile at level " + key +
                                 " is not finite");
            table.entries.emplace_back(level, v);
        }
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("table is missing required fields: ") +
                         e.what());
    }
    if (!(table.prov.beta > 0.0) || !(table.prov.gamma >= 0.0) ||
        table.prov.steps < 2 || table.prov.draws < 1)
        throw data_error("table provenance is out of domain");
    std::sort(table.entries.begin(), table.entries.end());
    for (std::size_t i = 1; i < table.entries.size(); ++i) {
        if (table.entries[i].first == table.entries[i - 1].first)
            throw data_error("table has duplicate quantile levels");
        if (table.entries[i].second < table.entries[i - 1].second)
            throw data_error("table quantiles are not monotone in the level");
    }
    return table;
}

void write_table_json(const std::string& path,
                      const CriticalValueTable& table) {
    write_text_file(path, table_to_json(table));
}

CriticalValueTable read_table_json(const std::string& path) {
    return table_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw data_error("cannot read " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw data_error("cannot write " + path);
}

}  // namespace nuinarch
