#pragma once

#include <string>
#include <vector>

#include "nuinarch/empirical.hpp"
#include "nuinarch/simulate.hpp"

namespace nuinarch {

// A count series read from disk, with whatever context the file provided.
struct CountDataset {
    CountSeries series;
    std::vector<std::string> dates;  // empty when the file had no date column
    std::string count_column;
    bool reversed = false;  // true when descending dates were flipped
};

// Reads a delimited file with a header row. The count column is chosen as:
// an explicit `column` name if given, else a column named "count", else
// "deaths" (both case-insensitive), else the rightmost column whose every
// cell parses as a non-negative integer. A "date" column, when present and
// `parse_dates` is set, must hold ISO-8601 calendar dates in strictly
// ascending or strictly descending order; descending input is reversed.
// Throws data_error on malformed input, naming the offending row.
CountDataset ingest_csv(const std::string& path,
                        const std::string& column = "",
                        bool parse_dates = true);

// Minimal delimited-text reader: quoted fields, doubled-quote escapes,
// LF or CRLF line ends.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

void write_series_csv(const std::string& path, const CountSeries& series);

// One numeric column with a header line.
void write_values_csv(const std::string& path, const std::string& header,
                      const std::vector<double>& values);
std::vector<double> read_values_csv(const std::string& path);

void write_pairs_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& pairs);

std::string table_to_json(const CriticalValueTable& table);
CriticalValueTable table_from_json(const std::string& text);
void write_table_json(const std::string& path, const CriticalValueTable& table);
CriticalValueTable read_table_json(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nuinarch
