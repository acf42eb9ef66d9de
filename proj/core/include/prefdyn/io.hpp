#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prefdyn/structure.hpp"
#include "prefdyn/types.hpp"

namespace prefdyn {

// Canonical matrix file: JSON object with fields `k` and `p` (row-major array
// of K arrays of K numbers). Parsers reject invariant violations.
PreferenceMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const PreferenceMatrix& P);
PreferenceMatrix parse_matrix_json(const std::string& text);
std::string matrix_to_json(const PreferenceMatrix& P);

// Matrix collection: JSON array of {prompt_id, response_ids, k, p, class, order?}.
struct CollectionEntry {
    std::string prompt_id;
    std::vector<std::string> response_ids;
    PreferenceMatrix P;
    std::string cls;
    std::optional<std::vector<int>> order;
};

std::vector<CollectionEntry> read_collection(const std::string& path);
void write_collection(const std::string& path, const std::vector<CollectionEntry>& entries);

// 17 significant digits: doubles round-trip exactly through this.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Minimal self-contained polyline chart: one series per column.
void write_svg_lines(const std::string& path, const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, const std::string& title);

} // namespace prefdyn
