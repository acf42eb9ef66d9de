#include "prefdyn/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"

namespace prefdyn {

namespace {

PreferenceMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("p")) {
        throw ValidationError("ParseError", "matrix document needs fields k and p");
    }
    int k = j["k"].get<int>();
    if (!j["p"].is_array() || static_cast<int>(j["p"].size()) != k) {
        throw ValidationError("ParseError", "p must be an array of k rows");
    }
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(k) * k);
    for (const auto& row : j["p"]) {
        if (!row.is_array() || static_cast<int>(row.size()) != k) {
            throw ValidationError("ParseError", "p rows must have k entries");
        }
        for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return validate_preference(k, flat);
}

nlohmann::json matrix_to_json_obj(const PreferenceMatrix& P) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < P.k; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < P.k; ++j) row.push_back(P(i, j));
        rows.push_back(std::move(row));
    }
    return nlohmann::json{{"k", P.k}, {"p", std::move(rows)}};
}

} // namespace

PreferenceMatrix parse_matrix_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("ParseError", e.what());
    }
    return matrix_from_json(j);
}

std::string matrix_to_json(const PreferenceMatrix& P) {
    return matrix_to_json_obj(P).dump(2);
}

PreferenceMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("ParseError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_matrix_json(ss.str());
}

void write_matrix_file(const std::string& path, const PreferenceMatrix& P) {
    std::ofstream out(path);
    if (!out) throw ValidationError("ParseError", "cannot write " + path);
    out << matrix_to_json(P) << "\n";
}

std::vector<CollectionEntry> read_collection(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("ParseError", "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("ParseError", e.what());
    }
    if (!j.is_array()) throw ValidationError("ParseError", "collection must be a JSON array");
    std::vector<CollectionEntry> out;
    for (const auto& ej : j) {
        CollectionEntry e;
        e.prompt_id = ej.at("prompt_id").get<std::string>();
        for (const auto& rid : ej.at("response_ids")) e.response_ids.push_back(rid.get<std::string>());
        e.P = matrix_from_json(ej);
        e.cls = ej.value("class", std::string("?"));
        if (ej.contains("order")) {
            std::vector<int> ord;
            for (const auto& o : ej["order"]) ord.push_back(o.get<int>());
            e.order = std::move(ord);
        }
        out.push_back(std::move(e));
    }
    return out;
}

void write_collection(const std::string& path, const std::vector<CollectionEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json ej = matrix_to_json_obj(e.P);
        ej["prompt_id"] = e.prompt_id;
        ej["response_ids"] = e.response_ids;
        ej["class"] = e.cls;
        if (e.order) ej["order"] = *e.order;
        arr.push_back(std::move(ej));
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("ParseError", "cannot write " + path);
    out << arr.dump(2) << "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("ParseError", "cannot write " + path);
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

void write_svg_lines(const std::string& path, const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, const std::string& title) {
    const double W = 720, H = 420, ml = 60, mr = 140, mt = 40, mb = 40;
    size_t n = 0;
    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto& s : series) {
        n = std::max(n, s.size());
        for (double v : s) {
            if (first) {
                lo = hi = v;
                first = false;
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi <= lo) hi = lo + 1.0;
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ofstream out(path);
    if (!out) throw ValidationError("ParseError", "cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"14\">" << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << H - mb << "\" text-anchor=\"end\" font-size=\"10\""
        << " font-family=\"sans-serif\">" << format_double(lo) << "</text>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\" font-size=\"10\""
        << " font-family=\"sans-serif\">" << format_double(hi) << "</text>\n";

    for (size_t s = 0; s < series.size(); ++s) {
        if (series[s].empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << colors[s % 8] << "\" stroke-width=\"1.2\" points=\"";
        for (size_t t = 0; t < series[s].size(); ++t) {
            double x = ml + (W - ml - mr) * (n > 1 ? static_cast<double>(t) / (n - 1) : 0.0);
            double y = H - mb - (H - mt - mb) * (series[s][t] - lo) / (hi - lo);
            out << x << "," << y << " ";
        }
        out << "\"/>\n";
        double ly = mt + 16.0 * static_cast<double>(s);
        out << "<rect x=\"" << W - mr + 10 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\""
            << colors[s % 8] << "\"/>\n";
        out << "<text x=\"" << W - mr + 26 << "\" y=\"" << ly + 9 << "\" font-size=\"11\""
            << " font-family=\"sans-serif\">" << (s < labels.size() ? labels[s] : "") << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace prefdyn
