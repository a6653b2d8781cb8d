#pragma once

// Lattice input: JSON files of the form {"generators": [[...], ...]}
// (row-major), inline semicolon-separated row lists ("1,0;0,1"), and a few
// named standard lattices.

#include "lattice.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace sliceth {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Lattice lattice_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("generators"))
        throw ParseError("lattice JSON must be an object with a \"generators\" array");
    const auto& rows = j.at("generators");
    if (!rows.is_array() || rows.empty()) throw ParseError("\"generators\" must be a non-empty array");
    const int d = int(rows.size());
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i) {
        const auto& row = rows.at(std::size_t(i));
        if (!row.is_array() || int(row.size()) != d)
            throw ParseError("generator row " + std::to_string(i) + " must have " +
                             std::to_string(d) + " entries");
        for (int k = 0; k < d; ++k) g(i, k) = row.at(std::size_t(k)).get<double>();
    }
    return Lattice::from_generators(g);
}

inline Lattice lattice_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open lattice file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("lattice file " + path + ": " + e.what());
    }
    return lattice_from_json(j);
}

/// Inline form "a,b;c,d": semicolon-separated rows of comma-separated reals.
inline Lattice lattice_from_inline(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<double> vals;
        std::stringstream rs(row);
        std::string tok;
        while (std::getline(rs, tok, ',')) {
            try {
                std::size_t pos = 0;
                const double v = std::stod(tok, &pos);
                while (pos < tok.size() && std::isspace((unsigned char)tok[pos])) ++pos;
                if (pos != tok.size()) throw std::invalid_argument(tok);
                vals.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("inline lattice: cannot parse entry '" + tok + "'");
            }
        }
        if (!vals.empty()) rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw ParseError("inline lattice: no rows");
    const int d = int(rows.size());
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i) {
        if (int(rows[std::size_t(i)].size()) != d)
            throw ParseError("inline lattice: row " + std::to_string(i) + " has " +
                             std::to_string(rows[std::size_t(i)].size()) + " entries, expected " +
                             std::to_string(d));
        for (int k = 0; k < d; ++k) g(i, k) = rows[std::size_t(i)][std::size_t(k)];
    }
    return Lattice::from_generators(g);
}

/// Resolve a --lattice argument: a known name (Z1..Z5, D4), an inline row
/// list when it contains ',' or ';', otherwise a file path.
inline Lattice lattice_from_spec(const std::string& spec) {
    std::string lower;
    for (char c : spec) lower += char(std::tolower((unsigned char)c));
    if (lower == "z1") return Lattice::integer(1);
    if (lower == "z2") return Lattice::integer(2);
    if (lower == "z3") return Lattice::integer(3);
    if (lower == "z4") return Lattice::integer(4);
    if (lower == "z5") return Lattice::integer(5);
    if (lower == "d4") return Lattice::d4();
    if (spec.find(',') != std::string::npos || spec.find(';') != std::string::npos)
        return lattice_from_inline(spec);
    return lattice_from_file(spec);
}

} // namespace sliceth
