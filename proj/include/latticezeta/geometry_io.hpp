#pragma once

// Geometry file format: UTF-8 JSON, one top-level object
//   { "dimension": d,
//     "terms": [ { "coeff": +-1, "kind": "parallelepiped"|"corner",
//                  "basis": [d*d floats, row-major],
//                  "counts": [d ints]            (parallelepiped only),
//                  "offset": [d floats] }, ... ] }
// Unknown keys are rejected.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "latticezeta/geometry.hpp"

namespace latticezeta {

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

inline Mat parse_basis_row_major(const nlohmann::json& j, int d) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(d * d))
        throw ParseError("basis must be a row-major list of d*d numbers", 0);
    Mat m(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m(i, k) = j[i * d + k].get<double>();
    return m;
}

inline Vec parse_vec(const nlohmann::json& j, int d, const char* name) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(d))
        throw ParseError(std::string(name) + " must have d entries", 0);
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = j[i].get<double>();
    return v;
}

}  // namespace detail

inline GeometrySpec parse_geometry(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), detail::line_of_offset(text, e.byte));
    }
    if (!root.is_object()) throw ParseError("top level must be an object", 1);
    for (auto it = root.begin(); it != root.end(); ++it)
        if (it.key() != "dimension" && it.key() != "terms")
            throw ParseError("unknown key '" + it.key() + "'", 1);
    if (!root.contains("dimension") || !root.contains("terms"))
        throw ParseError("need 'dimension' and 'terms'", 1);

    int d = root["dimension"].get<int>();
    if (d < 1 || d > kMaxDim) throw ParseError("dimension must be 1..4", 1);

    GeometrySpec g;
    for (const auto& jt : root["terms"]) {
        if (!jt.is_object()) throw ParseError("term must be an object", 1);
        for (auto it = jt.begin(); it != jt.end(); ++it) {
            const std::string& k = it.key();
            if (k != "coeff" && k != "kind" && k != "basis" && k != "counts" && k != "offset")
                throw ParseError("unknown key '" + k + "' in term", 1);
        }
        int coeff = jt.at("coeff").get<int>();
        if (coeff != 1 && coeff != -1) throw ParseError("coeff must be +1 or -1", 1);
        std::string kind = jt.at("kind").get<std::string>();
        LatticeBasis basis =
            LatticeBasis::from_columns(detail::parse_basis_row_major(jt.at("basis"), d));
        Vec offset = detail::parse_vec(jt.at("offset"), d, "offset");

        GeometryTerm term;
        term.coeff = coeff;
        if (kind == "parallelepiped") {
            if (!jt.contains("counts")) throw ParseError("parallelepiped needs 'counts'", 1);
            term.is_corner = false;
            term.piped.basis = basis;
            term.piped.offset = offset;
            const auto& jc = jt.at("counts");
            if (!jc.is_array() || jc.size() != static_cast<std::size_t>(d))
                throw ParseError("counts must have d entries", 1);
            for (int i = 0; i < d; ++i) {
                term.piped.counts[i] = jc[i].get<std::int64_t>();
                if (term.piped.counts[i] < 0) throw ParseError("counts must be >= 0", 1);
            }
        } else if (kind == "corner") {
            if (jt.contains("counts")) throw ParseError("corner takes no 'counts'", 1);
            term.is_corner = true;
            term.corner.basis = basis;
            term.corner.offset = offset;
        } else {
            throw ParseError("kind must be 'parallelepiped' or 'corner'", 1);
        }
        g.terms.push_back(std::move(term));
    }
    if (g.terms.empty()) throw ParseError("geometry has no terms", 1);
    if (!validate_indicator(g))
        throw ParseError("signed terms do not describe a {0,1} indicator", 1);
    return g;
}

inline GeometrySpec load_geometry(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open geometry file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_geometry(ss.str());
}

}  // namespace latticezeta
