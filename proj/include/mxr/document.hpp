#pragma once

// Versioned JSON document for fundamental data: signature, grid and the
// flattened per-node arrays for g, S, T, nu. Round-trips losslessly.

#include <fstream>
#include <string>

#include <json.hpp>

#include "mxr/fundamental.hpp"

namespace mxr {

inline constexpr const char* kDataDocumentFormat = "mxr-fundamental-data";
inline constexpr const char* kDataDocumentVersion = "1";

inline nlohmann::json data_document_to_json(const FundamentalData& d) {
    d.require_n2("data_document_to_json");
    nlohmann::json j;
    j["format"] = kDataDocumentFormat;
    j["version"] = kDataDocumentVersion;
    j["signature"] = {{"kappa", d.sig.kappa}, {"n", d.sig.n}};
    j["grid"] = {{"u_min", d.grid.u_min}, {"u_max", d.grid.u_max},
                 {"v_min", d.grid.v_min}, {"v_max", d.grid.v_max},
                 {"nu", d.grid.nu},       {"nv", d.grid.nv}};
    std::vector<double> g, S, T, nu;
    const std::size_t m = static_cast<std::size_t>(d.grid.size());
    g.reserve(4 * m);
    S.reserve(4 * m);
    T.reserve(2 * m);
    nu.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) g.push_back(d.g[k](r, c));
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) S.push_back(d.S[k](r, c));
        T.push_back(d.T[k](0));
        T.push_back(d.T[k](1));
        nu.push_back(d.nu[k]);
    }
    j["g"] = g;
    j["S"] = S;
    j["T"] = T;
    j["nu"] = nu;
    return j;
}

inline FundamentalData data_document_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j["format"] != kDataDocumentFormat)
        throw ValidationError("data document: missing or unknown format tag");
    if (!j.contains("version") || j["version"] != kDataDocumentVersion)
        throw ValidationError("data document: unsupported version");
    for (const char* key : {"signature", "grid", "g", "S", "T", "nu"})
        if (!j.contains(key))
            throw ValidationError(std::string("data document: missing field '") + key + "'");
    FundamentalData d;
    d.sig = Signature(j["signature"].at("kappa").get<int>(),
                      j["signature"].at("n").get<int>());
    if (d.sig.n != 2)
        throw UnsupportedError("data document: only n=2 grids are supported");
    const auto& gr = j["grid"];
    d.grid = ParameterGrid(gr.at("u_min").get<double>(), gr.at("u_max").get<double>(),
                           gr.at("v_min").get<double>(), gr.at("v_max").get<double>(),
                           gr.at("nu").get<int>(), gr.at("nv").get<int>());
    const std::size_t m = static_cast<std::size_t>(d.grid.size());
    const auto g = j["g"].get<std::vector<double>>();
    const auto S = j["S"].get<std::vector<double>>();
    const auto T = j["T"].get<std::vector<double>>();
    const auto nu = j["nu"].get<std::vector<double>>();
    if (g.size() != 4 * m || S.size() != 4 * m || T.size() != 2 * m || nu.size() != m)
        throw ValidationError("data document: array length does not match nu*nv");
    d.allocate();
    for (std::size_t k = 0; k < m; ++k) {
        d.g[k] = Mat(2, 2);
        d.S[k] = Mat(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                d.g[k](r, c) = g[4 * k + static_cast<std::size_t>(2 * r + c)];
                d.S[k](r, c) = S[4 * k + static_cast<std::size_t>(2 * r + c)];
            }
        d.T[k] = Vec(2);
        d.T[k] << T[2 * k], T[2 * k + 1];
        d.nu[k] = nu[k];
    }
    return d;
}

inline void write_data_document(const FundamentalData& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("write_data_document: cannot open " + path);
    out << data_document_to_json(d).dump(1) << "\n";
}

inline FundamentalData read_data_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("read_data_document: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("read_data_document: malformed JSON: ") + e.what());
    }
    return data_document_from_json(j);
}

}  // namespace mxr
