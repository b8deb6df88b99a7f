#pragma once

#include <json.hpp>

#include "tracekit/compressor.hpp"

namespace tracekit {

// Certificate wire form:
//   {"n":..., "gammas":[{"cols":[...],"signs":[...]}], "K":..., "domain_size":...}
// height-0 certificates add "constant_signs": [[col, sign], ...];
// when requested, the padded grids ride under "uniform".
inline nlohmann::json certificate_to_json(const CompressionCertificate& cert,
                                          bool include_uniform = true) {
    nlohmann::json j;
    j["n"] = cert.n;
    j["K"] = cert.k_bound;
    j["domain_size"] = cert.domain_size;
    nlohmann::json gammas = nlohmann::json::array();
    for (const auto& g : cert.gammas) {
        nlohmann::json entry;
        entry["cols"] = g.cols;
        std::vector<int> signs;
        for (bool s : g.signs) signs.push_back(s ? 1 : 0);
        entry["signs"] = signs;
        gammas.push_back(std::move(entry));
    }
    j["gammas"] = std::move(gammas);
    if (cert.n == 0) {
        nlohmann::json table = nlohmann::json::array();
        for (auto [col, sign] : cert.constant_signs)
            table.push_back(nlohmann::json::array({col, sign ? 1 : 0}));
        j["constant_signs"] = std::move(table);
    } else if (include_uniform) {
        PaddedCertificate padded = pad_certificate(cert);
        nlohmann::json uniform;
        uniform["f_n"] = padded.f_n;
        nlohmann::json s = nlohmann::json::array();
        for (const auto& row : padded.s) {
            std::vector<int> bits;
            for (bool v : row) bits.push_back(v ? 1 : 0);
            s.push_back(bits);
        }
        uniform["s"] = std::move(s);
        uniform["b"] = padded.b;
        j["uniform"] = std::move(uniform);
    }
    return j;
}

inline CompressionCertificate certificate_from_json(const nlohmann::json& j) {
    CompressionCertificate cert;
    cert.n = j.at("n").get<int>();
    cert.k_bound = j.at("K").get<int>();
    cert.domain_size = j.at("domain_size").get<int>();
    for (const auto& entry : j.at("gammas")) {
        CompressionCertificate::Gamma g;
        g.cols = entry.at("cols").get<std::vector<ColId>>();
        for (int s : entry.at("signs").get<std::vector<int>>()) g.signs.push_back(s != 0);
        cert.gammas.push_back(std::move(g));
    }
    if (j.contains("constant_signs"))
        for (const auto& pair : j.at("constant_signs"))
            cert.constant_signs.emplace_back(pair.at(0).get<ColId>(), pair.at(1).get<int>() != 0);
    return cert;
}

}  // namespace tracekit
