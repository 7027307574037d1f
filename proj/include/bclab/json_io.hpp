#pragma once

#include <string>

#include "contfrac.hpp"
#include "moments.hpp"
#include "rational.hpp"

#include "json.hpp"

namespace bclab {

using json = nlohmann::json;

inline json certificate_to_json(const GammaCertificate& cert) {
    json j;
    j["kind"] = cert.kind;
    j["prime_denominators"] = cert.prime_denominators;
    json fixed = json::object();
    for (const auto& [k, a] : cert.fixed_pattern) fixed[std::to_string(k)] = to_string(a);
    j["fixed_pattern"] = fixed;
    if (cert.kind == "psi") {
        json table = json::array();
        for (const auto& [q, v] : cert.psi_table)
            table.push_back({std::to_string(q), to_string(v)});
        j["psi_table"] = table;
    } else {
        json table = json::array();
        for (const auto& [q, f] : cert.f_table)
            table.push_back({to_string(q), to_string(f)});
        j["f_table"] = table;
    }
    json steps = json::array();
    for (const GammaStep& s : cert.steps) {
        json step;
        step["k"] = s.k;
        step["window"] = {to_string(s.window_lo), to_string(s.window_hi)};
        step["sum"] = to_string(s.sum);
        step["bound"] = to_string(s.bound);
        step["a_k"] = to_string(s.a_k);
        step["q_k"] = to_string(s.q_k);
        step["q_prev"] = to_string(s.q_prev);
        step["margin_bound"] = to_string(s.margin_bound);
        steps.push_back(step);
    }
    j["steps"] = steps;
    return j;
}

inline GammaCertificate certificate_from_json(const json& j) {
    GammaCertificate cert;
    cert.kind = j.at("kind").get<std::string>();
    cert.prime_denominators = j.at("prime_denominators").get<bool>();
    for (const auto& [k, v] : j.at("fixed_pattern").items())
        cert.fixed_pattern[std::stoul(k)] = Int(v.get<std::string>());
    if (cert.kind == "psi") {
        for (const auto& row : j.at("psi_table"))
            cert.psi_table[std::stoull(row.at(0).get<std::string>())] =
                parse_rat(row.at(1).get<std::string>());
    } else {
        for (const auto& row : j.at("f_table"))
            cert.f_table.emplace_back(Int(row.at(0).get<std::string>()),
                                      Int(row.at(1).get<std::string>()));
    }
    for (const auto& sj : j.at("steps")) {
        GammaStep s;
        s.k = sj.at("k").get<size_t>();
        s.window_lo = Int(sj.at("window").at(0).get<std::string>());
        s.window_hi = Int(sj.at("window").at(1).get<std::string>());
        s.sum = parse_rat(sj.at("sum").get<std::string>());
        s.bound = Int(sj.at("bound").get<std::string>());
        s.a_k = Int(sj.at("a_k").get<std::string>());
        s.q_k = Int(sj.at("q_k").get<std::string>());
        s.q_prev = Int(sj.at("q_prev").get<std::string>());
        s.margin_bound = Int(sj.at("margin_bound").get<std::string>());
        cert.steps.push_back(std::move(s));
    }
    return cert;
}

inline json moment_report_to_json(const MomentReport& rep) {
    json j;
    j["window"] = rep.window.members;
    j["Psi"] = to_string(rep.Psi);
    j["overlap_offdiag"] = to_string(rep.overlap_offdiag);
    j["overlap_full"] = to_string(rep.overlap_full);
    j["C_prime"] = rep.C_prime ? json(to_string(*rep.C_prime)) : json(nullptr);
    j["C_full"] = rep.C_full ? json(to_string(*rep.C_full)) : json(nullptr);
    json measures = json::object();
    for (const auto& [q, mu] : rep.measures) measures[std::to_string(q)] = to_string(mu);
    j["measures"] = measures;
    json pairs = json::array();
    for (const auto& [st, mu] : rep.pair_measures)
        pairs.push_back({st.first, st.second, to_string(mu)});
    j["pair_measures"] = pairs;
    return j;
}

inline std::string moment_report_to_csv(const MomentReport& rep) {
    std::string out = "s,t,mu_exact,mu_decimal\n";
    for (const auto& [st, mu] : rep.pair_measures)
        out += std::to_string(st.first) + "," + std::to_string(st.second) + "," +
               to_string(mu) + "," + std::to_string(mu.get_d()) + "\n";
    return out;
}

}  // namespace bclab
