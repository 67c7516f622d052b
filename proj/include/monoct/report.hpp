#pragma once

#include "monoct/theta.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace monoct {

// machine-readable run output: every numeric result travels with a residual
// or tolerance, and a label describing which relation produced it
struct RunReport {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::map<std::string, double> residuals;
    std::map<std::string, std::string> provenance;

    nlohmann::json to_json() const;
    std::string to_csv() const; // RFC 4180, complex columns suffixed _re/_im
};

nlohmann::json complex_to_json(const cplx& v);
nlohmann::json cvec_to_json(const CVec& v);
nlohmann::json cmat_to_json(const CMat& m);

} // namespace monoct
