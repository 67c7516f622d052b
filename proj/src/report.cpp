#include "monoct/report.hpp"

#include <sstream>

namespace monoct {

using nlohmann::json;

json complex_to_json(const cplx& v) { return json::array({v.real(), v.imag()}); }

json cvec_to_json(const CVec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v[i]));
    return a;
}

json cmat_to_json(const CMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json RunReport::to_json() const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["residuals"] = residuals;
    j["provenance"] = provenance;
    return j;
}

namespace {
std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

void flatten(const std::string& prefix, const json& v, std::vector<std::pair<std::string, std::string>>& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), out);
    } else if (v.is_array()) {
        // [re, im] pairs become _re/_im columns; other arrays index
        if (v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            std::ostringstream re, im;
            re.precision(17);
            im.precision(17);
            re << v[0].get<double>();
            im << v[1].get<double>();
            out.emplace_back(prefix + "_re", re.str());
            out.emplace_back(prefix + "_im", im.str());
        } else {
            for (size_t i = 0; i < v.size(); ++i)
                flatten(prefix + "[" + std::to_string(i) + "]", v[i], out);
        }
    } else if (v.is_number()) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v.get<double>();
        out.emplace_back(prefix, ss.str());
    } else {
        out.emplace_back(prefix, v.dump());
    }
}
} // namespace

std::string RunReport::to_csv() const {
    std::vector<std::pair<std::string, std::string>> cells;
    flatten("", to_json(), cells);
    std::ostringstream hdr, row;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            hdr << ",";
            row << ",";
        }
        hdr << csv_escape(cells[i].first);
        row << csv_escape(cells[i].second);
    }
    hdr << "\r\n" << row.str() << "\r\n";
    return hdr.str();
}

} // namespace monoct
