#pragma once

#include <iomanip>
#include <iostream>

#include "ctps/ctps.hpp"
#include "ctps/normality.hpp"

namespace ctps {

/// One residual line of a run report.
struct ResidualLine {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;

    bool pass() const { return value < threshold; }
};

struct RunReport {
    std::string command;
    std::vector<ResidualLine> residuals;
    std::vector<std::pair<std::string, std::string>> facts;  // ordered key/value notes
    std::optional<Eigen::MatrixXi> Z;
    std::optional<Eigen::MatrixXi> ZC;
    std::vector<std::string> row_labels, col_labels;

    bool pass() const {
        for (const auto& r : residuals)
            if (!r.pass()) return false;
        return true;
    }

    void add(std::string name, double value, double threshold) {
        residuals.push_back({std::move(name), value, threshold});
    }
    void note(std::string key, std::string value) {
        facts.push_back({std::move(key), std::move(value)});
    }
};

inline Json report_to_json(const RunReport& rep) {
    Json j;
    j["command"] = rep.command;
    j["pass"] = rep.pass();
    Json rs = Json::array();
    for (const auto& r : rep.residuals)
        rs.push_back(Json{{"name", r.name},
                          {"residual", r.value},
                          {"threshold", r.threshold},
                          {"pass", r.pass()}});
    j["residuals"] = rs;
    for (const auto& [k, v] : rep.facts) j[k] = v;
    if (rep.Z) {
        Json rows = Json::array();
        for (int a = 0; a < rep.Z->rows(); ++a) {
            Json row = Json::array();
            for (int b = 0; b < rep.Z->cols(); ++b) row.push_back((*rep.Z)(a, b));
            rows.push_back(row);
        }
        j["Z"] = rows;
    }
    if (rep.ZC) {
        Json rows = Json::array();
        for (int a = 0; a < rep.ZC->rows(); ++a) {
            Json row = Json::array();
            for (int b = 0; b < rep.ZC->cols(); ++b) row.push_back((*rep.ZC)(a, b));
            rows.push_back(row);
        }
        j["ZC"] = rows;
    }
    if (!rep.row_labels.empty()) j["row_labels"] = rep.row_labels;
    if (!rep.col_labels.empty()) j["col_labels"] = rep.col_labels;
    return j;
}

inline void print_matrix_with_labels(std::ostream& os, const Eigen::MatrixXi& z,
                                     const std::vector<std::string>& rows,
                                     const std::vector<std::string>& cols) {
    size_t w = 3;
    for (const auto& s : cols) w = std::max(w, s.size() + 1);
    for (const auto& s : rows) w = std::max(w, s.size() + 1);
    os << std::setw(static_cast<int>(w)) << "";
    for (int b = 0; b < z.cols(); ++b)
        os << std::setw(static_cast<int>(w)) << (b < static_cast<int>(cols.size()) ? cols[b] : "");
    os << "\n";
    for (int a = 0; a < z.rows(); ++a) {
        os << std::setw(static_cast<int>(w)) << (a < static_cast<int>(rows.size()) ? rows[a] : "");
        for (int b = 0; b < z.cols(); ++b) os << std::setw(static_cast<int>(w)) << z(a, b);
        os << "\n";
    }
}

inline void print_human(std::ostream& os, const RunReport& rep) {
    os << "== " << rep.command << " ==\n";
    for (const auto& [k, v] : rep.facts) os << k << ": " << v << "\n";
    if (rep.Z) {
        os << "coupling matrix Z:\n";
        print_matrix_with_labels(os, *rep.Z, rep.row_labels, rep.col_labels);
    }
    if (rep.ZC) {
        os << "ZC:\n";
        print_matrix_with_labels(os, *rep.ZC, rep.row_labels, rep.col_labels);
    }
    if (!rep.residuals.empty()) {
        os << std::left << std::setw(34) << "check" << std::setw(14) << "residual" << std::setw(14)
           << "threshold" << "verdict\n";
        for (const auto& r : rep.residuals)
            os << std::left << std::setw(34) << r.name << std::setw(14)
               << (std::ostringstream{} << std::scientific << std::setprecision(3) << r.value).str()
               << std::setw(14)
               << (std::ostringstream{} << std::scientific << std::setprecision(1) << r.threshold)
                      .str()
               << (r.pass() ? "pass" : "FAIL") << "\n";
    }
    os << (rep.pass() ? "PASS" : "FAIL") << "\n";
}

}  // namespace ctps
