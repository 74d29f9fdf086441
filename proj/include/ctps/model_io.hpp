#pragma once

#include <fstream>
#include <optional>

#include <json.hpp>

#include "ctps/skeletal.hpp"

namespace ctps {

using Json = nlohmann::ordered_json;

/// A loaded model file: always a ring, optionally skeletal data when the
/// file carries F (and R) sections.
struct Model {
    FusionRing ring;
    std::optional<SkeletalData> skel;

    const SkeletalData& skeletal() const {
        if (!skel) throw StructuralError("model carries no F/R data");
        return *skel;
    }
};

namespace io_detail {

inline Complex parse_complex(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("expected [re, im] pair at " + where);
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json dump_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

inline void reject_unknown(const Json& j, std::initializer_list<const char*> allowed,
                           const std::string& what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ParseError("unknown field '" + it.key() + "' in " + what);
    }
}

}  // namespace io_detail

/// Parses the documented model schema. Rejects unknown fields and files in
/// which label 0 is not the unit.
inline Model parse_model(const Json& j) {
    using namespace io_detail;
    if (!j.is_object()) throw ParseError("model file must be a JSON object");
    reject_unknown(j, {"labels", "fusion", "dual", "S", "T", "F", "R"}, "model");
    if (!j.contains("labels") || !j.contains("fusion") || !j.contains("dual"))
        throw ParseError("model requires 'labels', 'fusion' and 'dual'");

    std::vector<std::string> names = j["labels"].get<std::vector<std::string>>();
    const int n = static_cast<int>(names.size());
    if (n == 0) throw ParseError("empty label list");

    std::vector<int> fusion(static_cast<size_t>(n) * n * n, 0);
    for (const auto& row : j["fusion"]) {
        if (!row.is_array() || row.size() != 3) throw ParseError("fusion rows are [l, m, channels]");
        int a = row[0].get<int>(), b = row[1].get<int>();
        if (a < 0 || a >= n || b < 0 || b >= n) throw ParseError("fusion row label out of range");
        for (const auto& ch : row[2]) {
            if (!ch.is_array() || ch.size() != 2) throw ParseError("fusion channels are [nu, mult]");
            int c = ch[0].get<int>(), m = ch[1].get<int>();
            if (c < 0 || c >= n) throw ParseError("fusion channel label out of range");
            if (m < 0) throw ParseError("fusion multiplicity must be nonnegative");
            fusion[(static_cast<size_t>(a) * n + b) * n + c] = m;
        }
    }
    std::vector<LabelId> dual = j["dual"].get<std::vector<LabelId>>();
    if (static_cast<int>(dual.size()) != n) throw ParseError("dual list length mismatch");

    for (LabelId a = 0; a < n; ++a)
        for (LabelId b = 0; b < n; ++b) {
            int want = a == b ? 1 : 0;
            if (fusion[(static_cast<size_t>(0) * n + a) * n + b] != want ||
                fusion[(static_cast<size_t>(a) * n + 0) * n + b] != want)
                throw ParseError("label 0 must be the unit sector");
        }

    std::optional<ModularData> md;
    if (j.contains("S") != j.contains("T")) throw ParseError("S and T must come together");
    if (j.contains("S")) {
        ModularData m;
        m.S.resize(n, n);
        const auto& sj = j["S"];
        if (!sj.is_array() || static_cast<int>(sj.size()) != n) throw ParseError("S shape mismatch");
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(sj[r].size()) != n) throw ParseError("S shape mismatch");
            for (int c = 0; c < n; ++c) m.S(r, c) = parse_complex(sj[r][c], "S");
        }
        const auto& tj = j["T"];
        if (!tj.is_array() || static_cast<int>(tj.size()) != n) throw ParseError("T shape mismatch");
        m.T.resize(n);
        for (int r = 0; r < n; ++r) m.T[r] = parse_complex(tj[r], "T");
        md = std::move(m);
    }

    FusionRing ring(names, fusion, dual, md);

    if (j.contains("R") && !j.contains("F")) throw ParseError("R data requires F data");
    if (!j.contains("F")) return Model{std::move(ring), std::nullopt};

    std::map<uint64_t, Complex> fmap, rmap;
    for (const auto& e : j["F"]) {
        reject_unknown(e, {"labels", "value"}, "F entry");
        auto ls = e["labels"].get<std::vector<int>>();
        if (ls.size() != 6) throw ParseError("F entries are keyed by six labels");
        for (int l : ls)
            if (l < 0 || l >= n) throw ParseError("F entry label out of range");
        Complex v = parse_complex(e["value"], "F");
        if ((ls[0] == 0 || ls[1] == 0 || ls[2] == 0) && std::abs(v - Complex(1, 0)) > 1e-12)
            throw ParseError("unit-label F entries must be 1 in the fixed gauge");
        fmap[f_key(ls[0], ls[1], ls[2], ls[3], ls[4], ls[5])] = v;
    }
    bool has_r = j.contains("R");
    if (has_r)
        for (const auto& e : j["R"]) {
            reject_unknown(e, {"labels", "value"}, "R entry");
            auto ls = e["labels"].get<std::vector<int>>();
            if (ls.size() != 3) throw ParseError("R entries are keyed by three labels");
            for (int l : ls)
                if (l < 0 || l >= n) throw ParseError("R entry label out of range");
            Complex v = parse_complex(e["value"], "R");
            if ((ls[0] == 0 || ls[1] == 0) && std::abs(v - Complex(1, 0)) > 1e-12)
                throw ParseError("unit-label R entries must be 1 in the fixed gauge");
            rmap[r_key(ls[0], ls[1], ls[2])] = v;
        }
    SkeletalData skel(ring, std::move(fmap), std::move(rmap), has_r);
    return Model{std::move(ring), std::move(skel)};
}

inline Json model_to_json(const FusionRing& ring, const SkeletalData* skel) {
    using namespace io_detail;
    Json j;
    j["labels"] = ring.names();
    Json fus = Json::array();
    for (LabelId a = 0; a < ring.size(); ++a)
        for (LabelId b = 0; b < ring.size(); ++b) {
            Json chans = Json::array();
            for (LabelId c = 0; c < ring.size(); ++c)
                if (ring.N(a, b, c) > 0) chans.push_back(Json::array({c, ring.N(a, b, c)}));
            if (!chans.empty()) fus.push_back(Json::array({a, b, chans}));
        }
    j["fusion"] = fus;
    j["dual"] = ring.duals();
    if (ring.has_modular()) {
        const auto& md = ring.modular();
        Json s = Json::array();
        for (int r = 0; r < ring.size(); ++r) {
            Json row = Json::array();
            for (int c = 0; c < ring.size(); ++c) row.push_back(dump_complex(md.S(r, c)));
            s.push_back(row);
        }
        j["S"] = s;
        Json t = Json::array();
        for (int r = 0; r < ring.size(); ++r) t.push_back(dump_complex(md.T[r]));
        j["T"] = t;
    }
    if (skel) {
        Json fs = Json::array();
        for (const auto& [key, val] : skel->f_entries()) {
            int ls[6];
            uint64_t k = key;
            for (int i = 5; i >= 0; --i) {
                ls[i] = static_cast<int>(k & 0x3ff) - 1;
                k >>= 10;
            }
            fs.push_back(Json{{"labels", Json::array({ls[0], ls[1], ls[2], ls[3], ls[4], ls[5]})},
                              {"value", dump_complex(val)}});
        }
        j["F"] = fs;
        if (skel->has_braiding()) {
            Json rs = Json::array();
            for (const auto& [key, val] : skel->r_entries()) {
                int ls[3];
                uint64_t k = key;
                for (int i = 2; i >= 0; --i) {
                    ls[i] = static_cast<int>(k & 0x3ff) - 1;
                    k >>= 10;
                }
                rs.push_back(Json{{"labels", Json::array({ls[0], ls[1], ls[2]})},
                                  {"value", dump_complex(val)}});
            }
            j["R"] = rs;
        }
    }
    return j;
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse error in ") + path + ": " + e.what());
    }
    return j;
}

inline Model load_model(const std::string& path) { return parse_model(load_json(path)); }

inline void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace ctps
