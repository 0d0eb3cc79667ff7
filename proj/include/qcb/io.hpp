#pragma once

#include "qcb/parser.hpp"
#include "qcb/shift_ops.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace qcb {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline IntVec json_int_vec(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + " must be an array of integers");
    IntVec v;
    for (auto& x : j) {
        if (!x.is_number_integer()) throw InputError(what + " must contain integers");
        v.push_back(x.get<long long>());
    }
    return v;
}

inline std::vector<IntVec> json_int_matrix(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InputError(what + " must be an array of arrays");
    std::vector<IntVec> m;
    for (auto& row : j) m.push_back(json_int_vec(row, what));
    return m;
}

/// {"rank": r, "matter": [[ints]...], "flavour": {"rank": f, "charges": [[ints]...]}}
inline GaugeTheory theory_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rank") || !j.contains("matter"))
        throw InputError("gauge theory: need \"rank\" and \"matter\"");
    int rank = j.at("rank").get<int>();
    auto matter = json_int_matrix(j.at("matter"), "matter");
    int f = 0;
    std::vector<IntVec> charges;
    if (j.contains("flavour")) {
        const Json& fl = j.at("flavour");
        if (!fl.is_object() || !fl.contains("rank") || !fl.contains("charges"))
            throw InputError("flavour: need \"rank\" and \"charges\"");
        f = fl.at("rank").get<int>();
        charges = json_int_matrix(fl.at("charges"), "flavour charges");
    }
    return GaugeTheory(rank, std::move(matter), f, std::move(charges));
}

inline Json theory_to_json(const GaugeTheory& T) {
    Json j;
    j["rank"] = T.rank;
    j["matter"] = T.matter;
    if (T.flavour_rank > 0)
        j["flavour"] = Json{{"rank", T.flavour_rank}, {"charges", T.flavour_charges}};
    return j;
}

/// {"rank": r, "simple_roots": [[..]], "simple_coroots": [[..]]}
inline RootDatum root_datum_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rank") || !j.contains("simple_roots") ||
        !j.contains("simple_coroots"))
        throw InputError("root datum: need \"rank\", \"simple_roots\", \"simple_coroots\"");
    return RootDatum(j.at("rank").get<int>(),
                     json_int_matrix(j.at("simple_roots"), "simple_roots"),
                     json_int_matrix(j.at("simple_coroots"), "simple_coroots"));
}

inline IntVec parse_int_list(const std::string& text) {
    // Accepts "[1,-2]" or "1,-2" or "1 -2".
    IntVec v;
    std::string cur;
    for (char c : text) {
        if (c == '[' || c == ']' || c == ' ' || c == ',') {
            if (!cur.empty()) {
                v.push_back(std::stoll(cur));
                cur.clear();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            cur += c;
        } else {
            throw InputError("bad integer list: " + text);
        }
    }
    if (!cur.empty()) v.push_back(std::stoll(cur));
    return v;
}

/// {"points": n, "tangent_weights": [[[ints]...]...], "curve_rank": m,
///  "sections": {"[1,0]": [[ints per point]], ...},
///  "divisors": {"x": {"values": [exprs], "pairing": [ints]}},
///  "basis": [{"name": "1", "values": [exprs]}]}
inline FixedPointModel model_from_json(const Json& j) {
    FixedPointModel m;
    if (!j.is_object() || !j.contains("points") || !j.contains("tangent_weights") ||
        !j.contains("curve_rank"))
        throw InputError("model: need \"points\", \"tangent_weights\", \"curve_rank\"");
    m.points = j.at("points").get<int>();
    m.curve_rank = j.at("curve_rank").get<std::size_t>();
    for (auto& per_point : j.at("tangent_weights"))
        m.tangent_weights.push_back(json_int_matrix(per_point, "tangent_weights"));
    if (m.tangent_weights.empty() || m.tangent_weights[0].empty())
        throw InputError("model: tangent weights must be nonempty");
    m.rank = j.contains("rank") ? j.at("rank").get<int>()
                                : static_cast<int>(m.tangent_weights[0][0].size());
    m.space = make_space(m.rank, 0);

    if (!j.contains("sections")) throw InputError("model: need \"sections\"");
    std::map<Coweight, std::vector<NExp>> sections;
    for (auto& [key, val] : j.at("sections").items()) {
        Coweight lam = parse_int_list(key);
        if (static_cast<int>(lam.size()) != m.rank)
            throw InputError("section key arity mismatch: " + key);
        std::vector<NExp> per_point;
        for (auto& e : val) {
            NExp x;
            for (auto& n : e) x.push_back(n.get<long long>());
            if (x.size() != m.curve_rank) throw InputError("section class arity mismatch");
            per_point.push_back(std::move(x));
        }
        if (static_cast<int>(per_point.size()) != m.points)
            throw InputError("sections must cover every point");
        sections.emplace(std::move(lam), std::move(per_point));
    }
    // Pull out the standard basis, then verify every provided entry is
    // additively consistent (the cocycle rule).
    m.basis_sections.resize(m.rank);
    for (int i = 0; i < m.rank; ++i) {
        Coweight e(m.rank, 0);
        e[i] = 1;
        auto it = sections.find(e);
        if (it == sections.end())
            throw InputError("sections must include every standard basis cocharacter");
        m.basis_sections[i] = it->second;
    }
    m.validate();
    for (auto& [lam, per_point] : sections)
        for (int k = 0; k < m.points; ++k)
            if (m.section(lam, k) != per_point[k])
                throw InputError("sections violate the additivity (cocycle) rule");

    if (j.contains("divisors")) {
        for (auto& [name, val] : j.at("divisors").items()) {
            FixedPointModel::Divisor d;
            d.name = name;
            if (!val.contains("values") || !val.contains("pairing"))
                throw InputError("divisor: need \"values\" and \"pairing\"");
            for (auto& expr : val.at("values"))
                d.values.push_back(parse_rational(expr.get<std::string>(), m.space));
            d.pairing = json_int_vec(val.at("pairing"), "divisor pairing");
            m.divisors.push_back(std::move(d));
        }
    }
    if (j.contains("basis")) {
        for (auto& b : j.at("basis")) {
            std::vector<RationalFunction> vals;
            for (auto& expr : b.at("values"))
                vals.push_back(parse_rational(expr.get<std::string>(), m.space));
            if (static_cast<int>(vals.size()) != m.points)
                throw InputError("basis restrictions must cover every point");
            m.basis.emplace_back(b.at("name").get<std::string>(), std::move(vals));
        }
    }
    m.validate();
    return m;
}

/// {"points": n, "rank": r, "curve_rank": m,
///  "entries": {"[1,0]": ["expr per point", ...], ...},
///  "novikov_map": {"out_rank": g, "matrix": [[...g rows...]]}}
inline OperatorTable table_from_json(const Json& j) {
    OperatorTable t;
    if (!j.is_object() || !j.contains("points") || !j.contains("rank") ||
        !j.contains("curve_rank") || !j.contains("entries"))
        throw InputError("table: need \"points\", \"rank\", \"curve_rank\", \"entries\"");
    t.points = j.at("points").get<int>();
    t.rank = j.at("rank").get<int>();
    t.curve_rank = j.at("curve_rank").get<std::size_t>();
    t.space = make_space(t.rank, 0);
    for (auto& [key, val] : j.at("entries").items()) {
        Coweight lam = parse_int_list(key);
        if (static_cast<int>(lam.size()) != t.rank)
            throw InputError("table key arity mismatch: " + key);
        LocalizedClass cls;
        for (auto& expr : val)
            cls.values.push_back(parse_novikov(expr.get<std::string>(), t.space, t.curve_rank));
        if (static_cast<int>(cls.values.size()) != t.points)
            throw InputError("table entry must give one expression per point");
        t.entries.emplace(std::move(lam), std::move(cls));
    }
    if (j.contains("novikov_map")) {
        NovikovMap nm;
        nm.in_rank = t.curve_rank;
        nm.out_rank = j.at("novikov_map").at("out_rank").get<std::size_t>();
        for (auto& row : j.at("novikov_map").at("matrix")) {
            NExp r;
            for (auto& x : row) r.push_back(x.get<long long>());
            if (r.size() != nm.in_rank) throw InputError("novikov map row arity mismatch");
            nm.matrix.push_back(std::move(r));
        }
        if (nm.matrix.size() != nm.out_rank) throw InputError("novikov map needs out_rank rows");
        t.novikov_map = std::move(nm);
    }
    return t;
}

/// {"points": n, "rank": r, "curve_rank": m, "values": ["expr", ...]}
inline LocalizedClass class_from_json(const Json& j, Space& space_out,
                                      std::size_t& curve_rank_out) {
    if (!j.is_object() || !j.contains("points") || !j.contains("rank") ||
        !j.contains("curve_rank") || !j.contains("values"))
        throw InputError("class: need \"points\", \"rank\", \"curve_rank\", \"values\"");
    int rank = j.at("rank").get<int>();
    curve_rank_out = j.at("curve_rank").get<std::size_t>();
    space_out = make_space(rank, 0);
    LocalizedClass cls;
    for (auto& expr : j.at("values"))
        cls.values.push_back(parse_novikov(expr.get<std::string>(), space_out, curve_rank_out));
    if (cls.values.size() != j.at("points").get<std::size_t>())
        throw InputError("class must give one value per point");
    return cls;
}

inline Json class_to_json(const LocalizedClass& cls, int rank, std::size_t curve_rank) {
    Json j;
    j["points"] = cls.values.size();
    j["rank"] = rank;
    j["curve_rank"] = curve_rank;
    std::vector<std::string> vals;
    for (auto& v : cls.values) vals.push_back(v.str());
    j["values"] = vals;
    return j;
}

} // namespace qcb
