#include "ftdecay/bodyspec.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace ftdecay::bodyspec {

namespace {

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("body spec: '" + s + "' is not a number (" + what + ")");
    }
}

int to_int(const std::string& s, const std::string& what) {
    double v = to_double(s, what);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw Error("body spec: '" + s + "' is not an integer (" + what + ")");
    return i;
}

geometry::BodyPtr parse_poly_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("body spec: cannot open polytope file '" + path + "'");
    std::vector<Vec> normals;
    std::vector<double> offsets;
    std::string line;
    size_t width = 0;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::vector<double> vals;
        double v;
        while (row >> v) vals.push_back(v);
        if (vals.empty()) continue;
        if (width == 0) width = vals.size();
        if (vals.size() != width || width < 3)
            throw Error("body spec: polytope rows must all hold d normal components plus an offset");
        offsets.push_back(vals.back());
        vals.pop_back();
        normals.emplace_back(vals.begin(), vals.end());
    }
    if (normals.empty()) throw Error("body spec: polytope file '" + path + "' has no facets");
    return geometry::make_polytope_h(normals, offsets);
}

}  // namespace

geometry::BodyPtr parse_body(const std::string& spec) {
    size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error("body spec: expected '<kind>:<params>', got '" + spec + "'");
    std::string kind = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);

    // Comma-separated tokens; tokens without '=' extend the previous key's
    // value list (so h=0.5,0.5,0.5 parses as one vector-valued key).
    std::map<std::string, std::vector<std::string>> kv;
    std::string current;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t eq = tok.find('=');
        if (eq != std::string::npos) {
            current = tok.substr(0, eq);
            kv[current].push_back(tok.substr(eq + 1));
        } else {
            if (current.empty() || tok.empty())
                throw Error("body spec: stray token '" + tok + "' in '" + spec + "'");
            kv[current].push_back(tok);
        }
    }
    auto need = [&](const std::string& key) -> const std::vector<std::string>& {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error("body spec: missing '" + key + "=' in '" + spec + "'");
        return it->second;
    };
    auto need_scalar = [&](const std::string& key) -> const std::string& {
        const auto& v = need(key);
        if (v.size() != 1) throw Error("body spec: '" + key + "' takes a single value");
        return v[0];
    };
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : kv) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw Error("body spec: unknown key '" + k + "' for '" + kind + "'");
        }
    };

    if (kind == "ball") {
        check_keys({"d", "r"});
        return geometry::make_ball(to_int(need_scalar("d"), "d"), to_double(need_scalar("r"), "r"));
    }
    if (kind == "box") {
        check_keys({"d", "h"});
        int d = to_int(need_scalar("d"), "d");
        const auto& hs = need("h");
        if (static_cast<int>(hs.size()) != d)
            throw Error("body spec: box needs exactly d half-widths");
        Vec h;
        for (const auto& s : hs) h.push_back(to_double(s, "h"));
        return geometry::make_axis_box(h);
    }
    if (kind == "pball") {
        check_keys({"d", "p", "r"});
        return geometry::make_pball(to_int(need_scalar("d"), "d"), to_double(need_scalar("p"), "p"),
                                    to_double(need_scalar("r"), "r"));
    }
    if (kind == "poly") {
        check_keys({"file"});
        return parse_poly_file(need_scalar("file"));
    }
    throw Error("body spec: unknown body kind '" + kind + "'");
}

}  // namespace ftdecay::bodyspec
