#include "hypfred/problem_file.hpp"
#include "hypfred/error.hpp"

#include <fstream>
#include <string>

namespace hypfred {
namespace {

using nlohmann::json;

expr::Expr read_expr(const json& v, const std::string& key) {
    if (v.is_number()) return expr::Expr::constant(v.get<double>());
    if (!v.is_string()) throw ValidationError(key + ": expected an expression string or a number");
    const std::string src = v.get<std::string>();
    try {
        return expr::parse(src);
    } catch (const ParseError& e) {
        throw ValidationError(key + ": " + e.what() + " in \"" + src + "\"");
    } catch (const LexError& e) {
        throw ValidationError(key + ": " + e.what() + " in \"" + src + "\"");
    }
}

int read_count(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ValidationError(std::string("missing key '") + key + "'");
    const json& v = doc.at(key);
    if (!v.is_number_integer()) throw ValidationError(std::string(key) + ": expected an integer");
    return v.get<int>();
}

void read_vector(const json& doc, const char* key, int n, std::vector<expr::Expr>& out) {
    if (!doc.contains(key)) return;
    const json& v = doc.at(key);
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
        throw ValidationError(std::string(key) + ": expected an array of " + std::to_string(n) + " entries");
    }
    for (int j = 0; j < n; ++j) out[j] = read_expr(v[j], std::string(key) + "[" + std::to_string(j + 1) + "]");
}

void read_matrix(const json& doc, const char* key, int n, ExprMatrix& out) {
    if (!doc.contains(key)) return;
    const json& v = doc.at(key);
    const std::string shape = std::string(key) + ": expected a " + std::to_string(n) + "x" + std::to_string(n) + " array";
    if (!v.is_array() || static_cast<int>(v.size()) != n) throw ValidationError(shape);
    for (int j = 0; j < n; ++j) {
        if (!v[j].is_array() || static_cast<int>(v[j].size()) != n) throw ValidationError(shape);
        for (int k = 0; k < n; ++k) {
            out[j][k] = read_expr(v[j][k], std::string(key) + "[" + std::to_string(j + 1) + "][" +
                                               std::to_string(k + 1) + "]");
        }
    }
}

} // namespace

ProblemData problem_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("problem document must be a JSON object");
    const int n = read_count(doc, "n");
    const int m = read_count(doc, "m");
    if (n < 1) throw ValidationError("n: must be at least 1");
    if (m < 0 || m > n) throw ValidationError("m: must lie in [0, n]");
    if (!doc.contains("a")) throw ValidationError("missing key 'a'");

    ProblemData d = ProblemData::zeros(n, m);
    read_vector(doc, "a", n, d.a);
    read_matrix(doc, "b", n, d.b);
    read_matrix(doc, "g", n, d.g);
    read_matrix(doc, "h", n, d.h);
    read_matrix(doc, "r", n, d.r);
    read_vector(doc, "f", n, d.f);
    if (doc.contains("volterra")) {
        if (!doc.at("volterra").is_boolean()) throw ValidationError("volterra: expected true or false");
        d.volterra = doc.at("volterra").get<bool>();
    }
    if (doc.contains("description")) {
        if (!doc.at("description").is_string()) throw ValidationError("description: expected a string");
        d.description = doc.at("description").get<std::string>();
    }
    return d;
}

ProblemData read_problem(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    return problem_from_json(doc);
}

ProblemData read_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open problem file " + path.string());
    return read_problem(in);
}

nlohmann::ordered_json problem_to_json(const ProblemData& d) {
    auto row = [](const std::vector<expr::Expr>& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& e : v) a.push_back(expr::print(e));
        return a;
    };
    auto matrix = [&](const ExprMatrix& m) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& r : m) a.push_back(row(r));
        return a;
    };
    nlohmann::ordered_json doc;
    doc["n"] = d.n;
    doc["m"] = d.m;
    doc["a"] = row(d.a);
    doc["b"] = matrix(d.b);
    doc["g"] = matrix(d.g);
    doc["h"] = matrix(d.h);
    doc["r"] = matrix(d.r);
    doc["f"] = row(d.f);
    doc["volterra"] = d.volterra;
    doc["description"] = d.description;
    return doc;
}

} // namespace hypfred
