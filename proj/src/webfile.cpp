#include "geoweb/webfile.hpp"

#include "geoweb/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace geoweb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw SchemaError(path + ": " + what); }

const json& require(const json& obj, const char* key, const std::string& path)
{
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

} // namespace

WebChart parse_webfile(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("$", "expected an object");

    static const char* known[] = {"dimension", "functions", "pointed", "domain", "labels"};
    for (const auto& [key, value] : doc.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) fail(key, "unknown field");
    }

    const int n = integer(require(doc, "dimension", ""), "dimension");
    if (n < 2) fail("dimension", "must be at least 2");

    const json& fns = require(doc, "functions", "");
    if (!fns.is_array()) fail("functions", "expected an array of strings");
    if (static_cast<int>(fns.size()) < n + 2)
        fail("functions", "a web needs d >= n+2 functions, got d = " + std::to_string(fns.size()) + " for n = " +
                              std::to_string(n));
    std::vector<Expression> functions;
    for (std::size_t i = 0; i < fns.size(); ++i) {
        const std::string path = "functions[" + std::to_string(i) + "]";
        if (!fns[i].is_string()) fail(path, "expected a string");
        try {
            functions.push_back(parse_expression(fns[i].get<std::string>(), n));
        } catch (const ParseError& e) {
            fail(path, e.what());
        }
    }
    const int d = static_cast<int>(functions.size());

    std::optional<int> pointed;
    if (const auto it = doc.find("pointed"); it != doc.end() && !it->is_null()) {
        pointed = integer(*it, "pointed");
        if (*pointed < 1 || *pointed > d)
            fail("pointed", "index " + std::to_string(*pointed) + " out of range 1.." + std::to_string(d));
    }

    Domain domain;
    domain.center.assign(static_cast<std::size_t>(n), 0.0);
    if (const auto it = doc.find("domain"); it != doc.end()) {
        if (!it->is_object()) fail("domain", "expected an object");
        if (const auto c = it->find("center"); c != it->end()) {
            if (!c->is_array() || static_cast<int>(c->size()) != n)
                fail("domain.center", "expected " + std::to_string(n) + " numbers");
            for (std::size_t i = 0; i < c->size(); ++i)
                domain.center[i] = number((*c)[i], "domain.center[" + std::to_string(i) + "]");
        }
        if (const auto r = it->find("radius"); r != it->end()) domain.radius = number(*r, "domain.radius");
        if (!(domain.radius > 0.0)) fail("domain.radius", "must be positive");
    }

    std::vector<std::string> labels;
    if (const auto it = doc.find("labels"); it != doc.end()) {
        if (!it->is_array() || static_cast<int>(it->size()) != d) fail("labels", "expected one string per function");
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_string()) fail("labels[" + std::to_string(i) + "]", "expected a string");
            labels.push_back((*it)[i].get<std::string>());
        }
    }

    return WebChart(n, std::move(functions), pointed, std::move(domain), std::move(labels));
}

WebChart load_webfile(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path.string() + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_webfile(buf.str());
}

} // namespace geoweb
