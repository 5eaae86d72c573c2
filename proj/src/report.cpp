#include "geoweb/report.hpp"

#include <cstdio>

namespace geoweb {

std::string format_real(double v)
{
    char buf[40];
    if (v == 0.0) v = 0.0; // no "-0" in reports
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string geodesic_label(Verdict v)
{
    switch (v) {
    case Verdict::positive: return "geodesic";
    case Verdict::negative: return "not geodesic";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string linearizable_label(Verdict v)
{
    switch (v) {
    case Verdict::positive: return "linearizable";
    case Verdict::negative: return "not linearizable";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

int verdict_exit_code(Verdict v)
{
    switch (v) {
    case Verdict::positive: return 0;
    case Verdict::negative: return 2;
    case Verdict::inconclusive: return 3;
    }
    return 3;
}

} // namespace geoweb
