#include "winding/report.hpp"

#include <cmath>
#include <cstdio>

namespace winding {
namespace {

void write(std::string& out, const nlohmann::json& j, int indent, int depth) {
    const auto newline = [&](int level) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * level), ' ');
    };
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += nlohmann::json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            write(out, it.value(), indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            write(out, v, indent, depth + 1);
        }
        newline(depth);
        out += ']';
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double v = j.get<double>();
        // JSON has no NaN or infinity.
        out += std::isfinite(v) ? format_double(v) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_json(const nlohmann::json& j, int indent) {
    std::string out;
    write(out, j, indent, 0);
    return out;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

} // namespace winding
