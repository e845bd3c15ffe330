#include "intime/common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace intime {

std::string format_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", x);
    return buf;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    auto parse_one = [](const std::string& tok) {
        std::size_t used = 0;
        double value = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw Error("domain", "bad number '" + tok + "'");
        return value;
    };
    if (text.find(':') != std::string::npos) {
        // start:stop:count
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (true) {
            auto next = text.find(':', pos);
            parts.push_back(text.substr(pos, next - pos));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (parts.size() != 3) throw Error("domain", "range must be start:stop:count");
        double lo = parse_one(parts[0]);
        double hi = parse_one(parts[1]);
        long count = std::lround(parse_one(parts[2]));
        if (count < 1) throw Error("domain", "range count must be >= 1");
        for (long i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1));
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find(',', pos);
        std::string tok = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!tok.empty()) out.push_back(parse_one(tok));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

} // namespace intime
