#include "rhsim/timing.hpp"

#include <cctype>
#include <cstdlib>

namespace rhsim {

Mr4Multiplier Mr4Multiplier::from_double(double v) {
    if (v == 0.5) return {1, 2};
    if (v == 1.0) return {1, 1};
    if (v == 2.0) return {2, 1};
    if (v == 4.0) return {4, 1};
    throw config_error("mr4_multiplier must be one of 0.5, 1, 2, 4 (got " +
                       std::to_string(v) + ")");
}

void TimingConfig::validate() const {
    if (mr4.den != 1 && mr4.den != 2)
        throw config_error("invalid mr4_multiplier");
    if (mr4.den == 2 && mr4.num != 1)
        throw config_error("invalid mr4_multiplier");
    if (mr4.den == 1 && mr4.num != 1 && mr4.num != 2 && mr4.num != 4)
        throw config_error("invalid mr4_multiplier");
    if (trefi <= 0 || trfc <= 0 || trc_min <= 0 || tras_min <= 0)
        throw config_error("timing values must be positive");
    if (trefi * mr4.num % mr4.den != 0)
        throw config_error("tREFI is not exactly divisible by the MR4 multiplier");
    if (trefi_effective() <= trfc)
        throw config_error("tREFIe must exceed tRFC");
    if (refresh_cmds_per_window < 1)
        throw config_error("refresh_cmds_per_window must be >= 1");
    if (rh_threshold < 2)
        throw config_error("rh_threshold must be >= 2");
    if (rows_per_bank < 2)
        throw config_error("rows_per_bank must be >= 2");
}

picos_t TimingConfig::trefi_effective() const {
    return trefi * mr4.num / mr4.den;
}

picos_t TimingConfig::trefw_effective() const {
    return trefi_effective() * refresh_cmds_per_window;
}

std::int64_t TimingConfig::mpa_per_refi() const {
    const picos_t open = trefi_effective() - trfc;
    if (open <= 0) throw config_error("tREFIe must exceed tRFC");
    return open / trc_min;
}

std::int64_t TimingConfig::mpa_per_refw() const {
    const picos_t open = trefi_effective() - trfc;
    if (open <= 0) throw config_error("tREFIe must exceed tRFC");
    return open * refresh_cmds_per_window / trc_min;
}

picos_t parse_ns(const std::string& text) {
    const char* p = text.c_str();
    bool neg = false;
    if (*p == '-') { neg = true; ++p; }
    if (!std::isdigit(static_cast<unsigned char>(*p)))
        throw input_error("bad duration literal: '" + text + "'");
    picos_t whole = 0;
    while (std::isdigit(static_cast<unsigned char>(*p)))
        whole = whole * 10 + (*p++ - '0');
    picos_t frac = 0;
    if (*p == '.') {
        ++p;
        int digits = 0;
        while (std::isdigit(static_cast<unsigned char>(*p))) {
            if (++digits > 3)
                throw input_error("sub-picosecond precision in '" + text + "'");
            frac = frac * 10 + (*p++ - '0');
        }
        for (; digits < 3; ++digits) frac *= 10;
    }
    if (*p != '\0')
        throw input_error("bad duration literal: '" + text + "'");
    const picos_t v = whole * kPicosPerNs + frac;
    return neg ? -v : v;
}

std::string format_ns(picos_t t) {
    const bool neg = t < 0;
    if (neg) t = -t;
    picos_t whole = t / kPicosPerNs;
    picos_t frac = t % kPicosPerNs;
    std::string s = (neg ? "-" : "") + std::to_string(whole);
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac));
        std::string f(buf);
        while (f.back() == '0') f.pop_back();
        s += f;
    }
    return s;
}

}  // namespace rhsim
