#pragma once

#include <cstdint>
#include <string>

namespace devneg {

// Prices are integer minor units (cents). Keeping money integral makes every
// settlement rule exact and every transcript reproducible.
using Money = int64_t;

inline std::string format_money(Money cents) {
    bool neg = cents < 0;
    uint64_t a = neg ? uint64_t(-cents) : uint64_t(cents);
    std::string s = std::to_string(a / 100);
    uint64_t frac = a % 100;
    s += '.';
    s += char('0' + frac / 10);
    s += char('0' + frac % 10);
    return neg ? "-" + s : s;
}

}  // namespace devneg
