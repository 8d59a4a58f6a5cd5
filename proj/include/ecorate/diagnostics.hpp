#pragma once

#include <string>
#include <vector>

namespace ecorate {

/// Non-fatal condition worth surfacing to the caller (degenerate spread,
/// missing trade-off pairs, zero score range, ...).
struct Diagnostic {
    std::string code;    // stable machine-readable identifier
    std::string message; // human-readable detail
};

using Diagnostics = std::vector<Diagnostic>;

inline void emit(Diagnostics* sink, std::string code, std::string message) {
    if (sink != nullptr) {
        sink->push_back(Diagnostic{std::move(code), std::move(message)});
    }
}

namespace diag {
inline constexpr const char* degenerate_spread = "degenerate-spread";
inline constexpr const char* degenerate_geometry = "degenerate-geometry";
inline constexpr const char* no_trade_off = "no-trade-off";
inline constexpr const char* no_spread = "no-spread";
inline constexpr const char* all_tied = "all-tied";
} // namespace diag

} // namespace ecorate
