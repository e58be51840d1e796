#pragma once

#include <charconv>
#include <compare>
#include <functional>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace autocop {

enum class Errc {
    DuplicateBinding,
    UnknownContext,
    DoubleActivation,
    ActivationOrder,
    InvalidAdaptation,
    InvalidReward,
    NoActions,
    SequenceError,
    WrongContext,
    ConfigError,
    IoError,
    ParseError,
};

inline const char* to_string(Errc code) {
    switch (code) {
        case Errc::DuplicateBinding: return "DuplicateBinding";
        case Errc::UnknownContext: return "UnknownContext";
        case Errc::DoubleActivation: return "DoubleActivation";
        case Errc::ActivationOrder: return "ActivationOrder";
        case Errc::InvalidAdaptation: return "InvalidAdaptation";
        case Errc::InvalidReward: return "InvalidReward";
        case Errc::NoActions: return "NoActions";
        case Errc::SequenceError: return "SequenceError";
        case Errc::WrongContext: return "WrongContext";
        case Errc::ConfigError: return "ConfigError";
        case Errc::IoError: return "IoError";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

using ActionId = std::string;
using ActionSequence = std::vector<ActionId>;

/// Canonical, environment-independent key for a discrete state.
///
/// The canonical text is the comma-joined list of state components
/// (`60,0,1`, `2,3,false`). The COP context name drops the separators and
/// prefixes `Context` (`Context6001`, `Context23false`).
class StateKey {
public:
    StateKey() = default;
    explicit StateKey(std::string canonical) : canonical_(std::move(canonical)) {}

    template <class... Parts>
    static StateKey of(const Parts&... parts) {
        std::string out;
        (append_part(out, parts), ...);
        return StateKey(std::move(out));
    }

    const std::string& canonical() const noexcept { return canonical_; }
    bool empty() const noexcept { return canonical_.empty(); }

    std::string context_name() const {
        std::string name = "Context";
        for (char c : canonical_)
            if (c != ',') name.push_back(c);
        return name;
    }

    std::vector<std::string> components() const {
        std::vector<std::string> out;
        std::string_view rest = canonical_;
        while (true) {
            auto comma = rest.find(',');
            out.emplace_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }

    auto operator<=>(const StateKey&) const = default;

private:
    static void append_part(std::string& out, bool value) {
        if (!out.empty()) out.push_back(',');
        out += value ? "true" : "false";
    }
    template <class T>
    static void append_part(std::string& out, const T& value) {
        if (!out.empty()) out.push_back(',');
        if constexpr (std::is_convertible_v<T, std::string_view>)
            out += std::string_view(value);
        else
            out += std::to_string(value);
    }

    std::string canonical_;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const noexcept {
        return std::hash<std::string>{}(k.canonical());
    }
};

/// Shortest round-trip decimal text for a double.
inline std::string format_real(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Six significant digits, for human-readable reports.
inline std::string format_short(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view text) {
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw Error(Errc::ParseError, "not a real number: '" + std::string(text) + "'");
    return value;
}

template <class Int>
Int parse_int(std::string_view text) {
    Int value{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw Error(Errc::ParseError, "not an integer: '" + std::string(text) + "'");
    return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = text.find(sep);
        out.push_back(text.substr(0, pos));
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
    return out;
}

inline std::string join(const ActionSequence& actions, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i) out += sep;
        out += actions[i];
    }
    return out;
}

}  // namespace autocop
