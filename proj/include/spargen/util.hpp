#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace spargen {

// IO / schema failures. ParseError: the file is not in the expected format at
// all. ValidationError: well-formed but violates an invariant; the message
// names the offending entity.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class BehindCamera : public std::runtime_error {
public:
    explicit BehindCamera(const std::string& msg) : std::runtime_error(msg) {}
};

class MissingBinding : public std::runtime_error {
public:
    explicit MissingBinding(const std::string& placeholder)
        : std::runtime_error("unresolved placeholder [" + placeholder + "]"),
          placeholder_(placeholder) {}
    const std::string& placeholder() const { return placeholder_; }

private:
    std::string placeholder_;
};

/// Value-or-reason outcome for operations whose failure is an expected,
/// enumerable event (a skipped QA candidate, a rejected viewpoint) rather
/// than an error.
template <typename T, typename Reason>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Reason reason) : v_(reason) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const { return std::get<T>(v_); }
    T& value() { return std::get<T>(v_); }
    Reason reason() const { return std::get<Reason>(v_); }

private:
    std::variant<T, Reason> v_;
};

/// FNV-1a, used wherever a platform-stable hash is required (seeding,
/// config fingerprints). std::hash is not portable across libraries.
inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
    a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
    return a;
}

/// Fixed-point decimal formatting. All numbers that end up in QA text or
/// JSON answers go through here so output is byte-stable across platforms.
inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    // avoid the "-0.0" artifact
    std::string s(buf);
    bool all_zero = true;
    for (char c : s)
        if (c >= '1' && c <= '9') all_zero = false;
    if (all_zero && !s.empty() && s[0] == '-') s.erase(0, 1);
    return s;
}

inline int decimals_for_step(double step) {
    if (step >= 1.0) return 0;
    if (step >= 0.1) return 1;
    if (step >= 0.01) return 2;
    return 3;
}

/// Round to the nearest multiple of `step` and snap to the double that the
/// decimal rendering parses back to, so stored numeric ground truth always
/// equals the parsed answer string exactly.
inline double round_to_step(double v, double step) {
    double r = std::llround(v / step) * step;
    return std::atof(format_fixed(r, decimals_for_step(step)).c_str());
}

}  // namespace spargen
