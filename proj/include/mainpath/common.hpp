#pragma once

// Shared error types and small text utilities used across the library.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mainpath {

// Base error. InputError maps to CLI exit code 1, AnalysisError to 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

class AnalysisError : public Error {
public:
    explicit AnalysisError(const std::string& what) : Error(what) {}
};

// Raised by acyclicity validation in fail mode; carries one offending cycle.
class CycleError : public AnalysisError {
public:
    CycleError(const std::string& what, std::vector<std::string> cycle)
        : AnalysisError(what), cycle_(std::move(cycle)) {}
    const std::vector<std::string>& cycle() const { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

// Raised when power iteration does not settle; carries the last residual.
class ConvergenceError : public AnalysisError {
public:
    ConvergenceError(const std::string& what, double residual, std::size_t iterations)
        : AnalysisError(what), residual_(residual), iterations_(iterations) {}
    double residual() const { return residual_; }
    std::size_t iterations() const { return iterations_; }

private:
    double residual_;
    std::size_t iterations_;
};

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Fixed-point decimal formatting, rounding halves away from zero.
// Applied at serialization only; internal values stay unrounded.
inline std::string to_fixed(double x, int decimals) {
    if (std::isnan(x)) return "nan";
    double scale = 1.0;
    for (int i = 0; i < decimals; ++i) scale *= 10.0;
    long long units = std::llround(std::fabs(x) * scale);
    long long whole = units;
    long long frac = 0;
    if (decimals > 0) {
        long long d = static_cast<long long>(scale);
        whole = units / d;
        frac = units % d;
    }
    std::ostringstream out;
    if (std::signbit(x) && units != 0) out << '-';
    out << whole;
    if (decimals > 0) {
        std::string f = std::to_string(frac);
        out << '.' << std::string(static_cast<std::size_t>(decimals) - f.size(), '0') << f;
    }
    return out.str();
}

// Shortest round-trippable representation of a double (for .net weights).
inline std::string to_roundtrip(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == x) {
        for (int prec = 1; prec <= 16; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
            std::sscanf(shorter, "%lf", &back);
            if (back == x) return shorter;
        }
    }
    return buf;
}

// FNV-1a 64-bit, used as the artifact content digest in pipeline manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

}  // namespace mainpath
