#pragma once
#include <stdexcept>
#include <string>

namespace srn {

// Exit-code contract used by the CLI: 0 ok, 2 parse, 3 assumptions,
// 4 scope, 5 numerical breakdown.
struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
    virtual int exit_code() const { return 1; }
};

// Malformed input text (DSL syntax, bad CSV, bad flags).
struct ParseError : Error {
    int line = -1, column = -1;
    ParseError(const std::string& m, int ln = -1, int col = -1)
        : Error(ln >= 0 ? "parse error at " + std::to_string(ln) + ":" +
                              std::to_string(col) + ": " + m
                        : "parse error: " + m),
          line(ln), column(col) {}
    int exit_code() const override { return 2; }
};

// Model fails (A1)/(A2) or a rate is negative on the probed range.
struct AssumptionError : Error {
    explicit AssumptionError(const std::string& m) : Error("assumption violated: " + m) {}
    int exit_code() const override { return 3; }
};

// Requested analysis exists but not for this network shape.
struct ScopeError : Error {
    explicit ScopeError(const std::string& m) : Error("out of scope: " + m) {}
    int exit_code() const override { return 4; }
};

// Numerical breakdown: overflow, singular system, refused QP, ...
struct NumericalError : Error {
    explicit NumericalError(const std::string& m) : Error("numerical breakdown: " + m) {}
    int exit_code() const override { return 5; }
};

// Internal inconsistency: a state the theory excludes (never silently patched).
struct InternalError : Error {
    explicit InternalError(const std::string& m) : Error("internal inconsistency: " + m) {}
    int exit_code() const override { return 1; }
};

}  // namespace srn
