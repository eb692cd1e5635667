#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cradle {

enum class boundary_kind { fixed_fixed, free_free };

// process exit codes shared by the CLI and the pipeline helpers
enum class exit_code : int { ok = 0, validation = 2, verification = 3, io = 4 };

// invalid request or parameter region; carries a stable machine-readable code
class validation_error : public std::runtime_error {
public:
    validation_error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// a built object failed its own invariants or an oracle comparison
class verification_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// conditioning cap on the chain order; CRADLE_MAX_N overrides the default
inline int max_chain_order() {
    if (const char* s = std::getenv("CRADLE_MAX_N")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    }
    return 16;
}

}  // namespace cradle
