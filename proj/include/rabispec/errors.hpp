#pragma once

#include <stdexcept>
#include <string>

namespace rabispec {

enum class errc {
    // system / input validation
    asymmetric_coupling,
    nonzero_diagonal,
    duplicate_label,
    fewer_than_two_levels,
    negative_energy,
    bad_drive,
    bad_time_span,
    bad_tolerances,
    uncoupled_transition,
    degenerate_transition,
    uncoupled_target,
    level_out_of_range,
    bad_path_endpoints,
    empty_window,
    no_peak_found,
    parse_error,
    io_error,
    non_normalized_initial,
    // numerical failures
    step_size_underflow,
    norm_drift_exceeded,
};

// Numerical failures map to CLI exit code 3, everything else to 2.
constexpr bool is_numeric_failure(errc c) {
    return c == errc::step_size_underflow || c == errc::norm_drift_exceeded;
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }
    bool numeric_failure() const noexcept { return is_numeric_failure(code_); }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace rabispec
