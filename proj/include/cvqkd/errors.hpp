#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

// Domain violations (bad arguments, unphysical values) and protocol-level
// failures get distinct types so callers can react per the session rules:
// estimation failures discard the block, no-code conditions idle the session.

struct unphysical_state_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct estimation_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct no_code_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singular_element_error : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace cvqkd
