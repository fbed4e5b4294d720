#pragma once

#include <stdexcept>
#include <string>

namespace weft {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two values over different alphabets met in one operation.
struct alphabet_mismatch : error {
    using error::error;
};

// Malformed stream/word/dyadic literal or spec file.
struct parse_error : error {
    using error::error;
};

// An enumeration (|A|^j table) would exceed the configured budget.
struct budget_error : error {
    using error::error;
};

// A finite level-map chain cannot answer at the requested depth.
struct chain_depth_error : error {
    using error::error;
};

// A claimed certificate failed a consistency probe.
struct certificate_error : error {
    using error::error;
};

} // namespace weft
