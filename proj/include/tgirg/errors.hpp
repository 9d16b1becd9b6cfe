#pragma once

#include <stdexcept>
#include <string>

namespace tgirg {

/// Malformed arguments or parameters violating a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Statistics requested on a sample too small to support them.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive checks refused because the input exceeds their size limit.
class SizeLimitExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A structural guarantee (crossing anchor, boundary walk) failed on a sampled graph.
/// Expected only for misconfigured instances (D0 too large, edge_prob < 1).
class LemmaViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two vertices were required to be connected but are not.
class NoPath : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tgirg
