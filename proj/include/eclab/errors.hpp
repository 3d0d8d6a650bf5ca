#pragma once

#include <stdexcept>
#include <string>

namespace eclab {

/// A parameter outside an operation's admissible range (e.g. segment_len < 2).
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mathematical precondition violated: bad reduction, singular model, s outside (0, 3].
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// gcd(b, d) > 1 where an inverse of b modulo d is required.
class not_invertible : public domain_error {
public:
    using domain_error::domain_error;
};

/// The CRT system n = 0 (mod d), n = 1 (mod ord_d(b)) has no solution.
class no_crt_solution : public domain_error {
public:
    using domain_error::domain_error;
};

/// An enumeration would exceed its configured size cap.
class resource_limit : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace eclab
