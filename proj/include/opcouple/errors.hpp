#pragma once

#include <stdexcept>
#include <string>

namespace opcouple {

// Shape or block-size inconsistencies between operands.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotSquare : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::domain_error {
  using std::domain_error::domain_error;
};

struct RankDeficient : std::domain_error {
  using std::domain_error::domain_error;
};

// A coupling block required to be invertible is not.
struct SingularBlock : std::domain_error {
  using std::domain_error::domain_error;
};

struct SingularCore : std::domain_error {
  using std::domain_error::domain_error;
};

// Kernel/cokernel dimensions do not match, so no extension equivalence exists.
struct NotEae : std::domain_error {
  using std::domain_error::domain_error;
};

// Witness matrices are not in the expected block scheme.
struct NotInForm : std::domain_error {
  using std::domain_error::domain_error;
};

struct NotSurjective : std::domain_error {
  using std::domain_error::domain_error;
};

struct NotInvertible : std::domain_error {
  using std::domain_error::domain_error;
};

// Extension space dimensions violate the solvability constraint.
struct BanPropsViolated : std::domain_error {
  using std::domain_error::domain_error;
};

struct CorrectionTooLarge : std::domain_error {
  using std::domain_error::domain_error;
};

// Malformed textual input (rational literals, matrix JSON).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace opcouple
