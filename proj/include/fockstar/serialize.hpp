#pragma once

#include "fockstar/fock_vector.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace fockstar {

/// Malformed Fock-vector text. `line` and `column` are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Canonical text form, one monomial per line in MultiIndex order:
///
///     degree; (coord,freq,dualflag)^mult ...; numerator/denominator
///
/// Equal vectors always serialize to identical bytes.
std::string serialize_fock(const FockVector& f);

/// Inverse of serialize_fock. Accepts `#` comments, blank lines, any line order
/// and entry order; repeated monomials are summed. Empty input is the zero vector.
FockVector deserialize_fock(std::string_view text);

}  // namespace fockstar
