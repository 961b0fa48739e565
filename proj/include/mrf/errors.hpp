#pragma once

#include <stdexcept>
#include <string>

namespace mrf {

/// Malformed input: bad vertex ids, inconsistent dimensions, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource limit was hit (enumeration cap, neighborhood cap).
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on an event of probability zero.
class ZeroProbability : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Gibbs sampling cannot proceed: some site has no admissible symbol.
class SamplerDeadlock : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hidden-vertex contraction could not produce a unique answer.
class HiddenRecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrf
