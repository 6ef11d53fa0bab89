#pragma once

#include <stdexcept>
#include <string>

namespace chanres {

/// Sign change missing from a root bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical accuracy contract was breached (mesh drift, Parseval deficit,
/// unresolved phase curve).
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested (n, m) level has no real resonance angle at this energy.
class NoResonanceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace chanres
