#pragma once

#include <stdexcept>
#include <string>

namespace rigged {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// The energy sits on a threshold (k, q1 or q2 vanishes) where the
// coefficient formulas divide by zero.
class SingularEnergy : public Error {
 public:
  using Error::Error;
};

// The resolvent was requested on the spectrum of H.
class SpectrumHit : public Error {
 public:
  using Error::Error;
};

class JostZero : public Error {
 public:
  using Error::Error;
};

class ScanTooCoarse : public Error {
 public:
  using Error::Error;
};

class DegenerateRoot : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace rigged
