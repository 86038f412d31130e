#pragma once

#include <stdexcept>
#include <string>

namespace fano {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad polytope, bad test configuration, bad file.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error("invalid input: " + what) {}
};

/// Surplus interpolation samples disagree with the fitted polynomial.
class InconsistentSamples : public Error {
 public:
  explicit InconsistentSamples(const std::string& what)
      : Error("inconsistent samples: " + what) {}
};

/// Leading coefficient of tr(A^p) vanishes.
class DegenerateNorm : public Error {
 public:
  explicit DegenerateNorm(const std::string& what) : Error("degenerate norm: " + what) {}
};

class NotProduct : public Error {
 public:
  explicit NotProduct(const std::string& what) : Error("not a product configuration: " + what) {}
};

/// Quadrature box could not be grown far enough to reach the tail target.
class TailTolerance : public Error {
 public:
  explicit TailTolerance(const std::string& what) : Error("tail tolerance: " + what) {}
};

class NumericalUnderflow : public Error {
 public:
  explicit NumericalUnderflow(const std::string& what)
      : Error("numerical underflow: " + what) {}
};

/// Derivative series along a ray decreased, which convexity forbids.
class NonMonotone : public Error {
 public:
  explicit NonMonotone(const std::string& what) : Error("non-monotone slope: " + what) {}
};

}  // namespace fano
