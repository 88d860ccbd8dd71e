#pragma once

#include <stdexcept>
#include <string>

namespace ptzflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad scenario / planner parameters, including a violated feasibility check.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The flow network has no feasible flow.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A view ray does not reach the ground plane.
class HorizonError : public Error {
 public:
  using Error::Error;
};

// A ground point lies outside the camera's pan/tilt range.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Innovation covariance is singular (both prior and measurement noise vanish).
class DegenerateNoiseError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

// A solution or schedule violates an internal invariant.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptzflow
