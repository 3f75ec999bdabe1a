#pragma once

#include <stdexcept>
#include <string>

namespace cvswap {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong matrix shape, odd dimension, asymmetric input, wrong mode count.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the admissible domain (non-physical CM, transmissivity
// outside [0,1], non-symplectic transform, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Singular or ill-conditioned numerics.
class NumericError : public Error {
 public:
  using Error::Error;
};

class StandardFormUnavailable : public Error {
 public:
  using Error::Error;
};

// Bell-measurement matrix M = B1 + Z B2 Z singular or too ill-conditioned.
class MeasurementDegenerate : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON/CSV input. The message names the offending field.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvswap
