#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "netmirror/types.hpp"

namespace netmirror {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; message carries file and line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The same (day, source, target) triple appeared twice in an edge list.
class DuplicateEdgeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain (shape mismatch, negative weight, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input on which the operation has no meaningful result
/// (empty window, vanishing common component, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A spectral decomposition had fewer usable components than requested.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, Index available_components)
      : Error(what), available(available_components) {}
  Index available;
};

/// A neighborhood graph fell apart into several components.
class ConnectivityError : public Error {
 public:
  ConnectivityError(const std::string& what, std::vector<std::vector<Index>> comps)
      : Error(what), components(std::move(comps)) {}
  std::vector<std::vector<Index>> components;
};

/// Too few observations for the requested fit.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A generator or pipeline spec failed validation; message names the field.
class SpecValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace netmirror
