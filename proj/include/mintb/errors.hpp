#pragma once

#include <stdexcept>
#include <string>

namespace mintb {

/// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally invalid input: bad graph, bad state, bad toll vector, bad table.
class validation_error : public error {
 public:
  using error::error;
};

/// Malformed textual input (JSON payloads, SP terms, DIMACS files).
class parse_error : public error {
 public:
  using error::error;
};

/// The network is not two-terminal series-parallel for the requested terminals.
class not_series_parallel : public error {
 public:
  using error::error;
};

/// The game is not symmetric (players do not share one source/sink pair).
class not_symmetric : public error {
 public:
  using error::error;
};

/// A configured resource budget (search nodes, path count, subset size) ran out.
class budget_error : public error {
 public:
  using error::error;
};

/// An internal invariant failed; indicates a bug rather than bad input.
class internal_error : public error {
 public:
  using error::error;
};

}  // namespace mintb
