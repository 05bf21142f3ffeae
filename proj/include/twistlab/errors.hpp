#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twistlab {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Codes that parse but describe no planar diagram, and diagrams unusable for a computation.
class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RealizabilityError : public DiagramError {
 public:
  using DiagramError::DiagramError;
};

class PresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RepresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Criterion inputs outside a criterion's preconditions.
class CriterionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twistlab
