#pragma once

#include <stdexcept>
#include <string>

namespace gaussfid {

// Bad argument or parameter outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A state constructor dropped more probability than the tail tolerance allows.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double lost_weight)
      : std::runtime_error(what), lost_weight_(lost_weight) {}

  double lost_weight() const noexcept { return lost_weight_; }

 private:
  double lost_weight_;
};

// A numerical route failed its own convergence or conservation check.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaussfid
