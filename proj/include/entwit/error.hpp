#pragma once

#include <stdexcept>
#include <string>

namespace entwit {

/// Domain error raised when an input violates a named invariant.
///
/// The invariant name is kept separately so that the command-line front end
/// can report which contract was broken without parsing the message.
class Error : public std::runtime_error {
public:
  Error(std::string invariant, const std::string &message)
      : std::runtime_error(invariant + ": " + message),
        invariant_(std::move(invariant)) {}

  const std::string &invariant() const noexcept { return invariant_; }

private:
  std::string invariant_;
};

} // namespace entwit
