#ifndef VORBOUND_ERRORS_HPP
#define VORBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vorbound {

// Argument outside the mathematical domain of an operation, or a bound
// evaluated where it is not asserted to hold (e.g. n < 13).
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Brute-force machinery asked to exceed its hard caps.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric procedure (quadrature, root bracketing) failed to converge.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vorbound

#endif
