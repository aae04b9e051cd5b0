#pragma once

#include <stdexcept>
#include <string>

namespace calderon {

/// Input rejected before any computation ran (bad schema, bad dimensions,
/// unsupported enum value). Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  InputError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// A numerical contract was violated mid-computation (real characteristic
/// root, eigenvalue on a contour, transversality failure, integrator not
/// converging). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string module, std::string op, const std::string& what)
      : std::runtime_error(module + "/" + op + ": " + what),
        module_(std::move(module)),
        op_(std::move(op)) {}
  const std::string& module_name() const { return module_; }
  const std::string& op_name() const { return op_; }

 private:
  std::string module_;
  std::string op_;
};

}  // namespace calderon
