#pragma once

#include <stdexcept>
#include <string>

namespace twodevp {

enum class Errc {
  dimension_mismatch,
  not_hermitian,
  not_indefinite,
  non_finite_parameter,
  eig_solver_failure,
  zero_vector,
  empty_grid,
  invalid_grid,
  no_eigenvalue_nearby,
  wrong_dimension,
  bracket_failure,
  definite_projection,
  not_positive_definite,
  not_stable,
  invalid_tolerances,
  invalid_options,
  parse_error,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace twodevp
