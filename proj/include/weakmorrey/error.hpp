#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weakmorrey {

// Base of every error raised by the library. User-input problems derive from
// input_error; internal inconsistencies (a violated inequality that the
// mathematics guarantees) derive from inconsistency_error.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class input_error : public error {
 public:
  using error::error;
};

class invalid_exponent : public input_error {
 public:
  using input_error::input_error;
};

class invalid_system : public input_error {
 public:
  using input_error::input_error;
};

class dimension_error : public input_error {
 public:
  using input_error::input_error;
};

class parse_error : public input_error {
 public:
  parse_error(std::size_t position, const std::string& expected, const std::string& found)
      : input_error("at position " + std::to_string(position) + ": expected " + expected +
                    ", found " + found),
        position_(position),
        expected_(expected) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

// distribution() was asked for a function without a closed-form superlevel set.
class no_closed_form : public error {
 public:
  using error::error;
};

class degenerate_factor : public input_error {
 public:
  using input_error::input_error;
};

class constraint_violation : public input_error {
 public:
  using input_error::input_error;
};

class not_in_space : public input_error {
 public:
  not_in_space(std::size_t factor, const std::string& what)
      : input_error("factor " + std::to_string(factor) + " is not in its weak Morrey space: " + what),
        factor_(factor) {}

  std::size_t factor() const noexcept { return factor_; }

 private:
  std::size_t factor_;
};

class degenerate_family : public input_error {
 public:
  using input_error::input_error;
};

class unsupported_function : public error {
 public:
  using error::error;
};

class inconsistency_error : public error {
 public:
  using error::error;
};

}  // namespace weakmorrey
