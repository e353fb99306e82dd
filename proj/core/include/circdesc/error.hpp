#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circdesc
{

/*! \brief Machine-readable failure categories.
 *
 * Every exception thrown by the library carries one of these codes; the CLI
 * prints it verbatim in its `error: <code>: <detail>` line.
 */
enum class ErrorCode
{
  arity_mismatch,
  arity_over_cap,
  invalid_circuit,
  malformed_payload,
  forward_reference,
  bad_op_code,
  field_overflow,
  incomplete_coverage,
  bound_too_small,
  cap_exceeded,
  solver_missing,
  solver_crash,
  model_verification_failed,
  malformed_file,
  missing_input,
  io_error,
  invalid_argument,
  unknown_subcommand
};

constexpr std::string_view to_string( ErrorCode code )
{
  switch ( code )
  {
  case ErrorCode::arity_mismatch: return "arity_mismatch";
  case ErrorCode::arity_over_cap: return "arity_over_cap";
  case ErrorCode::invalid_circuit: return "invalid_circuit";
  case ErrorCode::malformed_payload: return "malformed_payload";
  case ErrorCode::forward_reference: return "forward_reference";
  case ErrorCode::bad_op_code: return "bad_op_code";
  case ErrorCode::field_overflow: return "field_overflow";
  case ErrorCode::incomplete_coverage: return "incomplete_coverage";
  case ErrorCode::bound_too_small: return "bound_too_small";
  case ErrorCode::cap_exceeded: return "cap_exceeded";
  case ErrorCode::solver_missing: return "solver_missing";
  case ErrorCode::solver_crash: return "solver_crash";
  case ErrorCode::model_verification_failed: return "model_verification_failed";
  case ErrorCode::malformed_file: return "malformed_file";
  case ErrorCode::missing_input: return "missing_input";
  case ErrorCode::io_error: return "io_error";
  case ErrorCode::invalid_argument: return "invalid_argument";
  case ErrorCode::unknown_subcommand: return "unknown_subcommand";
  }
  return "unknown";
}

class Error : public std::runtime_error
{
public:
  Error( ErrorCode code, std::string const& detail )
      : std::runtime_error( detail ), code_( code )
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace circdesc
