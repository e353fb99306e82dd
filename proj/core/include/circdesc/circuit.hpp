#pragma once

#include "circdesc/truth_table.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace circdesc
{

enum class GateOp : std::uint8_t
{
  And = 0,
  Or = 1,
  Not = 2
};

std::string_view to_string( GateOp op );

/*! \brief The gate basis {AND, OR, NOT} with its fan-in per operation. */
struct BasisSpec
{
  static constexpr std::array<GateOp, 3> ops{ GateOp::And, GateOp::Or, GateOp::Not };

  static constexpr unsigned arity( GateOp op ) { return op == GateOp::Not ? 1u : 2u; }
};

/*! \brief A wire target: one of the two constants, an input, or a gate.
 *
 * Inputs are 0-based here (`Ref::input(0)` is x1); gates are indexed by
 * their position in the circuit's gate list.
 */
class Ref
{
public:
  enum class Kind : std::uint8_t
  {
    Constant,
    Input,
    Gate
  };

  constexpr Ref() = default;

  static constexpr Ref constant( bool value ) { return Ref( Kind::Constant, value ? 1u : 0u ); }
  static constexpr Ref input( std::uint32_t var ) { return Ref( Kind::Input, var ); }
  static constexpr Ref gate( std::uint32_t index ) { return Ref( Kind::Gate, index ); }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr std::uint32_t index() const noexcept { return index_; }

  constexpr bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  constexpr bool is_input() const noexcept { return kind_ == Kind::Input; }
  constexpr bool is_gate() const noexcept { return kind_ == Kind::Gate; }

  friend constexpr auto operator<=>( Ref const&, Ref const& ) = default;

private:
  constexpr Ref( Kind kind, std::uint32_t index ) : kind_( kind ), index_( index ) {}

  Kind kind_ = Kind::Constant;
  std::uint32_t index_ = 0;
};

std::string format_ref( Ref ref );

struct Gate
{
  GateOp op = GateOp::And;
  Ref in1;
  std::optional<Ref> in2;

  friend bool operator==( Gate const&, Gate const& ) = default;
};

/*! \brief Single-output combinational circuit over {AND, OR, NOT}.
 *
 * Gates are stored in topological order and may only reference inputs,
 * constants, or gates with a smaller index. Construction does not validate;
 * call validate() or use CircuitBuilder, which only produces valid circuits.
 */
class Circuit
{
public:
  Circuit() = default;
  Circuit( unsigned num_inputs, std::vector<Gate> gates, Ref output );

  unsigned num_inputs() const noexcept { return n_; }
  std::span<const Gate> gates() const noexcept { return gates_; }
  Ref output() const noexcept { return output_; }

  /*! \brief Number of gates; inputs and constants are free. */
  std::size_t size() const noexcept { return gates_.size(); }

  friend bool operator==( Circuit const&, Circuit const& ) = default;

private:
  unsigned n_ = 0;
  std::vector<Gate> gates_;
  Ref output_;
};

struct Violation
{
  enum class Kind
  {
    Arity,
    ForwardReference,
    InputOutOfRange,
    BadConstant
  };

  Kind kind;
  std::string node; ///< `g<i>` or `out`
  std::string message;
};

std::vector<Violation> validate( Circuit const& circuit );

/*! \brief Throws invalid_circuit naming the first violation, if any. */
void require_valid( Circuit const& circuit );

bool evaluate_row( Circuit const& circuit, std::span<const bool> assignment );

/*! \brief Evaluates on the assignment encoded by `row` (x1 = MSB). */
bool evaluate_row( Circuit const& circuit, std::uint64_t row );

inline constexpr unsigned default_evaluation_cap = 20u;

/*! \brief Word-parallel simulation over all 2^n rows. */
TruthTable evaluate_all( Circuit const& circuit, unsigned arity_cap = default_evaluation_cap );

/*! \brief Longest input-to-output path counted in gates. */
std::size_t depth( Circuit const& circuit );

inline std::size_t size( Circuit const& circuit ) { return circuit.size(); }

/*! \brief Number of references to each gate (from gates and the output). */
std::vector<std::uint32_t> fanout_counts( Circuit const& circuit );

/*! \brief Drops every gate outside the output's cone, renumbering the rest. */
Circuit remove_dangling( Circuit const& circuit );

/*! \brief Incremental construction of valid circuits.
 *
 * Input negations are cached so that every input is negated by at most one
 * NOT gate. With structural hashing enabled, AND/OR/NOT gates over the same
 * operands are created once (AND/OR operands are treated as unordered).
 */
class CircuitBuilder
{
public:
  explicit CircuitBuilder( unsigned num_inputs, bool structural_hashing = false );

  unsigned num_inputs() const noexcept { return n_; }
  std::size_t num_gates() const noexcept { return gates_.size(); }

  Ref add_and( Ref a, Ref b );
  Ref add_or( Ref a, Ref b );
  Ref add_not( Ref a );

  /*! \brief x_var (1-based) or its cached negation. */
  Ref literal( unsigned var, bool positive );

  Ref and_tree( std::span<const Ref> operands );
  Ref or_tree( std::span<const Ref> operands );

  Circuit build( Ref output ) const;

private:
  Ref add( GateOp op, Ref a, std::optional<Ref> b );
  Ref tree( GateOp op, std::span<const Ref> operands, bool empty_value );
  void check_ref( Ref r ) const;

  unsigned n_;
  bool strash_;
  std::vector<Gate> gates_;
  std::vector<std::optional<Ref>> negations_;
  std::unordered_map<std::uint64_t, Ref> hash_;
};

/*! \brief Text form: `n=<k>`, one `g<i> = OP(<ref>[, <ref>])` line per gate,
 *         then `out = <ref>`; refs are `x<j>` (1-based), `g<i>`, `0`, `1`.
 */
std::string format_circuit( Circuit const& circuit );

/*! \brief Inverse of format_circuit; throws malformed_file on syntax errors
 *         and invalid_circuit on structural violations.
 */
Circuit parse_circuit( std::string_view text );

std::string to_dot( Circuit const& circuit );

} // namespace circdesc
