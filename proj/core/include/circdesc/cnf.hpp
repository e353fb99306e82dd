#pragma once

#include "circdesc/circuit.hpp"
#include "circdesc/mcsp.hpp"
#include "circdesc/truth_table.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace circdesc
{

using Literal = std::int32_t;
using Clause = std::vector<Literal>;

/*! \brief Variables of the circuit-existence encoding.
 *
 * Nodes are numbered as in the codec: 0 = FALSE, 1 = TRUE, 2..n+1 = inputs,
 * n+2+i = gate i. Gate i may read any node below n+2+i.
 */
struct CnfVariables
{
  std::size_t gates = 0;                    ///< candidate gates r = s - 1
  std::vector<std::array<Literal, 3>> op;   ///< op[i][AND|OR|NOT]
  std::vector<std::vector<Literal>> in1;    ///< in1[i][node]
  std::vector<std::vector<Literal>> in2;    ///< in2[i][node]
  std::vector<std::vector<Literal>> value;  ///< value[i][row] of gate i
  std::vector<std::vector<Literal>> first;  ///< first[i][row] operand value
  std::vector<std::vector<Literal>> second; ///< second[i][row] operand value
  std::vector<Literal> output;              ///< output[node]
};

/*! \brief CNF that is satisfiable iff a circuit with fewer than `bound` gates
 *         computes `table`.
 */
struct CnfInstance
{
  TruthTable table;
  std::size_t bound = 0;
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;
  CnfVariables vars;
};

/*! \brief Builds DESC_{<s}: s - 1 candidate gates with one-hot op and operand
 *         selectors, per-row values, and a one-hot output selector.
 *
 * Unused candidate gates may compute anything, so smaller circuits are
 * covered too. AND/OR operands are ordered (in1 < in2); NOT repeats its
 * operand. Requires 1 <= n <= 4 and s >= 1.
 */
CnfInstance encode_desc_cnf( McspInstance const& instance );

/*! \brief DIMACS text with `c map` comment lines naming every selector. */
std::string write_dimacs( CnfInstance const& cnf );

/*! \brief Rebuilds the selected circuit from a model and checks it.
 *
 * `model[v]` is the value of variable v (index 0 unused). Dead gates are
 * dropped. Throws model_verification_failed if the circuit does not compute
 * the table within the bound.
 */
Circuit decode_model( CnfInstance const& cnf, std::vector<bool> const& model );

enum class SolveStatus
{
  sat,
  unsat,
  unknown ///< time limit reached or the solver answered UNKNOWN
};

struct SolveResult
{
  SolveStatus status = SolveStatus::unknown;
  std::optional<Circuit> circuit; ///< verified circuit when sat

  bool satisfiable() const noexcept { return status == SolveStatus::sat; }
};

/*! \brief Environment variable holding the default solver command. */
inline constexpr char const* solver_env_var = "CIRCDESC_SAT_SOLVER";

/*! \brief Command from the environment, or empty. */
std::string solver_from_environment();

/*! \brief Runs an external DIMACS solver.
 *
 * `command` is run by /bin/sh; `{}` is replaced by the CNF file path, or the
 * path is appended when absent. The solver must print an `s` line and, when
 * satisfiable, `v` lines. A positive `time_limit_s` kills the solver after
 * that many seconds and yields SolveStatus::unknown. Errors: solver_missing
 * (empty command or exit 126/127), solver_crash (no verdict),
 * model_verification_failed.
 */
SolveResult solve_cnf( CnfInstance const& cnf, std::string const& command, double time_limit_s = 0.0 );

/*! \brief Parses solver output into a status and a model sized num_vars + 1.
 *
 * Returns nullopt when no `s` line is present.
 */
std::optional<SolveStatus> parse_solver_output( std::string const& output, std::uint32_t num_vars,
                                                std::vector<bool>& model );

} // namespace circdesc
