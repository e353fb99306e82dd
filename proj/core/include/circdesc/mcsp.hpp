#pragma once

#include "circdesc/circuit.hpp"
#include "circdesc/frontier.hpp"
#include "circdesc/truth_table.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace circdesc
{

/*! \brief Decision instance: does some circuit with at most `bound` gates compute `table`? */
struct McspInstance
{
  TruthTable table;
  std::size_t bound = 0;
};

enum class Verdict
{
  accept,
  size_exceeded,
  mismatch
};

struct VerifyResult
{
  Verdict verdict = Verdict::accept;
  std::optional<std::uint64_t> row; ///< first mismatching row, for Verdict::mismatch

  bool accepted() const noexcept { return verdict == Verdict::accept; }
};

/*! \brief Checks size(c) <= bound, then all 2^n rows against the table.
 *
 * Throws arity_mismatch when the circuit and table disagree on n.
 */
VerifyResult verify( Circuit const& circuit, McspInstance const& instance );

struct MinimizationResult
{
  /*! \brief Exact minimum when search_cap_hit is false, otherwise the size of
   *         the fallback witness (an upper bound).
   */
  std::size_t minimal_size = 0;

  /*! \brief Proven lower bound; equals minimal_size when exact. */
  std::size_t lower_bound = 0;

  Circuit witness;

  /*! \brief The witness is the frontier's deterministic minimum circuit. */
  bool canonical = false;

  bool search_cap_hit = false;
};

inline constexpr std::size_t default_search_cap = 12u;

/*! \brief Minimum circuit for a table with 1 <= n <= 4.
 *
 * Runs a frontier search that stops as soon as the table is reached. If the
 * cap or the state budget ends the search first, the result carries the
 * smaller of the DNF and Lupanov circuits and `search_cap_hit` is set.
 */
MinimizationResult minimize( TruthTable const& table, std::size_t cap = default_search_cap );
MinimizationResult minimize( TruthTable const& table, FrontierOptions const& options );

/*! \brief minimize for several tables of one arity, sharing one search that
 *         stops once all of them are reached.
 */
std::vector<MinimizationResult> minimize_all( std::span<const TruthTable> tables, FrontierOptions const& options );

enum class Decision
{
  yes,
  no
};

/*! \brief Decision version with the <= convention.
 *
 * Throws cap_exceeded when the search could not settle the question.
 */
Decision decide( McspInstance const& instance, std::size_t cap = default_search_cap );

} // namespace circdesc
