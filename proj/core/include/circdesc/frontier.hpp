#pragma once

#include "circdesc/circuit.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace circdesc
{

struct FrontierOptions
{
  /*! \brief Largest gate count explored. */
  std::size_t cap = 12u;

  /*! \brief Collapse states related by an input permutation or by AND/OR
   *         duality (f -> NOT f(NOT x)); both preserve circuit size.
   */
  bool symmetry = true;

  /*! \brief Upper limit on stored states per level. When the next level
   *         would not fit, its sets are enumerated on the fly from the
   *         current one instead, which settles two more sizes and ends the
   *         search.
   */
  std::size_t max_states = 60'000'000u;
};

/*! \brief Exhaustive minimum-size search over the function space of n <= 4.
 *
 * Level s holds every set of s distinct gate functions that some s-gate
 * circuit computes (constants and inputs are free and never gate outputs).
 * Level s+1 extends each set by one AND/OR/NOT gate over its wires, so the
 * first level at which a function appears as a gate is its exact circuit
 * size. Sets are deduplicated, and with `symmetry` only one representative
 * per orbit is kept while reached functions are recorded for the whole
 * orbit.
 *
 * For every reached function the parent set is kept; witnesses are rebuilt
 * by placing the parent's members in dependency order and adding one gate.
 * The search is sequential and its discovery order is fixed, so witnesses
 * are reproducible.
 */
class Frontier
{
public:
  Frontier( unsigned n, FrontierOptions options = {} );

  /*! \brief Explores until every function (or `target`) is reached, the cap
   *         is hit, or the state budget runs out.
   */
  void run( std::optional<std::uint64_t> target = std::nullopt );

  /*! \brief Explores until every target is reached (all functions if empty). */
  void run( std::span<const std::uint64_t> targets );

  unsigned arity() const noexcept { return n_; }
  std::uint64_t num_functions() const noexcept { return std::uint64_t{ 1 } << ( 1u << n_ ); }

  /*! \brief Exact circuit size, if the search reached the function. */
  std::optional<std::size_t> size_of( std::uint64_t function ) const;

  /*! \brief Every function of size <= this value has been reached. */
  std::size_t complete_through() const noexcept { return complete_through_; }

  /*! \brief Lower bound for functions not reached. */
  std::size_t unreached_lower_bound() const noexcept { return complete_through_ + 1u; }

  bool budget_exhausted() const noexcept { return budget_exhausted_; }

  std::uint64_t reached_count() const noexcept { return reached_count_; }

  /*! \brief Number of stored states per explored level. */
  std::vector<std::size_t> const& level_sizes() const noexcept { return level_sizes_; }

  /*! \brief Minimum-size circuit for a reached function. */
  Circuit witness( std::uint64_t function ) const;

private:
  using Table = std::uint16_t;

  void record( std::vector<Table> const& parent, Table table, std::size_t level );
  void canonicalize( std::vector<Table>& state ) const;

  unsigned n_;
  FrontierOptions options_;
  std::uint32_t mask_;
  std::vector<Table> inputs_;
  std::vector<bool> group_dual_;
  std::size_t group_size_ = 0;
  std::vector<Table> images_; ///< images_[t * group_size_ + g]: table t under symmetry g
  mutable std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;

  std::vector<std::uint8_t> size_;
  std::vector<std::vector<Table>> parent_;
  std::uint64_t reached_count_ = 0;
  std::size_t complete_through_ = 0;
  bool budget_exhausted_ = false;
  bool ran_ = false;
  std::vector<std::size_t> level_sizes_;
};

/*! \brief Rebuilds a circuit computing `target` from a realizable set of gate
 *         functions, placing members greedily in dependency order.
 */
Circuit circuit_from_function_set( unsigned n, std::vector<std::uint16_t> const& members, std::uint16_t target );

} // namespace circdesc
