#pragma once

#include "circdesc/circuit.hpp"
#include "circdesc/truth_table.hpp"

#include <cstdint>
#include <vector>

namespace circdesc
{

/*! \brief Canonical lookup-table circuit: one AND-tree detector per 1-row,
 *         combined by a balanced OR-tree.
 *
 * Literals come from the builder's negation cache, so each input is negated
 * at most once. The all-zeros table yields the constant FALSE wire.
 */
Circuit synth_dnf( TruthTable const& table );

/*! \brief Shared equality detectors over the block x_{first+1}..x_{first+width}.
 *
 * `detectors[u]` is 1 exactly when the block reads `u` with x_{first+1} as
 * the most significant bit. For width 1 the detectors are the literals
 * themselves and only the negation costs a gate.
 */
struct EqualityBank
{
  unsigned first_var = 0;
  unsigned width = 0;
  std::vector<Ref> detectors;
  std::vector<Ref> negations;
};

EqualityBank build_equality_bank( CircuitBuilder& builder, unsigned first_var, unsigned width );

/*! \brief Upper bound on gates spent by build_equality_bank: 2^k (k - 1) + k. */
std::uint64_t equality_bank_cost( unsigned width );

struct LupanovLayer
{
  unsigned remaining = 0; ///< inputs not yet consumed when the layer starts
  unsigned block = 0;     ///< inputs consumed by this layer's bank
};

/*! \brief Block schedule for the layered block-Shannon construction.
 *
 * Non-final layers use block = clamp(ceil(log2 remaining), 1, remaining).
 * Once `remaining` drops to the leaf threshold, a final layer takes all of
 * them at once and its cofactors are the table bits themselves. When
 * n <= leaf threshold the whole table goes to synth_dnf instead.
 */
struct LupanovPlan
{
  unsigned n = 0;
  unsigned leaf_threshold = 4;
  bool dnf_leaf = false;
  std::vector<LupanovLayer> layers;
};

inline constexpr unsigned default_leaf_threshold = 4u;

LupanovPlan make_lupanov_plan( unsigned n, unsigned leaf_threshold = default_leaf_threshold );

/*! \brief Plan with explicit block sizes (must sum to n). */
LupanovPlan plan_from_blocks( unsigned n, std::vector<unsigned> const& blocks );

Circuit synth_lupanov( TruthTable const& table, unsigned leaf_threshold = default_leaf_threshold );
Circuit synth_lupanov( TruthTable const& table, LupanovPlan const& plan );

/*! \brief Closed-form gate bound for any table built with `plan`.
 *
 * Sums, per layer, the bank cost plus the selection spine of every distinct
 * cofactor that can reach the layer: at layer l with p prefix bits and
 * block k there are at most min(2^p, 2^(2^(n-p))) distinct cofactors, each
 * costing at most 2^k ANDs and 2^k - 1 ORs (no ANDs on the final layer,
 * where the cofactors are constants).
 */
std::uint64_t size_accounting( LupanovPlan const& plan );

} // namespace circdesc
