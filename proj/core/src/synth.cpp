#include "circdesc/synth.hpp"

#include "circdesc/error.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <unordered_map>

#include <fmt/format.h>

namespace circdesc
{

Circuit synth_dnf( TruthTable const& table )
{
  auto const n = table.arity();
  if ( n == 0u )
  {
    throw Error( ErrorCode::invalid_argument, "synth_dnf needs n >= 1" );
  }
  CircuitBuilder builder( n );
  std::vector<Ref> detectors;
  std::vector<Ref> literals( n );
  for ( std::uint64_t row = 0; row < table.num_rows(); ++row )
  {
    if ( !table.get( row ) )
      continue;
    for ( unsigned j = 0; j < n; ++j )
      literals[j] = builder.literal( j + 1u, ( row >> ( n - 1u - j ) ) & 1u );
    detectors.push_back( builder.and_tree( literals ) );
  }
  return builder.build( builder.or_tree( detectors ) );
}

namespace
{

Ref build_detector( CircuitBuilder& builder, unsigned first_var, unsigned width, std::uint64_t pattern )
{
  std::vector<Ref> literals( width );
  for ( unsigned j = 0; j < width; ++j )
    literals[j] = builder.literal( first_var + j + 1u, ( pattern >> ( width - 1u - j ) ) & 1u );
  return builder.and_tree( literals );
}

} // namespace

EqualityBank build_equality_bank( CircuitBuilder& builder, unsigned first_var, unsigned width )
{
  if ( width == 0u || first_var + width > builder.num_inputs() )
  {
    throw Error( ErrorCode::invalid_argument,
                 fmt::format( "bank over x{}..x{} does not fit {} inputs", first_var + 1u, first_var + width,
                              builder.num_inputs() ) );
  }
  EqualityBank bank;
  bank.first_var = first_var;
  bank.width = width;
  for ( unsigned j = 0; j < width; ++j )
    bank.negations.push_back( builder.literal( first_var + j + 1u, false ) );
  for ( std::uint64_t u = 0; u < ( std::uint64_t{ 1 } << width ); ++u )
    bank.detectors.push_back( build_detector( builder, first_var, width, u ) );
  return bank;
}

std::uint64_t equality_bank_cost( unsigned width )
{
  return ( std::uint64_t{ 1 } << width ) * ( width - 1u ) + width;
}

LupanovPlan make_lupanov_plan( unsigned n, unsigned leaf_threshold )
{
  if ( n == 0u )
  {
    throw Error( ErrorCode::invalid_argument, "Lupanov plan needs n >= 1" );
  }
  LupanovPlan plan;
  plan.n = n;
  plan.leaf_threshold = std::max( leaf_threshold, 1u );
  if ( n <= plan.leaf_threshold )
  {
    plan.dnf_leaf = true;
    plan.layers.push_back( { n, n } );
    return plan;
  }
  auto remaining = n;
  while ( remaining > plan.leaf_threshold )
  {
    auto const k = std::clamp( static_cast<unsigned>( std::bit_width( remaining - 1u ) ), 1u, remaining );
    plan.layers.push_back( { remaining, k } );
    remaining -= k;
  }
  if ( remaining > 0u )
    plan.layers.push_back( { remaining, remaining } );
  return plan;
}

LupanovPlan plan_from_blocks( unsigned n, std::vector<unsigned> const& blocks )
{
  LupanovPlan plan;
  plan.n = n;
  plan.leaf_threshold = 0u;
  auto remaining = n;
  for ( auto k : blocks )
  {
    if ( k == 0u || k > remaining )
    {
      throw Error( ErrorCode::invalid_argument, fmt::format( "block size {} does not fit {} remaining inputs", k, remaining ) );
    }
    plan.layers.push_back( { remaining, k } );
    remaining -= k;
  }
  if ( remaining != 0u || blocks.empty() )
  {
    throw Error( ErrorCode::invalid_argument, fmt::format( "block sizes must sum to n={}", n ) );
  }
  return plan;
}

namespace
{

class LupanovConstruction
{
public:
  LupanovConstruction( LupanovPlan const& plan )
      : plan_( plan ), builder_( plan.n, true ), banks_( plan.layers.size() ), memo_( plan.layers.size() )
  {
    unsigned prefix = 0;
    for ( std::size_t l = 0; l < plan.layers.size(); ++l )
    {
      first_var_.push_back( prefix );
      banks_[l].resize( std::size_t{ 1 } << plan.layers[l].block );
      prefix += plan.layers[l].block;
    }
  }

  Circuit run( TruthTable const& table )
  {
    return builder_.build( build( 0u, table ) );
  }

private:
  Ref detector( std::size_t layer, std::uint64_t u )
  {
    auto& slot = banks_[layer][u];
    if ( !slot )
      slot = build_detector( builder_, first_var_[layer], plan_.layers[layer].block, u );
    return *slot;
  }

  Ref build( std::size_t layer, TruthTable const& cofactor )
  {
    if ( cofactor.is_const0() )
      return Ref::constant( false );
    if ( cofactor.is_const1() )
      return Ref::constant( true );
    if ( auto it = memo_[layer].find( cofactor ); it != memo_[layer].end() )
      return it->second;

    auto const k = plan_.layers[layer].block;
    bool const last = layer + 1u == plan_.layers.size();
    std::vector<Ref> terms;
    for ( std::uint64_t u = 0; u < ( std::uint64_t{ 1 } << k ); ++u )
    {
      if ( last )
      {
        if ( cofactor.get( u ) )
          terms.push_back( detector( layer, u ) );
        continue;
      }
      auto const sub = build( layer + 1u, cofactor.cofactor( k, u ) );
      if ( sub == Ref::constant( false ) )
        continue;
      if ( sub == Ref::constant( true ) )
        terms.push_back( detector( layer, u ) );
      else
        terms.push_back( builder_.add_and( detector( layer, u ), sub ) );
    }
    auto const result = builder_.or_tree( terms );
    memo_[layer].emplace( cofactor, result );
    return result;
  }

  LupanovPlan const& plan_;
  CircuitBuilder builder_;
  std::vector<unsigned> first_var_;
  std::vector<std::vector<std::optional<Ref>>> banks_;
  std::vector<std::unordered_map<TruthTable, Ref>> memo_;
};

} // namespace

Circuit synth_lupanov( TruthTable const& table, unsigned leaf_threshold )
{
  return synth_lupanov( table, make_lupanov_plan( table.arity(), leaf_threshold ) );
}

Circuit synth_lupanov( TruthTable const& table, LupanovPlan const& plan )
{
  if ( plan.n != table.arity() )
  {
    throw Error( ErrorCode::arity_mismatch, fmt::format( "plan for n={} applied to a table of arity {}", plan.n, table.arity() ) );
  }
  if ( plan.dnf_leaf )
    return synth_dnf( table );
  return LupanovConstruction( plan ).run( table );
}

std::uint64_t size_accounting( LupanovPlan const& plan )
{
  std::uint64_t total = 0;
  unsigned prefix = 0;
  for ( std::size_t l = 0; l < plan.layers.size(); ++l )
  {
    auto const k = plan.layers[l].block;
    bool const last = l + 1u == plan.layers.size();
    auto const rest = plan.n - prefix;
    std::uint64_t cofactors = std::uint64_t{ 1 } << prefix;
    if ( rest < 6u )
      cofactors = std::min( cofactors, std::uint64_t{ 1 } << ( 1u << rest ) );
    auto const terms = std::uint64_t{ 1 } << k;
    auto const spine = ( last ? 0u : terms ) + terms - 1u;
    total += equality_bank_cost( k ) + cofactors * spine;
    prefix += k;
  }
  return total;
}

} // namespace circdesc
