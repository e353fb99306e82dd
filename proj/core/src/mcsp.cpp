#include "circdesc/mcsp.hpp"

#include "circdesc/error.hpp"
#include "circdesc/synth.hpp"

#include <algorithm>
#include <bit>

#include <fmt/format.h>

namespace circdesc
{

VerifyResult verify( Circuit const& circuit, McspInstance const& instance )
{
  if ( circuit.num_inputs() != instance.table.arity() )
  {
    throw Error( ErrorCode::arity_mismatch, fmt::format( "circuit has n={} but the table has n={}", circuit.num_inputs(),
                                                         instance.table.arity() ) );
  }
  require_valid( circuit );
  if ( circuit.size() > instance.bound )
    return { Verdict::size_exceeded, std::nullopt };
  auto const computed = evaluate_all( circuit, TruthTable::max_arity );
  auto const expected = instance.table.words();
  auto const actual = computed.words();
  for ( std::size_t w = 0; w < expected.size(); ++w )
  {
    if ( auto const diff = expected[w] ^ actual[w]; diff != 0u )
    {
      return { Verdict::mismatch, w * 64u + static_cast<std::uint64_t>( std::countr_zero( diff ) ) };
    }
  }
  return { Verdict::accept, std::nullopt };
}

MinimizationResult minimize( TruthTable const& table, std::size_t cap )
{
  FrontierOptions options;
  options.cap = cap;
  return minimize( table, options );
}

MinimizationResult minimize( TruthTable const& table, FrontierOptions const& options )
{
  return minimize_all( std::span<const TruthTable>( &table, 1u ), options ).front();
}

std::vector<MinimizationResult> minimize_all( std::span<const TruthTable> tables, FrontierOptions const& options )
{
  if ( tables.empty() )
    return {};
  auto const n = tables.front().arity();
  if ( n == 0u || n > 4u )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "exact minimization supports 1 <= n <= 4, got {}", n ) );
  }
  std::vector<std::uint64_t> targets;
  for ( auto const& t : tables )
  {
    if ( t.arity() != n )
      throw Error( ErrorCode::arity_mismatch, "minimize_all needs tables of one arity" );
    targets.push_back( t.word() );
  }
  Frontier frontier( n, options );
  frontier.run( targets );

  std::vector<MinimizationResult> results;
  for ( std::size_t i = 0; i < tables.size(); ++i )
  {
    MinimizationResult result;
    if ( auto const size = frontier.size_of( targets[i] ) )
    {
      result.minimal_size = *size;
      result.lower_bound = *size;
      result.witness = frontier.witness( targets[i] );
      result.canonical = true;
    }
    else
    {
      auto dnf = synth_dnf( tables[i] );
      auto lupanov = synth_lupanov( tables[i] );
      result.witness = lupanov.size() < dnf.size() ? std::move( lupanov ) : std::move( dnf );
      result.minimal_size = result.witness.size();
      result.lower_bound = std::min( frontier.unreached_lower_bound(), result.minimal_size );
      result.search_cap_hit = true;
    }
    results.push_back( std::move( result ) );
  }
  return results;
}

Decision decide( McspInstance const& instance, std::size_t cap )
{
  auto const result = minimize( instance.table, cap );
  if ( !result.search_cap_hit )
    return result.minimal_size <= instance.bound ? Decision::yes : Decision::no;
  if ( result.minimal_size <= instance.bound )
    return Decision::yes;
  if ( instance.bound < result.lower_bound )
    return Decision::no;
  throw Error( ErrorCode::cap_exceeded,
               fmt::format( "minimum size lies in [{}, {}], search cap {} cannot decide bound {}", result.lower_bound,
                            result.minimal_size, cap, instance.bound ) );
}

} // namespace circdesc
