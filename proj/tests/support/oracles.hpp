#pragma once

#include <circdesc/circuit.hpp>
#include <circdesc/truth_table.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace circdesc::testing
{

/*! \brief Minimum gate counts by brute force: every gate sequence of up to
 *         `max_gates` gates over constants, inputs and earlier gates.
 *
 * Works on raw table words and shares no code with the library. Entries for
 * functions needing more than `max_gates` gates hold `max_gates + 1`.
 */
inline std::vector<std::uint8_t> naive_min_sizes( unsigned n, unsigned max_gates )
{
  std::uint32_t const rows = 1u << n;
  std::uint64_t const mask = rows == 64u ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << rows ) - 1u;
  std::vector<std::uint8_t> best( std::size_t{ 1 } << rows, static_cast<std::uint8_t>( max_gates + 1u ) );

  std::vector<std::uint64_t> wires{ 0u, mask };
  for ( unsigned v = 0; v < n; ++v )
  {
    std::uint64_t t = 0;
    for ( std::uint32_t r = 0; r < rows; ++r )
    {
      if ( ( r >> ( n - 1u - v ) ) & 1u )
        t |= std::uint64_t{ 1 } << r;
    }
    wires.push_back( t );
  }
  for ( auto w : wires )
    best[w] = 0u;

  auto recurse = [&]( auto&& self, unsigned used ) -> void {
    if ( used == max_gates )
      return;
    auto const count = wires.size();
    auto push = [&]( std::uint64_t t ) {
      t &= mask;
      if ( best[t] > used + 1u )
        best[t] = static_cast<std::uint8_t>( used + 1u );
      wires.push_back( t );
      self( self, used + 1u );
      wires.pop_back();
    };
    for ( std::size_t a = 0; a < count; ++a )
    {
      push( ~wires[a] );
      for ( std::size_t b = a + 1u; b < count; ++b )
      {
        push( wires[a] & wires[b] );
        push( wires[a] | wires[b] );
      }
    }
  };
  recurse( recurse, 0u );
  return best;
}

/*! \brief Random valid circuit with `s` gates; operands are drawn uniformly
 *         from constants, inputs and earlier gates.
 */
inline Circuit random_circuit( std::mt19937_64& rng, unsigned n, unsigned s )
{
  std::vector<Gate> gates;
  auto pick = [&]( unsigned limit ) {
    auto const k = std::uniform_int_distribution<unsigned>( 0u, 1u + n + limit )( rng );
    if ( k < 2u )
      return Ref::constant( k == 1u );
    if ( k < 2u + n )
      return Ref::input( k - 2u );
    return Ref::gate( k - 2u - n );
  };
  for ( unsigned i = 0; i < s; ++i )
  {
    auto const op = static_cast<GateOp>( std::uniform_int_distribution<int>( 0, 2 )( rng ) );
    auto const a = pick( i );
    if ( op == GateOp::Not )
      gates.push_back( { op, a, std::nullopt } );
    else
      gates.push_back( { op, a, pick( i ) } );
  }
  return Circuit( n, std::move( gates ), pick( s ) );
}

inline TruthTable random_table( std::mt19937_64& rng, unsigned n )
{
  TruthTable t( n );
  for ( std::uint64_t r = 0; r < t.num_rows(); ++r )
    t.set( r, rng() & 1u );
  return t;
}

/*! \brief Row-by-row reference evaluation by direct recursion on the gate list. */
inline bool reference_eval( Circuit const& c, std::uint64_t row )
{
  auto const n = c.num_inputs();
  std::vector<bool> val;
  auto read = [&]( Ref r ) -> bool {
    if ( r.is_constant() )
      return r.index() != 0u;
    if ( r.is_input() )
      return ( row >> ( n - 1u - r.index() ) ) & 1u;
    return val[r.index()];
  };
  for ( auto const& g : c.gates() )
  {
    switch ( g.op )
    {
    case GateOp::And: val.push_back( read( g.in1 ) && read( *g.in2 ) ); break;
    case GateOp::Or: val.push_back( read( g.in1 ) || read( *g.in2 ) ); break;
    case GateOp::Not: val.push_back( !read( g.in1 ) ); break;
    }
  }
  return read( c.output() );
}

} // namespace circdesc::testing
