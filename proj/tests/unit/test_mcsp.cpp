#include "oracles.hpp"

#include <circdesc/error.hpp>
#include <circdesc/frontier.hpp>
#include <circdesc/mcsp.hpp>

#include <doctest.h>

using namespace circdesc;

namespace
{

Circuit and2()
{
  return Circuit( 2, { { GateOp::And, Ref::input( 0 ), Ref::input( 1 ) } }, Ref::gate( 0 ) );
}

} // namespace

TEST_CASE( "verify checks size first, then every row" )
{
  auto const t = TruthTable::from_string( "0001" );
  CHECK( verify( and2(), { t, 1 } ).accepted() );
  CHECK( verify( and2(), { t, 0 } ).verdict == Verdict::size_exceeded );
  auto const bad = verify( and2(), { TruthTable::from_string( "0000" ), 1 } );
  CHECK( bad.verdict == Verdict::mismatch );
  REQUIRE( bad.row.has_value() );
  CHECK( *bad.row == 3u );
  CHECK_THROWS_AS( verify( and2(), { TruthTable::from_string( "01" ), 1 } ), Error );
}

TEST_CASE( "minimize on the small examples" )
{
  auto const xr = minimize( TruthTable::from_string( "0110" ) );
  CHECK( xr.minimal_size == 4u );
  CHECK_FALSE( xr.search_cap_hit );
  CHECK( evaluate_all( xr.witness ) == TruthTable::from_string( "0110" ) );

  auto const proj = minimize( TruthTable::from_string( "01" ) );
  CHECK( proj.minimal_size == 0u );
  CHECK( proj.witness == Circuit( 1, {}, Ref::input( 0 ) ) );

  auto const a = minimize( TruthTable::from_string( "0001" ) );
  CHECK( a.minimal_size == 1u );
  CHECK( a.witness == and2() );

  CHECK_THROWS_AS( minimize( TruthTable( 5 ) ), Error );
}

TEST_CASE( "minimize reports a cap hit with a constructive fallback" )
{
  auto const r = minimize( TruthTable::from_string( "0110" ), 3 );
  CHECK( r.search_cap_hit );
  CHECK( r.lower_bound == 4u );
  CHECK( evaluate_all( r.witness ) == TruthTable::from_string( "0110" ) );
  CHECK( r.minimal_size == r.witness.size() );
}

TEST_CASE( "decide with the <= convention" )
{
  CHECK( decide( { TruthTable::from_string( "0110" ), 4 } ) == Decision::yes );
  CHECK( decide( { TruthTable::from_string( "0110" ), 3 } ) == Decision::no );
  CHECK( decide( { TruthTable::from_string( "0000" ), 0 } ) == Decision::yes );
  CHECK( decide( { TruthTable::from_string( "0001" ), 0 } ) == Decision::no );
}

TEST_CASE( "frontier matches brute-force enumeration" )
{
  for ( unsigned n : { 1u, 2u, 3u } )
  {
    unsigned const depth_limit = 4u;
    auto const naive = testing::naive_min_sizes( n, depth_limit );
    for ( bool symmetry : { true, false } )
    {
      Frontier f( n, { 10u, symmetry, 60'000'000u } );
      f.run();
      CHECK( f.reached_count() == f.num_functions() );
      for ( std::uint64_t t = 0; t < naive.size(); ++t )
      {
        auto const s = f.size_of( t );
        REQUIRE( s.has_value() );
        if ( naive[t] <= depth_limit )
          REQUIRE( *s == naive[t] );
        else
          REQUIRE( *s > depth_limit );
        auto const w = f.witness( t );
        REQUIRE( w.size() == *s );
        REQUIRE( evaluate_all( w ).word() == t );
      }
    }
  }
}

TEST_CASE( "n = 2 distribution puts XOR and XNOR at the top" )
{
  Frontier f( 2 );
  f.run();
  std::size_t top = 0;
  for ( std::uint64_t t = 0; t < 16; ++t )
    top = std::max( top, *f.size_of( t ) );
  CHECK( top == 4u );
  CHECK( *f.size_of( 0b0110 ) == 4u );
  CHECK( *f.size_of( 0b1001 ) == 4u );
  for ( std::uint64_t t = 0; t < 16; ++t )
  {
    if ( t != 0b0110 && t != 0b1001 )
      CHECK( *f.size_of( t ) < 4u );
  }
}

TEST_CASE( "frontier is reproducible and respects its cap" )
{
  Frontier a( 3 ), b( 3 );
  a.run();
  b.run();
  for ( std::uint64_t t = 0; t < 256; ++t )
    REQUIRE( a.witness( t ) == b.witness( t ) );

  Frontier capped( 3, { 3u, true, 60'000'000u } );
  capped.run();
  CHECK( capped.complete_through() == 3u );
  CHECK( capped.unreached_lower_bound() == 4u );
  for ( std::uint64_t t = 0; t < 256; ++t )
  {
    if ( auto s = capped.size_of( t ) )
      CHECK( *s == *a.size_of( t ) );
    else
      CHECK( *a.size_of( t ) > 3u );
  }
}

TEST_CASE( "two-pass lookahead under a tight state budget stays exact" )
{
  Frontier full( 3 );
  full.run();
  Frontier tight( 3, { 12u, true, 40u } );
  tight.run();
  CHECK( tight.budget_exhausted() );
  for ( std::uint64_t t = 0; t < 256; ++t )
  {
    if ( auto s = tight.size_of( t ) )
    {
      REQUIRE( *s == *full.size_of( t ) );
      REQUIRE( evaluate_all( tight.witness( t ) ).word() == t );
    }
    else
    {
      REQUIRE( *full.size_of( t ) > tight.complete_through() );
    }
  }
}

TEST_CASE( "minimize_all shares one search" )
{
  std::vector<TruthTable> tables;
  for ( std::uint64_t w : { 0x6666u, 0x8000u, 0x0000u, 0x7fffu } )
    tables.push_back( TruthTable::from_word( 4, w ) );
  auto const all = minimize_all( tables, { 12u, true, 60'000'000u } );
  REQUIRE( all.size() == tables.size() );
  for ( std::size_t i = 0; i < tables.size(); ++i )
  {
    CHECK( evaluate_all( all[i].witness ) == tables[i] );
    CHECK( all[i].lower_bound <= all[i].minimal_size );
  }
  CHECK( all[1].minimal_size == 3u );
  CHECK( all[2].minimal_size == 0u );
  CHECK( all[0].minimal_size == 4u );
  CHECK_FALSE( all[3].search_cap_hit );
}
