#include "oracles.hpp"

#include <circdesc/census.hpp>
#include <circdesc/error.hpp>
#include <circdesc/synth.hpp>

#include <doctest.h>

#include <array>
#include <numeric>

using namespace circdesc;

TEST_CASE( "n = 1 census" )
{
  auto const c = run_census( 1 );
  REQUIRE( c.records.size() == 4u );
  CHECK( c.distribution.counts == std::map<std::size_t, std::uint64_t>{ { 0u, 3u }, { 1u, 1u } } );
  CHECK( c.records[1].minimal_size == 1u ); // NOT x1 is row 0 only
  CHECK( c.distribution.fraction_at_least == 0.0 );
  CHECK( c.distribution.threshold == 2.0 );
}

TEST_CASE( "n = 2 census agrees with brute force" )
{
  auto const c = run_census( 2 );
  auto const naive = testing::naive_min_sizes( 2, 5 );
  REQUIRE( c.records.size() == 16u );
  for ( auto const& r : c.records )
  {
    CHECK( r.exact );
    CHECK( r.minimal_size == naive[r.index] );
    CHECK( r.lower_bound == r.minimal_size );
    CHECK( evaluate_all( r.witness ).word() == r.index );
    CHECK( r.encoded_bits == encode( r.witness ).bit_length );
    CHECK( r.depth == depth( r.witness ) );
  }
  CHECK( c.distribution.max == 4u );
}

TEST_CASE( "n = 3 census distribution" )
{
  auto const c = run_census( 3 );
  REQUIRE( c.records.size() == 256u );
  std::map<std::size_t, std::uint64_t> const expected{ { 0, 5 },  { 1, 9 }, { 2, 26 }, { 3, 44 }, { 4, 37 },
                                                       { 5, 82 }, { 6, 35 }, { 7, 10 }, { 8, 8 } };
  CHECK( c.distribution.counts == expected );
  CHECK( c.distribution.inexact == 0u );
  double sum = 0;
  for ( auto const& [s, k] : expected )
    sum += static_cast<double>( s * k );
  CHECK( c.distribution.mean == doctest::Approx( sum / 256.0 ) );
  CHECK( c.distribution.mean > 8.0 / 3.0 );
  CHECK( c.distribution.max == 8u );
  CHECK( c.distribution.threshold == doctest::Approx( 8.0 / 3.0 ) );
  CHECK( c.distribution.fraction_at_least == doctest::Approx( ( 256.0 - 5 - 9 - 26 ) / 256.0 ) );
  CHECK_THROWS_AS( run_census( 5 ), Error );
}

TEST_CASE( "census records are invariant under input permutation and duality" )
{
  auto const c = run_census( 3 );
  std::array<unsigned, 3> perm{ 0, 1, 2 };
  do
  {
    for ( bool dual : { false, true } )
    {
      for ( auto const& r : c.records )
      {
        auto const image = transform_circuit( r.witness, perm, dual );
        auto const t = evaluate_all( image ).word();
        REQUIRE( image.size() == r.witness.size() );
        REQUIRE( c.records[t].minimal_size == r.minimal_size );
      }
    }
  } while ( std::next_permutation( perm.begin(), perm.end() ) );
}

TEST_CASE( "sandwich: minimal size <= Lupanov <= DNF sizes" )
{
  auto const c = run_census( 3 );
  for ( auto const& r : c.records )
  {
    auto const t = TruthTable::from_word( 3, r.index );
    auto const lup = synth_lupanov( t ).size();
    auto const dnf = synth_dnf( t ).size();
    CHECK( r.minimal_size <= lup );
    CHECK( lup <= dnf );
  }
}

TEST_CASE( "compressor table" )
{
  for ( unsigned n : { 1u, 2u, 3u } )
  {
    auto const census = run_census( n );
    auto const table = build_compressor_table( census );
    REQUIRE( table.rows.size() == ( std::size_t{ 1 } << ( 1u << n ) ) );
    for ( std::size_t i = 0; i < table.rows.size(); ++i )
    {
      auto const& row = table.rows[i];
      REQUIRE( row.index == i );
      auto const c = decode( row.encoding );
      REQUIRE( evaluate_all( c ) == row.table );
      REQUIRE( c.size() == census.records[i].minimal_size );
    }
    auto const pack = compressor_pack( table );
    auto const back = parse_compressor_pack( pack );
    CHECK( back.n == table.n );
    REQUIRE( back.rows.size() == table.rows.size() );
    for ( std::size_t i = 0; i < table.rows.size(); ++i )
      CHECK( back.rows[i].encoding == table.rows[i].encoding );
    CHECK( compressor_csv( table, 7 ) == compressor_csv( build_compressor_table( run_census( n ) ), 7 ) );
  }
  auto const t2 = build_compressor_table( run_census( 2 ) );
  CHECK( decode( t2.rows[6].encoding ).size() == 4u );
  auto const pack = compressor_pack( t2 );
  CHECK_THROWS_AS( parse_compressor_pack( std::span<const std::uint8_t>( pack.data(), pack.size() - 1u ) ), Error );
}

TEST_CASE( "artifact text" )
{
  CHECK( artifact_header( "census", 42, 3 ) == "# circdesc format_version=1 seed=42 artifact=census n=3\n" );
  CHECK( artifact_header( "ratio_vs_n", 0, 0 ) == "# circdesc format_version=1 seed=0 artifact=ratio_vs_n\n" );
  auto const census = run_census( 2 );
  auto const csv = census_csv( census, 9 );
  CHECK( csv.rfind( artifact_header( "census", 9, 2 ), 0 ) == 0u );
  CHECK( csv.find( "index,minimal_size,encoded_bits,depth,detectors,sharing_ratio,score,exact,lower_bound" ) != std::string::npos );
  CHECK( std::count( csv.begin(), csv.end(), '\n' ) == 18 );
  CHECK( fnv1a64( "" ) == 0xcbf29ce484222325ull );
  CHECK( fnv1a64( "a" ) == 0xaf63dc4c8601ec8cull );
}

TEST_CASE( "structure metrics" )
{
  auto const dnf = synth_dnf( TruthTable::from_string( "00000110" ) );
  auto const m = lut_likeness( dnf );
  CHECK( m.detectors == 2u );
  CHECK( m.spine_depth == 1u );
  CHECK( m.histogram == std::array<std::size_t, 3>{ 4u, 1u, 2u } );
  CHECK( m.score >= 0.0 );
  CHECK( m.score <= 1.0 );

  Circuit const single( 2, { { GateOp::And, Ref::input( 0 ), Ref::input( 1 ) } }, Ref::gate( 0 ) );
  auto const s = lut_likeness( single );
  CHECK( s.detectors == 1u );
  CHECK( s.spine_depth == 0u );
  CHECK( s.sharing_ratio == 0.0 );
  CHECK( s.coverage == 1.0 );
  CHECK( s.score == 1.0 );

  CHECK( lut_likeness( Circuit( 2, {}, Ref::input( 0 ) ) ).score >= 0.0 );
}

TEST_CASE( "Shannon report" )
{
  auto const r1 = shannon_report( run_census( 1 ) );
  CHECK( r1.distribution.fraction_at_least == 0.0 );

  auto const r2 = shannon_report( run_census( 2 ) );
  REQUIRE( r2.audit.has_value() );
  CHECK( r2.audit->mean_length >= 4.0 );
  CHECK( r2.text.find( "functions=16" ) != std::string::npos );

  auto const a = shannon_report( run_census( 3 ) );
  auto const b = shannon_report( run_census( 3 ) );
  CHECK( a.text == b.text );
  CHECK( a.digest == b.digest );
  CHECK( a.digest == fnv1a64( a.text ) );
}
