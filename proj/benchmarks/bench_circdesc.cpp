#include <circdesc/census.hpp>
#include <circdesc/codec.hpp>
#include <circdesc/frontier.hpp>
#include <circdesc/mcsp.hpp>
#include <circdesc/synth.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace circdesc;

namespace
{

TruthTable random_table( unsigned n, std::uint64_t seed )
{
  std::mt19937_64 rng( seed );
  TruthTable t( n );
  for ( std::uint64_t r = 0; r < t.num_rows(); ++r )
    t.set( r, rng() & 1u );
  return t;
}

void BM_FrontierFull( benchmark::State& state )
{
  auto const n = static_cast<unsigned>( state.range( 0 ) );
  for ( auto _ : state )
  {
    Frontier f( n );
    f.run();
    benchmark::DoNotOptimize( f.reached_count() );
  }
}
BENCHMARK( BM_FrontierFull )->Arg( 2 )->Arg( 3 )->Unit( benchmark::kMillisecond );

void BM_MinimizeN4( benchmark::State& state )
{
  auto const t = TruthTable::from_word( 4, 0x6666u );
  for ( auto _ : state )
    benchmark::DoNotOptimize( minimize( t ).minimal_size );
}
BENCHMARK( BM_MinimizeN4 )->Unit( benchmark::kMillisecond );

void BM_SynthDnf( benchmark::State& state )
{
  auto const t = random_table( static_cast<unsigned>( state.range( 0 ) ), 1 );
  for ( auto _ : state )
    benchmark::DoNotOptimize( synth_dnf( t ).size() );
}
BENCHMARK( BM_SynthDnf )->DenseRange( 6, 12, 2 );

void BM_SynthLupanov( benchmark::State& state )
{
  auto const t = random_table( static_cast<unsigned>( state.range( 0 ) ), 2 );
  for ( auto _ : state )
    benchmark::DoNotOptimize( synth_lupanov( t ).size() );
}
BENCHMARK( BM_SynthLupanov )->DenseRange( 6, 14, 2 );

void BM_EvaluateAll( benchmark::State& state )
{
  auto const c = synth_lupanov( random_table( static_cast<unsigned>( state.range( 0 ) ), 3 ) );
  for ( auto _ : state )
    benchmark::DoNotOptimize( evaluate_all( c ).count_ones() );
}
BENCHMARK( BM_EvaluateAll )->DenseRange( 8, 14, 2 );

void BM_EncodeDecode( benchmark::State& state )
{
  auto const c = synth_lupanov( random_table( 10, 4 ) );
  for ( auto _ : state )
    benchmark::DoNotOptimize( decode( encode( c ) ).size() );
  state.SetItemsProcessed( state.iterations() * static_cast<std::int64_t>( c.size() ) );
}
BENCHMARK( BM_EncodeDecode );

void BM_CensusN3( benchmark::State& state )
{
  for ( auto _ : state )
    benchmark::DoNotOptimize( run_census( 3 ).distribution.mean );
}
BENCHMARK( BM_CensusN3 )->Unit( benchmark::kMillisecond );

} // namespace
BENCHMARK_MAIN();
