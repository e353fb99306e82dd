#include "circdesc/census.hpp"

#include "circdesc/cnf.hpp"
#include "circdesc/error.hpp"
#include "circdesc/synth.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace circdesc
{

StructureMetrics lut_likeness( Circuit const& circuit, LutWeights const& weights )
{
  StructureMetrics metrics;
  auto const gates = circuit.gates();
  auto const m = gates.size();
  for ( auto const& g : gates )
    ++metrics.histogram[static_cast<std::size_t>( g.op )];
  if ( m == 0u )
    return metrics;

  auto const fanout = fanout_counts( circuit );
  metrics.sharing_ratio =
      static_cast<double>( std::count_if( fanout.begin(), fanout.end(), []( auto f ) { return f > 1u; } ) ) /
      static_cast<double>( m );

  auto is_op = [&]( Ref r, GateOp op ) { return r.is_gate() && gates[r.index()].op == op; };
  auto is_literal = [&]( Ref r ) { return r.is_input() || ( is_op( r, GateOp::Not ) && gates[r.index()].in1.is_input() ); };

  std::vector<bool> structural( m, false );
  std::vector<Ref> leaves;
  auto spine = [&]( auto&& self, Ref r ) -> std::size_t {
    if ( !is_op( r, GateOp::Or ) )
    {
      leaves.push_back( r );
      return 0u;
    }
    structural[r.index()] = true;
    auto const& g = gates[r.index()];
    return 1u + std::max( self( self, g.in1 ), self( self, *g.in2 ) );
  };
  metrics.spine_depth = spine( spine, circuit.output() );

  /* marks the cone of an AND tree over literals; false if it is not one */
  auto detector = [&]( auto&& self, Ref r, std::vector<std::uint32_t>& cone ) -> bool {
    if ( is_literal( r ) )
    {
      if ( r.is_gate() )
        cone.push_back( r.index() );
      return true;
    }
    if ( !is_op( r, GateOp::And ) )
      return false;
    cone.push_back( r.index() );
    auto const& g = gates[r.index()];
    return self( self, g.in1, cone ) && self( self, *g.in2, cone );
  };
  std::set<Ref> seen;
  for ( auto leaf : leaves )
  {
    if ( !is_op( leaf, GateOp::And ) || !seen.insert( leaf ).second )
      continue;
    std::vector<std::uint32_t> cone;
    if ( detector( detector, leaf, cone ) )
    {
      ++metrics.detectors;
      for ( auto i : cone )
        structural[i] = true;
    }
  }
  metrics.coverage = static_cast<double>( std::count( structural.begin(), structural.end(), true ) ) / static_cast<double>( m );
  auto const total = weights.coverage + weights.tree;
  metrics.score = total > 0.0 ? ( weights.coverage * metrics.coverage + weights.tree * ( 1.0 - metrics.sharing_ratio ) ) / total : 0.0;
  return metrics;
}

SizeDistribution size_distribution( unsigned n, std::span<const CensusRecord> records )
{
  SizeDistribution dist;
  dist.n = n;
  dist.threshold = static_cast<double>( std::uint64_t{ 1 } << n ) / static_cast<double>( n );
  if ( records.empty() )
    return dist;
  double total = 0.0;
  std::uint64_t above = 0;
  for ( auto const& r : records )
  {
    ++dist.counts[r.minimal_size];
    total += static_cast<double>( r.minimal_size );
    dist.max = std::max( dist.max, r.minimal_size );
    if ( static_cast<double>( r.minimal_size ) >= dist.threshold )
      ++above;
    if ( !r.exact )
      ++dist.inexact;
  }
  dist.mean = total / static_cast<double>( records.size() );
  dist.fraction_at_least = static_cast<double>( above ) / static_cast<double>( records.size() );
  return dist;
}

Circuit transform_circuit( Circuit const& circuit, std::span<const unsigned> perm, bool dual )
{
  auto map_ref = [&]( Ref r ) {
    if ( r.is_input() )
      return Ref::input( perm[r.index()] );
    if ( r.is_constant() && dual )
      return Ref::constant( r.index() == 0u );
    return r;
  };
  std::vector<Gate> gates;
  for ( auto const& g : circuit.gates() )
  {
    auto op = g.op;
    if ( dual && op != GateOp::Not )
      op = op == GateOp::And ? GateOp::Or : GateOp::And;
    gates.push_back( { op, map_ref( g.in1 ), g.in2 ? std::optional<Ref>( map_ref( *g.in2 ) ) : std::nullopt } );
  }
  return Circuit( circuit.num_inputs(), std::move( gates ), map_ref( circuit.output() ) );
}

namespace
{

Ref append_circuit( CircuitBuilder& builder, Circuit const& circuit )
{
  std::vector<Ref> map;
  auto lookup = [&]( Ref r ) { return r.is_gate() ? map[r.index()] : r; };
  for ( auto const& g : circuit.gates() )
  {
    switch ( g.op )
    {
    case GateOp::And:
      map.push_back( builder.add_and( lookup( g.in1 ), lookup( *g.in2 ) ) );
      break;
    case GateOp::Or:
      map.push_back( builder.add_or( lookup( g.in1 ), lookup( *g.in2 ) ) );
      break;
    case GateOp::Not:
      map.push_back( builder.add_not( lookup( g.in1 ) ) );
      break;
    }
  }
  return lookup( circuit.output() );
}

/* cofactor of f (n-input word) with x_var fixed, as an n-input function independent of x_var */
std::uint64_t cofactor_word( unsigned n, std::uint64_t f, unsigned var, bool value )
{
  std::uint64_t out = 0;
  auto const bit = n - 1u - var;
  for ( std::uint64_t row = 0; row < ( std::uint64_t{ 1 } << n ); ++row )
  {
    auto const source = value ? ( row | ( std::uint64_t{ 1 } << bit ) ) : ( row & ~( std::uint64_t{ 1 } << bit ) );
    if ( ( f >> source ) & 1u )
      out |= std::uint64_t{ 1 } << row;
  }
  return out;
}

class UpperBounds
{
public:
  UpperBounds( unsigned n, Frontier const& frontier ) : n_( n ), frontier_( frontier ) {}

  Circuit best( std::uint64_t f ) const
  {
    auto const table = TruthTable::from_word( n_, f );
    auto best = synth_dnf( table );
    auto consider = [&]( Circuit c ) {
      if ( c.size() < best.size() )
        best = std::move( c );
    };
    consider( synth_lupanov( table ) );
    auto const mask = ( std::uint64_t{ 1 } << ( 1u << n_ ) ) - 1u;
    if ( frontier_.size_of( ~f & mask ) )
    {
      CircuitBuilder builder( n_, true );
      auto const out = builder.add_not( append_circuit( builder, frontier_.witness( ~f & mask ) ) );
      consider( remove_dangling( builder.build( out ) ) );
    }
    for ( unsigned var = 0; var < n_; ++var )
    {
      auto const f0 = cofactor_word( n_, f, var, false );
      auto const f1 = cofactor_word( n_, f, var, true );
      if ( !frontier_.size_of( f0 ) || !frontier_.size_of( f1 ) )
        continue;
      CircuitBuilder builder( n_, true );
      auto const c0 = append_circuit( builder, frontier_.witness( f0 ) );
      auto const c1 = append_circuit( builder, frontier_.witness( f1 ) );
      auto const x = Ref::input( var );
      auto const out = builder.add_or( builder.add_and( x, c1 ), builder.add_and( builder.literal( var + 1u, false ), c0 ) );
      consider( remove_dangling( builder.build( out ) ) );
    }
    return best;
  }

private:
  unsigned n_;
  Frontier const& frontier_;
};

void fill_derived( CensusRecord& record, unsigned n, LutWeights const& weights )
{
  record.encoded_bits = encoded_length( record.witness.size(), n );
  record.depth = depth( record.witness );
  record.metrics = lut_likeness( record.witness, weights );
}

} // namespace

CensusResult run_census( unsigned n, CensusOptions const& options )
{
  if ( n == 0u || n > 4u )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "census supports 1 <= n <= 4, got {}", n ) );
  }
  Frontier frontier( n, options.frontier );
  frontier.run();

  CensusResult result;
  result.n = n;
  result.frontier_complete_through = frontier.complete_through();
  result.frontier_budget_exhausted = frontier.budget_exhausted();
  auto const functions = frontier.num_functions();
  result.records.resize( functions );
  UpperBounds bounds( n, frontier );
  for ( std::uint64_t f = 0; f < functions; ++f )
  {
    auto& r = result.records[f];
    r.index = f;
    if ( auto const size = frontier.size_of( f ) )
    {
      r.minimal_size = r.lower_bound = *size;
      r.exact = true;
      r.witness = frontier.witness( f );
    }
    else
    {
      r.witness = bounds.best( f );
      r.minimal_size = r.witness.size();
      r.lower_bound = std::min( frontier.unreached_lower_bound(), r.minimal_size );
      r.exact = r.lower_bound == r.minimal_size;
    }
  }

  if ( !options.solver.empty() )
  {
    std::vector<std::vector<unsigned>> perms;
    std::vector<unsigned> perm( n );
    std::iota( perm.begin(), perm.end(), 0u );
    do
      perms.push_back( perm );
    while ( std::next_permutation( perm.begin(), perm.end() ) );

    std::vector<bool> settled( functions, false );
    auto const start = std::chrono::steady_clock::now();
    auto out_of_budget = [&] {
      return options.solver_budget > 0.0 &&
             std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count() >= options.solver_budget;
    };
    for ( std::uint64_t f = 0; f < functions; ++f )
    {
      auto& r = result.records[f];
      if ( r.exact || settled[f] )
        continue;
      auto const table = TruthTable::from_word( n, f );
      while ( r.lower_bound < r.minimal_size && !out_of_budget() )
      {
        auto const cnf = encode_desc_cnf( { table, r.lower_bound + 1u } );
        auto const answer = solve_cnf( cnf, options.solver, options.solver_time_limit );
        ++result.solver_calls;
        if ( answer.status == SolveStatus::unknown )
          break;
        if ( answer.status == SolveStatus::unsat )
        {
          ++r.lower_bound;
          continue;
        }
        r.witness = *answer.circuit;
        r.minimal_size = r.witness.size();
        break;
      }
      r.exact = r.lower_bound == r.minimal_size;

      for ( auto const& p : perms )
      {
        for ( bool dual : { false, true } )
        {
          auto image = transform_circuit( r.witness, p, dual );
          auto const g = evaluate_all( image ).word();
          auto& other = result.records[g];
          if ( g == f || other.exact || settled[g] )
            continue;
          settled[g] = true;
          other.lower_bound = std::max( other.lower_bound, r.lower_bound );
          if ( image.size() <= other.minimal_size )
          {
            other.witness = std::move( image );
            other.minimal_size = other.witness.size();
          }
          other.exact = other.lower_bound == other.minimal_size;
        }
      }
      settled[f] = true;
    }
  }

  for ( auto& r : result.records )
    fill_derived( r, n, options.weights );
  result.distribution = size_distribution( n, result.records );
  return result;
}

std::string artifact_header( std::string_view kind, std::uint64_t seed, unsigned n )
{
  if ( n == 0u )
    return fmt::format( "# circdesc format_version={} seed={} artifact={}\n", format_version, seed, kind );
  return fmt::format( "# circdesc format_version={} seed={} artifact={} n={}\n", format_version, seed, kind, n );
}

std::string census_csv( CensusResult const& census, std::uint64_t seed )
{
  auto out = artifact_header( "census", seed, census.n );
  out += "index,minimal_size,encoded_bits,depth,detectors,sharing_ratio,score,exact,lower_bound\n";
  for ( auto const& r : census.records )
  {
    out += fmt::format( "{},{},{},{},{},{:.6f},{:.6f},{},{}\n", r.index, r.minimal_size, r.encoded_bits, r.depth,
                        r.metrics.detectors, r.metrics.sharing_ratio, r.metrics.score, r.exact ? 1 : 0, r.lower_bound );
  }
  return out;
}

CompressorTable build_compressor_table( CensusResult const& census )
{
  if ( census.n == 0u || census.n > 3u )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "compressor tables support 1 <= n <= 3, got {}", census.n ) );
  }
  CompressorTable table;
  table.n = census.n;
  for ( auto const& r : census.records )
  {
    if ( !r.exact )
    {
      throw Error( ErrorCode::cap_exceeded, fmt::format( "function {} has no certified minimal circuit", r.index ) );
    }
    table.rows.push_back( { r.index, TruthTable::from_word( census.n, r.index ), encode( r.witness ) } );
  }
  std::sort( table.rows.begin(), table.rows.end(), []( auto const& a, auto const& b ) { return a.index < b.index; } );
  return table;
}

std::string compressor_csv( CompressorTable const& table, std::uint64_t seed )
{
  auto out = artifact_header( "compressor_table", seed, table.n );
  out += fmt::format( "# basis={}\n", table.basis );
  out += "index,table_bits,encoding_hex\n";
  for ( auto const& row : table.rows )
    out += fmt::format( "{},{},{}\n", row.index, row.table.to_string(), to_hex( row.encoding.bytes ) );
  return out;
}

namespace
{

constexpr std::array<std::uint8_t, 4> pack_magic{ 'C', 'D', 'T', '1' };

void put_u32( std::vector<std::uint8_t>& out, std::uint32_t v )
{
  for ( int shift = 24; shift >= 0; shift -= 8 )
    out.push_back( static_cast<std::uint8_t>( v >> shift ) );
}

void put_u16( std::vector<std::uint8_t>& out, std::uint16_t v )
{
  out.push_back( static_cast<std::uint8_t>( v >> 8u ) );
  out.push_back( static_cast<std::uint8_t>( v ) );
}

std::uint32_t get_u( std::span<const std::uint8_t> data, std::size_t at, std::size_t width )
{
  if ( at + width > data.size() )
    throw Error( ErrorCode::malformed_file, "compressor pack is truncated" );
  std::uint32_t v = 0;
  for ( std::size_t i = 0; i < width; ++i )
    v = ( v << 8u ) | data[at + i];
  return v;
}

} // namespace

std::vector<std::uint8_t> compressor_pack( CompressorTable const& table )
{
  std::vector<std::uint8_t> out( pack_magic.begin(), pack_magic.end() );
  put_u16( out, static_cast<std::uint16_t>( table.version ) );
  put_u16( out, static_cast<std::uint16_t>( table.n ) );
  put_u32( out, static_cast<std::uint32_t>( table.rows.size() ) );
  std::uint32_t offset = 0;
  for ( auto const& row : table.rows )
  {
    put_u32( out, static_cast<std::uint32_t>( row.index ) );
    put_u32( out, offset );
    put_u32( out, static_cast<std::uint32_t>( row.encoding.bit_length ) );
    offset += static_cast<std::uint32_t>( row.encoding.bytes.size() );
  }
  for ( auto const& row : table.rows )
    out.insert( out.end(), row.encoding.bytes.begin(), row.encoding.bytes.end() );
  return out;
}

CompressorTable parse_compressor_pack( std::span<const std::uint8_t> data )
{
  if ( data.size() < 12u || !std::equal( pack_magic.begin(), pack_magic.end(), data.begin() ) )
  {
    throw Error( ErrorCode::malformed_file, "not a compressor pack" );
  }
  CompressorTable table;
  table.version = get_u( data, 4u, 2u );
  table.n = get_u( data, 6u, 2u );
  if ( table.n == 0u || table.n > 6u )
    throw Error( ErrorCode::malformed_file, fmt::format( "compressor pack has arity {}", table.n ) );
  auto const count = get_u( data, 8u, 4u );
  auto const body = 12u + std::size_t{ count } * 12u;
  if ( body > data.size() )
    throw Error( ErrorCode::malformed_file, "compressor pack index is truncated" );
  for ( std::uint32_t i = 0; i < count; ++i )
  {
    auto const at = 12u + std::size_t{ i } * 12u;
    auto const index = get_u( data, at, 4u );
    auto const offset = get_u( data, at + 4u, 4u );
    auto const bits = get_u( data, at + 8u, 4u );
    auto const bytes = ( std::size_t{ bits } + 7u ) / 8u;
    if ( body + offset + bytes > data.size() )
      throw Error( ErrorCode::malformed_file, "compressor pack entry is truncated" );
    auto encoding = encoded_from_bytes( data.subspan( body + offset, bytes ) );
    if ( encoding.bit_length != bits )
      throw Error( ErrorCode::malformed_file, fmt::format( "entry {} length disagrees with its header", index ) );
    table.rows.push_back( { index, TruthTable::from_word( table.n, index ), std::move( encoding ) } );
  }
  return table;
}

std::uint64_t fnv1a64( std::string_view data )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( auto c : data )
  {
    h ^= static_cast<std::uint8_t>( c );
    h *= 0x100000001b3ull;
  }
  return h;
}

ShannonReport shannon_report( CensusResult const& census )
{
  ShannonReport report;
  report.n = census.n;
  report.distribution = census.distribution;
  auto const& d = report.distribution;
  auto& text = report.text;
  text += fmt::format( "# circdesc format_version={} artifact=shannon_report n={}\n", format_version, census.n );
  text += fmt::format( "functions={}\n", census.records.size() );
  text += fmt::format( "inexact={}\n", d.inexact );
  text += fmt::format( "mean_size={:.6f}\n", d.mean );
  text += fmt::format( "max_size={}\n", d.max );
  text += fmt::format( "threshold_2^n/n={:.6f}\n", d.threshold );
  text += fmt::format( "fraction_size_at_least_threshold={:.6f}\n", d.fraction_at_least );
  for ( auto const& [size, count] : d.counts )
    text += fmt::format( "size_count {} {}\n", size, count );

  if ( census.n <= 3u )
  {
    std::vector<AuditRecord> records;
    for ( auto const& r : census.records )
      records.push_back( { r.index, encode( r.witness ) } );
    report.audit = entropy_audit( census.n, records );
    auto const& a = *report.audit;
    text += fmt::format( "entropy_mean_length={:.6f}\n", a.mean_length );
    text += fmt::format( "entropy_bound_2^n={:.6f}\n", a.entropy );
    text += fmt::format( "entropy_bound_holds={}\n", a.bound_holds ? 1 : 0 );
    text += fmt::format( "kraft_sum={:.12f}\n", a.kraft_sum );
    text += fmt::format( "kraft_holds={}\n", a.kraft_holds ? 1 : 0 );
    text += fmt::format( "prefix_free={}\n", a.prefix_free ? 1 : 0 );
    text += fmt::format( "lossless={}\n", a.lossless ? 1 : 0 );
  }
  for ( auto const& [size, count] : d.counts )
  {
    if ( size == 0u )
      continue;
    report.ratios.push_back( compression_ratio( size, census.n ) );
    auto const& r = report.ratios.back();
    text += fmt::format( "ratio s={} description_bits={} data_bits={:.0f} ratio={:.6f}\n", r.s, r.description_bits, r.data_bits,
                         r.ratio );
  }
  text += fmt::format( "idealized_ratio={:.6f}\n", idealized_ratio( census.n ) );
  report.digest = fnv1a64( text );
  return report;
}

} // namespace circdesc
