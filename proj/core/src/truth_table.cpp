#include "circdesc/truth_table.hpp"

#include "circdesc/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>

#include <fmt/format.h>

namespace circdesc
{

namespace
{

std::size_t word_count( unsigned n )
{
  return n <= 6u ? 1u : std::size_t{ 1 } << ( n - 6u );
}

std::uint64_t low_mask( unsigned n )
{
  return n >= 6u ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << ( 1u << n ) ) - 1u;
}

std::string_view trim( std::string_view s )
{
  while ( !s.empty() && ( s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ) )
    s.remove_prefix( 1 );
  while ( !s.empty() && ( s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ) )
    s.remove_suffix( 1 );
  return s;
}

} // namespace

TruthTable::TruthTable( unsigned n )
    : n_( n )
{
  if ( n > max_arity )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "truth table arity {} exceeds {}", n, max_arity ) );
  }
  words_.assign( word_count( n ), 0u );
}

TruthTable TruthTable::from_string( std::string_view bits )
{
  if ( bits.size() < 2u || !std::has_single_bit( bits.size() ) )
  {
    throw Error( ErrorCode::malformed_file,
                 fmt::format( "truth table length {} is not a power of two >= 2", bits.size() ) );
  }
  auto const n = static_cast<unsigned>( std::countr_zero( bits.size() ) );
  TruthTable table( n );
  for ( std::size_t i = 0; i < bits.size(); ++i )
  {
    if ( bits[i] != '0' && bits[i] != '1' )
    {
      throw Error( ErrorCode::malformed_file, fmt::format( "invalid truth table character '{}'", bits[i] ) );
    }
    table.set( i, bits[i] == '1' );
  }
  return table;
}

TruthTable TruthTable::from_word( unsigned n, std::uint64_t word )
{
  if ( n > 6u )
  {
    throw Error( ErrorCode::arity_over_cap, "from_word requires n <= 6" );
  }
  TruthTable table( n );
  table.words_[0] = word & low_mask( n );
  return table;
}

TruthTable TruthTable::projection( unsigned n, unsigned var )
{
  if ( var == 0u || var > n )
  {
    throw Error( ErrorCode::invalid_argument, fmt::format( "variable x{} out of range for n={}", var, n ) );
  }
  TruthTable table( n );
  auto const shift = n - var;
  for ( std::uint64_t row = 0; row < table.num_rows(); ++row )
  {
    table.set( row, ( row >> shift ) & 1u );
  }
  return table;
}

void TruthTable::set( std::uint64_t row, bool value ) noexcept
{
  auto& w = words_[row >> 6u];
  auto const bit = std::uint64_t{ 1 } << ( row & 63u );
  w = value ? ( w | bit ) : ( w & ~bit );
}

std::uint64_t TruthTable::count_ones() const noexcept
{
  std::uint64_t total = 0;
  for ( auto w : words_ )
    total += static_cast<std::uint64_t>( std::popcount( w ) );
  return total;
}

bool TruthTable::is_const0() const noexcept
{
  return std::all_of( words_.begin(), words_.end(), []( auto w ) { return w == 0u; } );
}

bool TruthTable::is_const1() const noexcept
{
  auto const mask = low_mask( n_ );
  return std::all_of( words_.begin(), words_.end(), [mask]( auto w ) { return w == mask; } );
}

std::uint64_t TruthTable::word() const
{
  if ( n_ > 6u )
  {
    throw Error( ErrorCode::arity_over_cap, "word() requires n <= 6" );
  }
  return words_[0];
}

TruthTable TruthTable::cofactor( unsigned width, std::uint64_t pattern ) const
{
  if ( width > n_ )
  {
    throw Error( ErrorCode::invalid_argument, "cofactor width exceeds arity" );
  }
  auto const rest = n_ - width;
  TruthTable result( rest );
  auto const first = pattern << rest;
  if ( rest >= 6u )
  {
    auto const begin = words_.begin() + static_cast<std::ptrdiff_t>( first >> 6u );
    std::copy( begin, begin + static_cast<std::ptrdiff_t>( result.words_.size() ), result.words_.begin() );
  }
  else
  {
    result.words_[0] = ( words_[first >> 6u] >> ( first & 63u ) ) & low_mask( rest );
  }
  return result;
}

std::string TruthTable::to_string() const
{
  std::string s( num_rows(), '0' );
  for ( std::uint64_t row = 0; row < num_rows(); ++row )
  {
    if ( get( row ) )
      s[row] = '1';
  }
  return s;
}

std::string format_truth_table( TruthTable const& table )
{
  return fmt::format( "n={}\n{}\n", table.arity(), table.to_string() );
}

TruthTable parse_truth_table( std::string_view text )
{
  std::vector<std::string_view> lines;
  while ( !text.empty() )
  {
    auto const pos = text.find( '\n' );
    auto line = trim( text.substr( 0, pos ) );
    if ( !line.empty() && line.front() != '#' )
      lines.push_back( line );
    if ( pos == std::string_view::npos )
      break;
    text.remove_prefix( pos + 1 );
  }
  if ( lines.size() != 2u || !lines[0].starts_with( "n=" ) )
  {
    throw Error( ErrorCode::malformed_file, "truth table file must hold `n=<k>` and one row string" );
  }
  unsigned n = 0;
  auto const digits = lines[0].substr( 2 );
  auto const [ptr, ec] = std::from_chars( digits.data(), digits.data() + digits.size(), n );
  if ( ec != std::errc{} || ptr != digits.data() + digits.size() || n == 0u || n > TruthTable::max_arity )
  {
    throw Error( ErrorCode::malformed_file, fmt::format( "bad arity line '{}'", lines[0] ) );
  }
  auto table = TruthTable::from_string( lines[1] );
  if ( table.arity() != n )
  {
    throw Error( ErrorCode::malformed_file,
                 fmt::format( "row string has {} characters, expected {}", lines[1].size(), std::uint64_t{ 1 } << n ) );
  }
  return table;
}

} // namespace circdesc
