#include "circdesc/frontier.hpp"

#include "circdesc/error.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include <fmt/format.h>

namespace circdesc
{

namespace
{

using Table = std::uint16_t;

/* Flat storage of fixed-width sorted states with open-addressing dedup. */
class StateStore
{
public:
  explicit StateStore( std::size_t width ) : width_( width ), slots_( 1u << 10u, 0u ) {}

  std::size_t size() const noexcept { return count_; }
  std::size_t width() const noexcept { return width_; }

  Table const* state( std::size_t index ) const noexcept { return data_.data() + index * width_; }

  /* returns false if the state was already present */
  bool insert( Table const* state )
  {
    if ( ( count_ + 1u ) * 2u > slots_.size() )
      grow();
    auto const mask = slots_.size() - 1u;
    for ( auto pos = hash( state ) & mask;; pos = ( pos + 1u ) & mask )
    {
      auto const slot = slots_[pos];
      if ( slot == 0u )
      {
        data_.insert( data_.end(), state, state + width_ );
        slots_[pos] = static_cast<std::uint32_t>( ++count_ );
        return true;
      }
      if ( std::equal( state, state + width_, this->state( slot - 1u ) ) )
        return false;
    }
  }

  void release()
  {
    std::vector<Table>().swap( data_ );
    std::vector<std::uint32_t>().swap( slots_ );
    count_ = 0;
  }

private:
  std::size_t hash( Table const* state ) const noexcept
  {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for ( std::size_t i = 0; i < width_; ++i )
    {
      h ^= state[i];
      h *= 0xff51afd7ed558ccdull;
      h ^= h >> 32u;
    }
    return static_cast<std::size_t>( h );
  }

  void grow()
  {
    std::vector<std::uint32_t> slots( slots_.size() * 2u, 0u );
    auto const mask = slots.size() - 1u;
    for ( std::size_t i = 0; i < count_; ++i )
    {
      auto pos = hash( state( i ) ) & mask;
      while ( slots[pos] != 0u )
        pos = ( pos + 1u ) & mask;
      slots[pos] = static_cast<std::uint32_t>( i + 1u );
    }
    slots_.swap( slots );
  }

  std::size_t width_;
  std::vector<Table> data_;
  std::vector<std::uint32_t> slots_;
  std::size_t count_ = 0;
};

std::vector<Table> input_tables( unsigned n )
{
  std::vector<Table> inputs( n, 0u );
  auto const rows = 1u << n;
  for ( unsigned j = 0; j < n; ++j )
  {
    for ( unsigned row = 0; row < rows; ++row )
    {
      if ( ( row >> ( n - 1u - j ) ) & 1u )
        inputs[j] = static_cast<Table>( inputs[j] | ( 1u << row ) );
    }
  }
  return inputs;
}

} // namespace

Frontier::Frontier( unsigned n, FrontierOptions options )
    : n_( n ), options_( options )
{
  if ( n == 0u || n > 4u )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "exhaustive minimization supports 1 <= n <= 4, got {}", n ) );
  }
  auto const rows = 1u << n;
  mask_ = rows == 16u ? 0xffffu : ( 1u << rows ) - 1u;
  inputs_ = input_tables( n );

  std::vector<unsigned> perm( n );
  std::iota( perm.begin(), perm.end(), 0u );
  auto const functions = static_cast<std::size_t>( mask_ ) + 1u;
  std::vector<Table> staged;
  std::vector<Table> images;
  staged.resize( functions * 48u );
  do
  {
    std::vector<unsigned> row_map( rows );
    for ( unsigned row = 0; row < rows; ++row )
    {
      unsigned image = 0;
      for ( unsigned j = 0; j < n; ++j )
      {
        if ( ( row >> ( n - 1u - perm[j] ) ) & 1u )
          image |= 1u << ( n - 1u - j );
      }
      row_map[row] = image;
    }
    for ( bool dual : { false, true } )
    {
      if ( !options_.symmetry && ( dual || !std::is_sorted( perm.begin(), perm.end() ) ) )
        continue;
      images.resize( images.size() + functions );
      auto const g = group_dual_.size();
      for ( std::size_t t = 0; t < functions; ++t )
      {
        unsigned image = 0;
        for ( unsigned row = 0; row < rows; ++row )
        {
          auto const source = dual ? ( rows - 1u - row_map[row] ) : row_map[row];
          bool bit = ( t >> source ) & 1u;
          if ( dual )
            bit = !bit;
          if ( bit )
            image |= 1u << row;
        }
        staged[g * functions + t] = static_cast<Table>( image );
      }
      group_dual_.push_back( dual );
    }
  } while ( std::next_permutation( perm.begin(), perm.end() ) );

  group_size_ = group_dual_.size();
  images_.resize( functions * group_size_ );
  for ( std::size_t g = 0; g < group_size_; ++g )
  {
    for ( std::size_t t = 0; t < functions; ++t )
      images_[t * group_size_ + g] = staged[g * functions + t];
  }
  stamp_.assign( functions, 0u );

  size_.assign( functions, 0xffu );
  parent_.resize( functions );
}

void Frontier::canonicalize( std::vector<Table>& state ) const
{
  std::sort( state.begin(), state.end() );
  if ( !options_.symmetry )
    return;
  auto const G = group_size_;
  std::array<Table, 48> lowest;
  lowest.fill( 0xffffu );
  for ( auto t : state )
  {
    auto const* img = images_.data() + std::size_t{ t } * G;
    for ( std::size_t g = 0; g < G; ++g )
      lowest[g] = std::min( lowest[g], img[g] );
  }
  Table const floor = *std::min_element( lowest.begin(), lowest.begin() + static_cast<std::ptrdiff_t>( G ) );
  std::vector<Table> best;
  std::vector<Table> image( state.size() );
  for ( std::size_t g = 0; g < G; ++g )
  {
    if ( lowest[g] != floor )
      continue;
    for ( std::size_t i = 0; i < state.size(); ++i )
      image[i] = images_[std::size_t{ state[i] } * G + g];
    std::sort( image.begin(), image.end() );
    if ( best.empty() || image < best )
      best = image;
  }
  state.swap( best );
}

void Frontier::record( std::vector<Table> const& parent, Table table, std::size_t level )
{
  auto const G = group_size_;
  for ( std::size_t g = 0; g < G; ++g )
  {
    auto const image = images_[std::size_t{ table } * G + g];
    if ( size_[image] != 0xffu )
      continue;
    size_[image] = static_cast<std::uint8_t>( level );
    auto& p = parent_[image];
    p.resize( parent.size() );
    for ( std::size_t i = 0; i < parent.size(); ++i )
      p[i] = images_[std::size_t{ parent[i] } * G + g];
    std::sort( p.begin(), p.end() );
    ++reached_count_;
  }
}

void Frontier::run( std::optional<std::uint64_t> target )
{
  if ( target )
    run( std::span<const std::uint64_t>( &*target, 1u ) );
  else
    run( std::span<const std::uint64_t>() );
}

void Frontier::run( std::span<const std::uint64_t> targets )
{
  for ( auto t : targets )
  {
    if ( t > mask_ )
      throw Error( ErrorCode::invalid_argument, fmt::format( "function {} out of range for n={}", t, n_ ) );
  }
  if ( ran_ )
    return;
  ran_ = true;

  std::vector<Table> const empty;
  record( empty, 0u, 0u );
  record( empty, static_cast<Table>( mask_ ), 0u );
  for ( auto x : inputs_ )
    record( empty, x, 0u );
  complete_through_ = 0;

  auto done = [&] {
    return reached_count_ == num_functions() ||
           ( !targets.empty() && std::all_of( targets.begin(), targets.end(), [&]( auto t ) { return size_[t] != 0xffu; } ) );
  };

  StateStore current( 0u );
  current.insert( nullptr );
  level_sizes_.push_back( 1u );
  std::size_t previous_size = 1u;

  std::vector<Table> wires;
  std::vector<Table> child;
  std::vector<Table> parent;

  /* calls visit(state, wires, g) for every new gate function g over the state's wires */
  auto expand = [&]( Table const* state, std::size_t s, auto&& visit ) {
    wires.assign( inputs_.begin(), inputs_.end() );
    wires.insert( wires.end(), state, state + s );
    ++epoch_;
    for ( auto w : wires )
      stamp_[w] = epoch_;
    auto consider = [&]( Table g ) {
      if ( g == 0u || g == mask_ || stamp_[g] == epoch_ )
        return;
      stamp_[g] = epoch_;
      visit( g );
    };
    auto const w = wires.size();
    for ( std::size_t i = 0; i < w; ++i )
    {
      for ( std::size_t j = i + 1u; j < w; ++j )
      {
        consider( static_cast<Table>( wires[i] & wires[j] ) );
        consider( static_cast<Table>( wires[i] | wires[j] ) );
      }
      consider( static_cast<Table>( ~wires[i] & mask_ ) );
    }
  };

  for ( std::size_t s = 0; s < options_.cap && !done(); ++s )
  {
    auto const growth = std::max<std::size_t>( 1u, ( current.size() + previous_size - 1u ) / previous_size );
    bool store = s + 1u < options_.cap && current.size() * growth <= options_.max_states;

    if ( store )
    {
      StateStore next( s + 1u );
      for ( std::size_t index = 0; index < current.size() && !done() && store; ++index )
      {
        auto const* state = current.state( index );
        expand( state, s, [&]( Table g ) {
          if ( size_[g] == 0xffu )
          {
            parent.assign( state, state + s );
            record( parent, g, s + 1u );
          }
          if ( !store )
            return;
          child.assign( state, state + s );
          child.push_back( g );
          canonicalize( child );
          if ( next.size() >= options_.max_states )
          {
            store = false;
            return;
          }
          next.insert( child.data() );
        } );
      }
      if ( store )
      {
        if ( !done() )
          complete_through_ = s + 1u;
        level_sizes_.push_back( next.size() );
        previous_size = current.size();
        current.release();
        current = std::move( next );
        continue;
      }
      budget_exhausted_ = true;
    }
    else if ( s + 1u < options_.cap )
    {
      budget_exhausted_ = true;
    }

    /* The next level does not fit: enumerate its members on the fly. Every
     * (s+1)-set extends a stored s-set by one gate g, and gates of an
     * (s+2)-circuit not reading g were already found at level s+1. */
    for ( std::size_t index = 0; index < current.size() && !done(); ++index )
    {
      auto const* state = current.state( index );
      expand( state, s, [&]( Table g ) {
        if ( size_[g] == 0xffu )
        {
          parent.assign( state, state + s );
          record( parent, g, s + 1u );
        }
      } );
    }
    bool const look_ahead = s + 2u <= options_.cap;
    for ( std::size_t index = 0; look_ahead && index < current.size() && !done(); ++index )
    {
      auto const* state = current.state( index );
      expand( state, s, [&]( Table g ) {
        auto try_gate = [&]( Table h ) {
          if ( size_[h] != 0xffu )
            return;
          parent.assign( state, state + s );
          parent.push_back( g );
          record( parent, h, s + 2u );
        };
        for ( std::size_t i = 0; i < n_ + s; ++i )
        {
          auto const w = wires[i];
          try_gate( static_cast<Table>( g & w ) );
          try_gate( static_cast<Table>( g | w ) );
        }
        try_gate( static_cast<Table>( ~g & mask_ ) );
      } );
    }
    if ( !done() )
      complete_through_ = look_ahead ? s + 2u : s + 1u;
    break;
  }
  if ( reached_count_ == num_functions() )
  {
    complete_through_ = options_.cap;
    for ( auto s : size_ )
      complete_through_ = std::max<std::size_t>( complete_through_, s );
  }
}

std::optional<std::size_t> Frontier::size_of( std::uint64_t function ) const
{
  if ( function > mask_ || size_[function] == 0xffu )
    return std::nullopt;
  return size_[function];
}

Circuit Frontier::witness( std::uint64_t function ) const
{
  auto const size = size_of( function );
  if ( !size )
  {
    throw Error( ErrorCode::cap_exceeded, fmt::format( "function {} was not reached by the search", function ) );
  }
  return circuit_from_function_set( n_, parent_[function], static_cast<Table>( function ) );
}

Circuit circuit_from_function_set( unsigned n, std::vector<std::uint16_t> const& members, std::uint16_t target )
{
  auto const rows = 1u << n;
  auto const mask = rows == 16u ? 0xffffu : ( 1u << rows ) - 1u;
  auto const inputs = input_tables( n );

  if ( target == 0u || target == mask )
    return Circuit( n, {}, Ref::constant( target != 0u ) );
  for ( unsigned j = 0; j < n; ++j )
  {
    if ( inputs[j] == target )
      return Circuit( n, {}, Ref::input( j ) );
  }

  CircuitBuilder builder( n );
  std::vector<std::pair<Table, Ref>> placed;
  for ( unsigned j = 0; j < n; ++j )
    placed.emplace_back( inputs[j], Ref::input( j ) );

  auto place = [&]( Table t ) -> std::optional<Ref> {
    for ( auto op : { GateOp::And, GateOp::Or } )
    {
      for ( std::size_t i = 0; i < placed.size(); ++i )
      {
        for ( std::size_t j = i + 1u; j < placed.size(); ++j )
        {
          auto const v = op == GateOp::And ? ( placed[i].first & placed[j].first ) : ( placed[i].first | placed[j].first );
          if ( v == t )
            return op == GateOp::And ? builder.add_and( placed[i].second, placed[j].second )
                                     : builder.add_or( placed[i].second, placed[j].second );
        }
      }
    }
    for ( auto const& [table, ref] : placed )
    {
      if ( ( ~table & mask ) == t )
        return builder.add_not( ref );
    }
    return std::nullopt;
  };

  std::vector<Table> remaining( members.begin(), members.end() );
  std::sort( remaining.begin(), remaining.end() );
  while ( !remaining.empty() )
  {
    bool progress = false;
    for ( auto it = remaining.begin(); it != remaining.end(); ++it )
    {
      if ( auto r = place( *it ) )
      {
        placed.emplace_back( *it, *r );
        remaining.erase( it );
        progress = true;
        break;
      }
    }
    if ( !progress )
    {
      throw Error( ErrorCode::invalid_argument, "function set is not realizable by a circuit" );
    }
  }
  auto const out = place( target );
  if ( !out )
  {
    throw Error( ErrorCode::invalid_argument, "target is not one gate away from the function set" );
  }
  return remove_dangling( builder.build( *out ) );
}

} // namespace circdesc
