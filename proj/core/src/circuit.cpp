#include "circdesc/circuit.hpp"

#include "circdesc/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <memory>
#include <sstream>

#include <fmt/format.h>

namespace circdesc
{

std::string_view to_string( GateOp op )
{
  switch ( op )
  {
  case GateOp::And: return "AND";
  case GateOp::Or: return "OR";
  case GateOp::Not: return "NOT";
  }
  return "?";
}

std::string format_ref( Ref ref )
{
  switch ( ref.kind() )
  {
  case Ref::Kind::Constant: return ref.index() ? "1" : "0";
  case Ref::Kind::Input: return fmt::format( "x{}", ref.index() + 1u );
  case Ref::Kind::Gate: return fmt::format( "g{}", ref.index() );
  }
  return "?";
}

Circuit::Circuit( unsigned num_inputs, std::vector<Gate> gates, Ref output )
    : n_( num_inputs ), gates_( std::move( gates ) ), output_( output )
{
}

/* validation */

namespace
{

void check_operand( Ref r, std::size_t position, unsigned n, std::string const& node, std::vector<Violation>& out )
{
  switch ( r.kind() )
  {
  case Ref::Kind::Constant:
    if ( r.index() > 1u )
      out.push_back( { Violation::Kind::BadConstant, node, fmt::format( "constant index {} is not 0 or 1", r.index() ) } );
    break;
  case Ref::Kind::Input:
    if ( r.index() >= n )
      out.push_back( { Violation::Kind::InputOutOfRange, node,
                       fmt::format( "references x{} but the circuit has {} inputs", r.index() + 1u, n ) } );
    break;
  case Ref::Kind::Gate:
    if ( r.index() >= position )
      out.push_back( { Violation::Kind::ForwardReference, node,
                       fmt::format( "references g{} which is not an earlier gate", r.index() ) } );
    break;
  }
}

} // namespace

std::vector<Violation> validate( Circuit const& circuit )
{
  std::vector<Violation> out;
  auto const n = circuit.num_inputs();
  auto const gates = circuit.gates();
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    auto const node = fmt::format( "g{}", i );
    auto const& g = gates[i];
    auto const expected = BasisSpec::arity( g.op );
    auto const actual = g.in2 ? 2u : 1u;
    if ( expected != actual )
    {
      out.push_back( { Violation::Kind::Arity, node,
                       fmt::format( "{} takes {} input(s) but has {}", to_string( g.op ), expected, actual ) } );
    }
    check_operand( g.in1, i, n, node, out );
    if ( g.in2 )
      check_operand( *g.in2, i, n, node, out );
  }
  check_operand( circuit.output(), gates.size(), n, "out", out );
  return out;
}

void require_valid( Circuit const& circuit )
{
  auto const violations = validate( circuit );
  if ( !violations.empty() )
  {
    throw Error( ErrorCode::invalid_circuit,
                 fmt::format( "{}: {}", violations.front().node, violations.front().message ) );
  }
}

/* evaluation */

bool evaluate_row( Circuit const& circuit, std::span<const bool> assignment )
{
  if ( assignment.size() != circuit.num_inputs() )
  {
    throw Error( ErrorCode::arity_mismatch, fmt::format( "assignment has {} bits, circuit has {} inputs",
                                                         assignment.size(), circuit.num_inputs() ) );
  }
  require_valid( circuit );
  std::vector<bool> values( circuit.size() );
  auto value_of = [&]( Ref r ) -> bool {
    switch ( r.kind() )
    {
    case Ref::Kind::Constant: return r.index() != 0u;
    case Ref::Kind::Input: return assignment[r.index()];
    case Ref::Kind::Gate: return values[r.index()];
    }
    return false;
  };
  auto const gates = circuit.gates();
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    auto const& g = gates[i];
    switch ( g.op )
    {
    case GateOp::And: values[i] = value_of( g.in1 ) && value_of( *g.in2 ); break;
    case GateOp::Or: values[i] = value_of( g.in1 ) || value_of( *g.in2 ); break;
    case GateOp::Not: values[i] = !value_of( g.in1 ); break;
    }
  }
  return value_of( circuit.output() );
}

bool evaluate_row( Circuit const& circuit, std::uint64_t row )
{
  auto const n = circuit.num_inputs();
  if ( n < 64u && ( row >> n ) != 0u )
  {
    throw Error( ErrorCode::arity_mismatch, fmt::format( "row {} out of range for n={}", row, n ) );
  }
  auto const bits = std::make_unique<bool[]>( n );
  for ( unsigned j = 0; j < n; ++j )
    bits[j] = ( row >> ( n - 1u - j ) ) & 1u;
  return evaluate_row( circuit, std::span<const bool>( bits.get(), n ) );
}

TruthTable evaluate_all( Circuit const& circuit, unsigned arity_cap )
{
  auto const n = circuit.num_inputs();
  if ( n > arity_cap || n > TruthTable::max_arity )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "circuit arity {} exceeds evaluation cap {}", n, arity_cap ) );
  }
  require_valid( circuit );

  static constexpr std::uint64_t low_patterns[6] = {
      0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
      0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };

  TruthTable table( n );
  auto const total_words = table.words().size();
  std::size_t const chunk = std::min<std::size_t>( total_words, 64u );
  auto const gates = circuit.gates();
  std::vector<std::uint64_t> values( gates.size() * chunk );
  std::vector<std::uint64_t> inputs( std::size_t{ n } * chunk );
  std::vector<std::uint64_t> result( total_words );

  for ( std::size_t base = 0; base < total_words; base += chunk )
  {
    for ( unsigned j = 0; j < n; ++j )
    {
      auto const shift = n - 1u - j;
      for ( std::size_t w = 0; w < chunk; ++w )
      {
        std::uint64_t word = 0;
        if ( shift < 6u )
          word = low_patterns[shift];
        else if ( ( ( ( base + w ) << 6u ) >> shift ) & 1u )
          word = ~std::uint64_t{ 0 };
        inputs[j * chunk + w] = word;
      }
    }
    auto word_of = [&]( Ref r, std::size_t w ) -> std::uint64_t {
      switch ( r.kind() )
      {
      case Ref::Kind::Constant: return r.index() ? ~std::uint64_t{ 0 } : 0u;
      case Ref::Kind::Input: return inputs[r.index() * chunk + w];
      case Ref::Kind::Gate: return values[r.index() * chunk + w];
      }
      return 0u;
    };
    for ( std::size_t i = 0; i < gates.size(); ++i )
    {
      auto const& g = gates[i];
      for ( std::size_t w = 0; w < chunk; ++w )
      {
        std::uint64_t v = 0;
        switch ( g.op )
        {
        case GateOp::And: v = word_of( g.in1, w ) & word_of( *g.in2, w ); break;
        case GateOp::Or: v = word_of( g.in1, w ) | word_of( *g.in2, w ); break;
        case GateOp::Not: v = ~word_of( g.in1, w ); break;
        }
        values[i * chunk + w] = v;
      }
    }
    for ( std::size_t w = 0; w < chunk; ++w )
      result[base + w] = word_of( circuit.output(), w );
  }

  for ( std::uint64_t row = 0; row < table.num_rows(); ++row )
  {
    if ( ( result[row >> 6u] >> ( row & 63u ) ) & 1u )
      table.set( row, true );
  }
  return table;
}

std::size_t depth( Circuit const& circuit )
{
  require_valid( circuit );
  auto const gates = circuit.gates();
  std::vector<std::size_t> level( gates.size(), 0u );
  auto level_of = [&]( Ref r ) -> std::size_t { return r.is_gate() ? level[r.index()] : 0u; };
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    auto l = level_of( gates[i].in1 );
    if ( gates[i].in2 )
      l = std::max( l, level_of( *gates[i].in2 ) );
    level[i] = l + 1u;
  }
  return level_of( circuit.output() );
}

std::vector<std::uint32_t> fanout_counts( Circuit const& circuit )
{
  std::vector<std::uint32_t> counts( circuit.size(), 0u );
  for ( auto const& g : circuit.gates() )
  {
    if ( g.in1.is_gate() )
      ++counts[g.in1.index()];
    if ( g.in2 && g.in2->is_gate() )
      ++counts[g.in2->index()];
  }
  if ( circuit.output().is_gate() )
    ++counts[circuit.output().index()];
  return counts;
}

Circuit remove_dangling( Circuit const& circuit )
{
  require_valid( circuit );
  auto const gates = circuit.gates();
  std::vector<bool> live( gates.size(), false );
  if ( circuit.output().is_gate() )
    live[circuit.output().index()] = true;
  for ( auto i = gates.size(); i-- > 0; )
  {
    if ( !live[i] )
      continue;
    if ( gates[i].in1.is_gate() )
      live[gates[i].in1.index()] = true;
    if ( gates[i].in2 && gates[i].in2->is_gate() )
      live[gates[i].in2->index()] = true;
  }
  std::vector<std::uint32_t> renumber( gates.size(), 0u );
  std::vector<Gate> kept;
  auto remap = [&]( Ref r ) { return r.is_gate() ? Ref::gate( renumber[r.index()] ) : r; };
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    if ( !live[i] )
      continue;
    renumber[i] = static_cast<std::uint32_t>( kept.size() );
    Gate g = gates[i];
    g.in1 = remap( g.in1 );
    if ( g.in2 )
      g.in2 = remap( *g.in2 );
    kept.push_back( g );
  }
  return Circuit( circuit.num_inputs(), std::move( kept ), remap( circuit.output() ) );
}

/* builder */

CircuitBuilder::CircuitBuilder( unsigned num_inputs, bool structural_hashing )
    : n_( num_inputs ), strash_( structural_hashing ), negations_( num_inputs )
{
}

void CircuitBuilder::check_ref( Ref r ) const
{
  if ( ( r.is_input() && r.index() >= n_ ) || ( r.is_gate() && r.index() >= gates_.size() ) ||
       ( r.is_constant() && r.index() > 1u ) )
  {
    throw Error( ErrorCode::invalid_argument, fmt::format( "builder operand {} does not exist", format_ref( r ) ) );
  }
}

Ref CircuitBuilder::add( GateOp op, Ref a, std::optional<Ref> b )
{
  check_ref( a );
  if ( b )
  {
    check_ref( *b );
    if ( *b < a )
      std::swap( a, *b );
  }
  std::uint64_t key = 0;
  if ( strash_ )
  {
    auto pack = []( Ref r ) { return ( std::uint64_t{ static_cast<std::uint8_t>( r.kind() ) } << 28u ) | r.index(); };
    key = ( std::uint64_t{ static_cast<std::uint8_t>( op ) } << 60u ) | ( pack( a ) << 30u ) | ( b ? pack( *b ) : 0u );
    if ( auto it = hash_.find( key ); it != hash_.end() )
      return it->second;
  }
  auto const r = Ref::gate( static_cast<std::uint32_t>( gates_.size() ) );
  gates_.push_back( Gate{ op, a, b } );
  if ( strash_ )
    hash_.emplace( key, r );
  return r;
}

Ref CircuitBuilder::add_and( Ref a, Ref b ) { return add( GateOp::And, a, b ); }
Ref CircuitBuilder::add_or( Ref a, Ref b ) { return add( GateOp::Or, a, b ); }

Ref CircuitBuilder::add_not( Ref a )
{
  if ( a.is_input() && a.index() < n_ )
  {
    auto& cached = negations_[a.index()];
    if ( !cached )
      cached = add( GateOp::Not, a, std::nullopt );
    return *cached;
  }
  return add( GateOp::Not, a, std::nullopt );
}

Ref CircuitBuilder::literal( unsigned var, bool positive )
{
  if ( var == 0u || var > n_ )
  {
    throw Error( ErrorCode::invalid_argument, fmt::format( "literal x{} out of range", var ) );
  }
  auto const x = Ref::input( var - 1u );
  return positive ? x : add_not( x );
}

Ref CircuitBuilder::tree( GateOp op, std::span<const Ref> operands, bool empty_value )
{
  if ( operands.empty() )
    return Ref::constant( empty_value );
  if ( operands.size() == 1u )
    return operands.front();
  auto const half = ( operands.size() + 1u ) / 2u;
  auto const left = tree( op, operands.first( half ), empty_value );
  auto const right = tree( op, operands.subspan( half ), empty_value );
  return add( op, left, right );
}

Ref CircuitBuilder::and_tree( std::span<const Ref> operands ) { return tree( GateOp::And, operands, true ); }
Ref CircuitBuilder::or_tree( std::span<const Ref> operands ) { return tree( GateOp::Or, operands, false ); }

Circuit CircuitBuilder::build( Ref output ) const
{
  check_ref( output );
  return Circuit( n_, gates_, output );
}

/* text formats */

namespace
{

std::string_view trim( std::string_view s )
{
  while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.front() ) ) )
    s.remove_prefix( 1 );
  while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.back() ) ) )
    s.remove_suffix( 1 );
  return s;
}

std::uint32_t parse_index( std::string_view digits, std::string_view context )
{
  std::uint32_t value = 0;
  auto const [ptr, ec] = std::from_chars( digits.data(), digits.data() + digits.size(), value );
  if ( digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() )
  {
    throw Error( ErrorCode::malformed_file, fmt::format( "bad index in '{}'", context ) );
  }
  return value;
}

Ref parse_ref( std::string_view token, std::string_view context )
{
  token = trim( token );
  if ( token == "0" || token == "1" )
    return Ref::constant( token == "1" );
  if ( token.size() >= 2u && token[0] == 'x' )
  {
    auto const var = parse_index( token.substr( 1 ), context );
    if ( var == 0u )
      throw Error( ErrorCode::malformed_file, fmt::format( "inputs are numbered from x1 in '{}'", context ) );
    return Ref::input( var - 1u );
  }
  if ( token.size() >= 2u && token[0] == 'g' )
    return Ref::gate( parse_index( token.substr( 1 ), context ) );
  throw Error( ErrorCode::malformed_file, fmt::format( "bad reference '{}' in '{}'", token, context ) );
}

} // namespace

std::string format_circuit( Circuit const& circuit )
{
  std::string out = fmt::format( "n={}\n", circuit.num_inputs() );
  auto const gates = circuit.gates();
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    auto const& g = gates[i];
    if ( g.in2 )
      out += fmt::format( "g{} = {}({}, {})\n", i, to_string( g.op ), format_ref( g.in1 ), format_ref( *g.in2 ) );
    else
      out += fmt::format( "g{} = {}({})\n", i, to_string( g.op ), format_ref( g.in1 ) );
  }
  out += fmt::format( "out = {}\n", format_ref( circuit.output() ) );
  return out;
}

Circuit parse_circuit( std::string_view text )
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
  if ( lines.size() < 2u || !lines.front().starts_with( "n=" ) )
  {
    throw Error( ErrorCode::malformed_file, "circuit file must start with `n=<k>` and end with `out = <ref>`" );
  }
  auto const n = parse_index( lines.front().substr( 2 ), lines.front() );

  std::vector<Gate> gates;
  std::optional<Ref> output;
  for ( std::size_t l = 1; l < lines.size(); ++l )
  {
    auto const line = lines[l];
    auto const eq = line.find( '=' );
    if ( eq == std::string_view::npos || output )
      throw Error( ErrorCode::malformed_file, fmt::format( "unexpected line '{}'", line ) );
    auto const lhs = trim( line.substr( 0, eq ) );
    auto const rhs = trim( line.substr( eq + 1 ) );
    if ( lhs == "out" )
    {
      output = parse_ref( rhs, line );
      continue;
    }
    if ( lhs.size() < 2u || lhs[0] != 'g' || parse_index( lhs.substr( 1 ), line ) != gates.size() )
      throw Error( ErrorCode::malformed_file, fmt::format( "expected g{} in '{}'", gates.size(), line ) );

    auto const open = rhs.find( '(' );
    if ( open == std::string_view::npos || rhs.back() != ')' )
      throw Error( ErrorCode::malformed_file, fmt::format( "expected OP(...) in '{}'", line ) );
    auto const name = trim( rhs.substr( 0, open ) );
    Gate g;
    if ( name == "AND" )
      g.op = GateOp::And;
    else if ( name == "OR" )
      g.op = GateOp::Or;
    else if ( name == "NOT" )
      g.op = GateOp::Not;
    else
      throw Error( ErrorCode::malformed_file, fmt::format( "unknown gate type '{}'", name ) );
    auto const args = rhs.substr( open + 1, rhs.size() - open - 2 );
    auto const comma = args.find( ',' );
    g.in1 = parse_ref( args.substr( 0, comma ), line );
    if ( comma != std::string_view::npos )
      g.in2 = parse_ref( args.substr( comma + 1 ), line );
    gates.push_back( g );
  }
  if ( !output )
    throw Error( ErrorCode::malformed_file, "missing `out = <ref>` line" );
  Circuit circuit( n, std::move( gates ), *output );
  require_valid( circuit );
  return circuit;
}

std::string to_dot( Circuit const& circuit )
{
  std::ostringstream os;
  os << "digraph circuit {\n  rankdir=BT;\n";
  for ( unsigned j = 0; j < circuit.num_inputs(); ++j )
    os << fmt::format( "  x{0} [shape=box,label=\"x{0}\"];\n", j + 1u );
  auto const gates = circuit.gates();
  bool uses_const[2] = { false, false };
  auto mark = [&]( Ref r ) {
    if ( r.is_constant() && r.index() <= 1u )
      uses_const[r.index()] = true;
  };
  for ( auto const& g : gates )
  {
    mark( g.in1 );
    if ( g.in2 )
      mark( *g.in2 );
  }
  mark( circuit.output() );
  for ( unsigned c = 0; c < 2u; ++c )
  {
    if ( uses_const[c] )
      os << fmt::format( "  c{0} [shape=plaintext,label=\"{0}\"];\n", c );
  }
  auto node = []( Ref r ) { return r.is_constant() ? fmt::format( "c{}", r.index() ) : format_ref( r ); };
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    os << fmt::format( "  g{} [label=\"{}\"];\n", i, to_string( gates[i].op ) );
    os << fmt::format( "  {} -> g{};\n", node( gates[i].in1 ), i );
    if ( gates[i].in2 )
      os << fmt::format( "  {} -> g{};\n", node( *gates[i].in2 ), i );
  }
  os << "  out [shape=doublecircle,label=\"out\"];\n";
  os << fmt::format( "  {} -> out;\n}}\n", node( circuit.output() ) );
  return os.str();
}

} // namespace circdesc
