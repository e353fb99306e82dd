#include "circdesc/codec.hpp"

#include "circdesc/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace circdesc
{

namespace
{

class BitWriter
{
public:
  void put( std::uint64_t value, unsigned width )
  {
    for ( unsigned i = width; i-- > 0; )
    {
      if ( ( length_ & 7u ) == 0u )
        bytes_.push_back( 0u );
      if ( ( value >> i ) & 1u )
        bytes_.back() |= static_cast<std::uint8_t>( 0x80u >> ( length_ & 7u ) );
      ++length_;
    }
  }

  std::uint64_t length() const { return length_; }
  std::vector<std::uint8_t> take() { return std::move( bytes_ ); }

private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t length_ = 0;
};

class BitReader
{
public:
  BitReader( std::span<const std::uint8_t> bytes, std::uint64_t length ) : bytes_( bytes ), length_( length ) {}

  std::uint64_t get( unsigned width )
  {
    if ( position_ + width > length_ )
    {
      throw Error( ErrorCode::malformed_payload, "encoded circuit is truncated" );
    }
    std::uint64_t value = 0;
    for ( unsigned i = 0; i < width; ++i, ++position_ )
    {
      value = ( value << 1u ) | ( ( bytes_[position_ >> 3u] >> ( 7u - ( position_ & 7u ) ) ) & 1u );
    }
    return value;
  }

private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t length_;
  std::uint64_t position_ = 0;
};

std::uint64_t ref_code( Ref r, unsigned n )
{
  switch ( r.kind() )
  {
  case Ref::Kind::Constant: return r.index();
  case Ref::Kind::Input: return 2u + r.index();
  case Ref::Kind::Gate: return 2u + std::uint64_t{ n } + r.index();
  }
  return 0u;
}

Ref code_ref( std::uint64_t code, unsigned n )
{
  if ( code < 2u )
    return Ref::constant( code == 1u );
  if ( code < 2u + n )
    return Ref::input( static_cast<std::uint32_t>( code - 2u ) );
  return Ref::gate( static_cast<std::uint32_t>( code - 2u - n ) );
}

} // namespace

unsigned reference_width( std::uint64_t n, std::uint64_t s )
{
  return static_cast<unsigned>( std::bit_width( n + s + 1u ) );
}

std::uint64_t encoded_length( std::uint64_t s, std::uint64_t n )
{
  auto const w = reference_width( n, s );
  return 32u + s * ( 2u + 2u * w ) + w;
}

EncodedCircuit encode( Circuit const& circuit )
{
  require_valid( circuit );
  auto const n = circuit.num_inputs();
  auto const s = circuit.size();
  if ( n > std::numeric_limits<std::uint16_t>::max() || s > std::numeric_limits<std::uint16_t>::max() )
  {
    throw Error( ErrorCode::field_overflow, fmt::format( "n={} or s={} does not fit a 16-bit header field", n, s ) );
  }
  auto const w = reference_width( n, s );

  BitWriter out;
  out.put( n, 16u );
  out.put( s, 16u );
  for ( auto const& g : circuit.gates() )
  {
    out.put( static_cast<std::uint8_t>( g.op ), 2u );
    out.put( ref_code( g.in1, n ), w );
    out.put( ref_code( g.in2.value_or( g.in1 ), n ), w );
  }
  out.put( ref_code( circuit.output(), n ), w );

  EncodedCircuit e;
  e.n = static_cast<std::uint16_t>( n );
  e.s = static_cast<std::uint16_t>( s );
  e.bit_length = out.length();
  e.bytes = out.take();
  return e;
}

Circuit decode( EncodedCircuit const& encoded )
{
  if ( encoded.bit_length < 32u || encoded.bytes.size() != ( encoded.bit_length + 7u ) / 8u )
  {
    throw Error( ErrorCode::malformed_payload, "payload size does not match its bit length" );
  }
  BitReader in( encoded.bytes, encoded.bit_length );
  auto const n = static_cast<unsigned>( in.get( 16u ) );
  auto const s = in.get( 16u );
  if ( n != encoded.n || s != encoded.s )
  {
    throw Error( ErrorCode::malformed_payload, "header fields disagree with the payload" );
  }
  auto const expected = encoded_length( s, n );
  if ( encoded.bit_length < expected )
  {
    throw Error( ErrorCode::malformed_payload,
                 fmt::format( "payload has {} bits, header requires {}", encoded.bit_length, expected ) );
  }
  if ( encoded.bit_length > expected )
  {
    throw Error( ErrorCode::malformed_payload,
                 fmt::format( "payload has {} trailing bits", encoded.bit_length - expected ) );
  }
  if ( auto const pad = encoded.bit_length & 7u; pad != 0u && ( encoded.bytes.back() & ( 0xffu >> pad ) ) != 0u )
  {
    throw Error( ErrorCode::malformed_payload, "nonzero padding bits" );
  }

  auto const w = reference_width( n, s );
  std::vector<Gate> gates;
  gates.reserve( s );
  auto reference = [&]( std::uint64_t limit, std::string_view node ) {
    auto const code = in.get( w );
    if ( code >= limit )
    {
      throw Error( ErrorCode::forward_reference,
                   fmt::format( "{} references node {} but only {} precede it", node, code, limit ) );
    }
    return code_ref( code, n );
  };
  for ( std::uint64_t i = 0; i < s; ++i )
  {
    auto const op = in.get( 2u );
    if ( op > 2u )
    {
      throw Error( ErrorCode::bad_op_code, fmt::format( "gate g{} has op code {}", i, op ) );
    }
    auto const node = fmt::format( "g{}", i );
    auto const limit = 2u + n + i;
    auto const a = reference( limit, node );
    auto const b = reference( limit, node );
    if ( op == 2u )
    {
      if ( a != b )
        throw Error( ErrorCode::malformed_payload, fmt::format( "NOT gate g{} has two distinct operands", i ) );
      gates.push_back( Gate{ GateOp::Not, a, std::nullopt } );
    }
    else
    {
      gates.push_back( Gate{ static_cast<GateOp>( op ), a, b } );
    }
  }
  auto const output = reference( 2u + n + s, "out" );
  return Circuit( n, std::move( gates ), output );
}

EncodedCircuit encoded_from_bytes( std::span<const std::uint8_t> bytes )
{
  if ( bytes.size() < 4u )
  {
    throw Error( ErrorCode::malformed_payload, "encoding shorter than its 32-bit header" );
  }
  EncodedCircuit e;
  e.n = static_cast<std::uint16_t>( ( bytes[0] << 8u ) | bytes[1] );
  e.s = static_cast<std::uint16_t>( ( bytes[2] << 8u ) | bytes[3] );
  e.bit_length = encoded_length( e.s, e.n );
  if ( bytes.size() != ( e.bit_length + 7u ) / 8u )
  {
    throw Error( ErrorCode::malformed_payload,
                 fmt::format( "encoding has {} bytes, header requires {}", bytes.size(), ( e.bit_length + 7u ) / 8u ) );
  }
  e.bytes.assign( bytes.begin(), bytes.end() );
  return e;
}

std::string to_hex( std::span<const std::uint8_t> bytes )
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve( bytes.size() * 2u );
  for ( auto b : bytes )
  {
    out.push_back( digits[b >> 4u] );
    out.push_back( digits[b & 15u] );
  }
  return out;
}

std::vector<std::uint8_t> from_hex( std::string_view hex )
{
  std::vector<std::uint8_t> out;
  int high = -1;
  for ( char c : hex )
  {
    int v = -1;
    if ( c >= '0' && c <= '9' )
      v = c - '0';
    else if ( c >= 'a' && c <= 'f' )
      v = c - 'a' + 10;
    else if ( c >= 'A' && c <= 'F' )
      v = c - 'A' + 10;
    else if ( c == ' ' || c == '\n' || c == '\r' || c == '\t' )
      continue;
    else
      throw Error( ErrorCode::malformed_file, fmt::format( "invalid hex character '{}'", c ) );
    if ( high < 0 )
    {
      high = v;
    }
    else
    {
      out.push_back( static_cast<std::uint8_t>( ( high << 4 ) | v ) );
      high = -1;
    }
  }
  if ( high >= 0 )
    throw Error( ErrorCode::malformed_file, "odd number of hex digits" );
  return out;
}

std::vector<std::uint8_t> to_file_bytes( EncodedCircuit const& encoded )
{
  std::vector<std::uint8_t> out( encoding_magic.begin(), encoding_magic.end() );
  out.insert( out.end(), encoded.bytes.begin(), encoded.bytes.end() );
  return out;
}

EncodedCircuit from_file_bytes( std::span<const std::uint8_t> data )
{
  auto has_magic = []( std::span<const std::uint8_t> d ) {
    return d.size() >= encoding_magic.size() && std::equal( encoding_magic.begin(), encoding_magic.end(), d.begin() );
  };
  if ( has_magic( data ) )
    return encoded_from_bytes( data.subspan( encoding_magic.size() ) );

  std::string_view const text( reinterpret_cast<char const*>( data.data() ), data.size() );
  auto const bytes = from_hex( text );
  if ( has_magic( bytes ) )
    return encoded_from_bytes( std::span<const std::uint8_t>( bytes ).subspan( encoding_magic.size() ) );
  return encoded_from_bytes( bytes );
}

double idealized_ratio( unsigned n )
{
  return 1.0 - std::log2( static_cast<double>( n ) ) / static_cast<double>( n );
}

RatioReport compression_ratio( std::uint64_t s, unsigned n )
{
  if ( s == 0u || n == 0u || n > 63u )
  {
    throw Error( ErrorCode::invalid_argument, fmt::format( "compression ratio needs s >= 1 and 1 <= n <= 63 (s={}, n={})", s, n ) );
  }
  RatioReport r;
  r.s = s;
  r.n = n;
  r.description_bits = encoded_length( s, n );
  r.data_bits = std::ldexp( 1.0, static_cast<int>( n ) );
  r.ratio = static_cast<double>( r.description_bits ) / r.data_bits;
  r.idealized = idealized_ratio( n );
  return r;
}

namespace
{

bool is_prefix( EncodedCircuit const& a, EncodedCircuit const& b )
{
  if ( a.bit_length > b.bit_length )
    return false;
  auto const full = a.bit_length / 8u;
  if ( !std::equal( a.bytes.begin(), a.bytes.begin() + static_cast<std::ptrdiff_t>( full ), b.bytes.begin() ) )
    return false;
  auto const rest = a.bit_length & 7u;
  if ( rest == 0u )
    return true;
  auto const mask = static_cast<std::uint8_t>( 0xffu << ( 8u - rest ) );
  return ( a.bytes[full] & mask ) == ( b.bytes[full] & mask );
}

} // namespace

EntropyAudit entropy_audit( unsigned n, std::span<const AuditRecord> records )
{
  if ( n == 0u || n > 3u )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "entropy audit supports 1 <= n <= 3, got {}", n ) );
  }
  auto const count = std::uint64_t{ 1 } << ( 1u << n );
  std::vector<bool> seen( count, false );
  for ( auto const& r : records )
  {
    if ( r.function_index >= count )
    {
      throw Error( ErrorCode::incomplete_coverage, fmt::format( "function index {} out of range", r.function_index ) );
    }
    if ( seen[r.function_index] )
    {
      throw Error( ErrorCode::incomplete_coverage, fmt::format( "function {} appears twice", r.function_index ) );
    }
    seen[r.function_index] = true;
  }
  if ( records.size() != count )
  {
    throw Error( ErrorCode::incomplete_coverage,
                 fmt::format( "{} of {} functions covered", records.size(), count ) );
  }

  EntropyAudit audit;
  audit.n = n;
  audit.functions = count;
  audit.entropy = static_cast<double>( 1u << n );
  double total = 0.0;
  double kraft = 0.0;
  bool lossless = true;
  for ( auto const& r : records )
  {
    total += static_cast<double>( r.code.bit_length );
    kraft += std::ldexp( 1.0, -static_cast<int>( r.code.bit_length ) );
    auto const circuit = decode( r.code );
    lossless = lossless && circuit.num_inputs() == n && evaluate_all( circuit ).word() == r.function_index;
  }
  audit.mean_length = total / static_cast<double>( count );
  audit.bound_holds = audit.mean_length >= audit.entropy;
  audit.kraft_sum = kraft;
  audit.kraft_holds = kraft <= 1.0;
  audit.lossless = lossless;

  audit.prefix_free = true;
  for ( std::size_t i = 0; i < records.size() && audit.prefix_free; ++i )
  {
    for ( std::size_t j = i + 1; j < records.size(); ++j )
    {
      if ( is_prefix( records[i].code, records[j].code ) || is_prefix( records[j].code, records[i].code ) )
      {
        audit.prefix_free = false;
        break;
      }
    }
  }
  return audit;
}

} // namespace circdesc
