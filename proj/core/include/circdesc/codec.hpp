#pragma once

#include "circdesc/circuit.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace circdesc
{

/*! \brief Version of the bit-level circuit format; ratio numbers are only
 *         comparable between runs that report the same version.
 */
inline constexpr std::uint32_t format_version = 1u;

/*! \brief Four-byte prefix of encoded-circuit files. */
inline constexpr std::array<std::uint8_t, 4> encoding_magic{ 'C', 'D', 'E', '1' };

/*! \brief Bits per wire reference: ceil(log2(n + s + 2)). */
unsigned reference_width( std::uint64_t n, std::uint64_t s );

/*! \brief Exact encoded length 32 + s * (2 + 2w) + w. */
std::uint64_t encoded_length( std::uint64_t s, std::uint64_t n );

/*! \brief A circuit serialized MSB-first.
 *
 * Layout: 16-bit n, 16-bit s, then per gate a 2-bit op code (AND=0, OR=1,
 * NOT=2) and two w-bit references, then the w-bit output reference.
 * References number FALSE=0, TRUE=1, x1..xn = 2..n+1, gates from n+2 in
 * topological order. NOT repeats its operand in the second slot.
 * Bits past `bit_length` in the final byte are zero.
 */
struct EncodedCircuit
{
  std::uint16_t n = 0;
  std::uint16_t s = 0;
  std::uint64_t bit_length = 0;
  std::vector<std::uint8_t> bytes;

  friend bool operator==( EncodedCircuit const&, EncodedCircuit const& ) = default;
};

EncodedCircuit encode( Circuit const& circuit );
Circuit decode( EncodedCircuit const& encoded );

/*! \brief Rebuilds the bit length from the header of a byte buffer. */
EncodedCircuit encoded_from_bytes( std::span<const std::uint8_t> bytes );

std::string to_hex( std::span<const std::uint8_t> bytes );
std::vector<std::uint8_t> from_hex( std::string_view hex );

/*! \brief Magic prefix followed by the encoding bytes. */
std::vector<std::uint8_t> to_file_bytes( EncodedCircuit const& encoded );

/*! \brief Accepts the binary file form or a hex dump of it (with or without
 *         the magic prefix).
 */
EncodedCircuit from_file_bytes( std::span<const std::uint8_t> data );

/*! \brief Description length against table length for an s-gate circuit. */
struct RatioReport
{
  std::uint64_t s = 0;
  unsigned n = 0;
  std::uint64_t description_bits = 0;
  double data_bits = 0.0;
  double ratio = 0.0;
  double idealized = 0.0; ///< 1 - log2(n)/n, the closed form at s = 2^n/n
};

RatioReport compression_ratio( std::uint64_t s, unsigned n );

/*! \brief 1 - log2(n)/n. */
double idealized_ratio( unsigned n );

struct AuditRecord
{
  std::uint64_t function_index = 0;
  EncodedCircuit code;
};

struct EntropyAudit
{
  unsigned n = 0;
  std::uint64_t functions = 0;
  double mean_length = 0.0;  ///< E[L] under the uniform distribution
  double entropy = 0.0;      ///< H(U_n) = 2^n
  bool bound_holds = false;  ///< E[L] >= H
  double kraft_sum = 0.0;
  bool kraft_holds = false;  ///< sum 2^-L <= 1
  bool prefix_free = false;
  bool lossless = false;     ///< each code decodes to its own function
};

/*! \brief Source-coding audit over every function of arity n (n <= 3).
 *
 * Every record must name a distinct function index; the codes are checked
 * for prefix-freeness and for decoding back to the function they describe.
 */
EntropyAudit entropy_audit( unsigned n, std::span<const AuditRecord> records );

} // namespace circdesc
