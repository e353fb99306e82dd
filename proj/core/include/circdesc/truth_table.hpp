#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace circdesc
{

/*! \brief The 2^n-bit truth table of a single-output Boolean function.
 *
 * Row `i` holds f(x) for the assignment whose n-bit binary expansion of `i`
 * has x1 as the most significant bit, so row 0 is the all-zeros input and
 * fixing x1..xk selects a contiguous slice of rows.
 *
 * Storage is packed into 64-bit words with row `i` at bit `i % 64` of word
 * `i / 64`; for n <= 6 the whole table is the single integer word(), which is
 * also the function index used by the census.
 */
class TruthTable
{
public:
  static constexpr unsigned max_arity = 24u;

  TruthTable() = default;

  /*! \brief All-zeros table of arity `n` (1 <= n <= 24). */
  explicit TruthTable( unsigned n );

  /*! \brief Parses a 0/1 string whose leftmost character is row 0. */
  static TruthTable from_string( std::string_view bits );

  /*! \brief Table with row `i` equal to bit `i` of `word` (n <= 6). */
  static TruthTable from_word( unsigned n, std::uint64_t word );

  /*! \brief The projection onto variable x_var, 1-based. */
  static TruthTable projection( unsigned n, unsigned var );

  unsigned arity() const noexcept { return n_; }
  std::uint64_t num_rows() const noexcept { return std::uint64_t{ 1 } << n_; }

  bool get( std::uint64_t row ) const noexcept
  {
    return ( words_[row >> 6u] >> ( row & 63u ) ) & 1u;
  }
  void set( std::uint64_t row, bool value ) noexcept;

  std::uint64_t count_ones() const noexcept;
  bool is_const0() const noexcept;
  bool is_const1() const noexcept;

  /*! \brief Packed integer form; only defined for n <= 6. */
  std::uint64_t word() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /*! \brief Cofactor obtained by fixing x1..x_width to `pattern` (x1 is the
   *         pattern's most significant bit). The result has arity n - width;
   *         a full-width cofactor is returned as a one-row arity-0 table.
   */
  TruthTable cofactor( unsigned width, std::uint64_t pattern ) const;

  std::string to_string() const;

  friend bool operator==( TruthTable const&, TruthTable const& ) = default;

private:
  unsigned n_ = 0;
  std::vector<std::uint64_t> words_{ 0u };
};

/*! \brief Serializes as `n=<k>` followed by the 0/1 row string. */
std::string format_truth_table( TruthTable const& table );

/*! \brief Inverse of format_truth_table; throws malformed_file. */
TruthTable parse_truth_table( std::string_view text );

} // namespace circdesc

template<>
struct std::hash<circdesc::TruthTable>
{
  std::size_t operator()( circdesc::TruthTable const& table ) const noexcept
  {
    std::size_t seed = table.arity();
    for ( auto w : table.words() )
    {
      seed ^= std::hash<std::uint64_t>{}( w ) + 0x9e3779b97f4a7c15ull + ( seed << 6u ) + ( seed >> 2u );
    }
    return seed;
  }
};
