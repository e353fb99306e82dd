#pragma once

#include "circdesc/circuit.hpp"
#include "circdesc/codec.hpp"
#include "circdesc/frontier.hpp"
#include "circdesc/truth_table.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace circdesc
{

/*! \brief Weights of the heuristic LUT-likeness score.
 *
 * score = (coverage * c + (1 - sharing_ratio) * t) / (c + t), where coverage
 * is the fraction of gates that belong to the OR spine or to a detector.
 */
struct LutWeights
{
  double coverage = 0.75;
  double tree = 0.25;
};

/*! \brief Structural metrics of a circuit.
 *
 * The OR spine is the maximal tree of OR gates rooted at the output. A
 * detector is a spine operand (or the output itself when it is not an OR)
 * that is an AND tree over literals, a literal being an input or the NOT of
 * an input.
 */
struct StructureMetrics
{
  std::array<std::size_t, 3> histogram{}; ///< AND, OR, NOT gate counts
  std::size_t spine_depth = 0;           ///< OR gates on the longest spine path
  std::size_t detectors = 0;
  double sharing_ratio = 0.0;            ///< gates with fan-out > 1 over gates
  double coverage = 0.0;
  double score = 0.0;                    ///< heuristic, in [0, 1]
};

StructureMetrics lut_likeness( Circuit const& circuit, LutWeights const& weights = {} );

struct CensusRecord
{
  std::uint64_t index = 0;       ///< the table read as an integer, row 0 least significant
  std::size_t minimal_size = 0;  ///< exact when `exact`, otherwise the witness size
  std::size_t lower_bound = 0;
  bool exact = false;
  std::uint64_t encoded_bits = 0;
  std::size_t depth = 0;
  StructureMetrics metrics;
  Circuit witness;
};

struct SizeDistribution
{
  unsigned n = 0;
  std::map<std::size_t, std::uint64_t> counts;
  double mean = 0.0;
  std::size_t max = 0;
  double threshold = 0.0;        ///< 2^n / n
  double fraction_at_least = 0.0; ///< share of functions with size >= threshold
  std::uint64_t inexact = 0;
};

SizeDistribution size_distribution( unsigned n, std::span<const CensusRecord> records );

struct CensusOptions
{
  FrontierOptions frontier{ 64u, true, 60'000'000u };

  /*! \brief SAT command for functions the frontier leaves open; empty skips this step. */
  std::string solver;

  /*! \brief Per-call solver time limit in seconds (0 = none). */
  double solver_time_limit = 0.0;

  /*! \brief Total solver time in seconds across the census (0 = none). */
  double solver_budget = 0.0;

  LutWeights weights;
};

struct CensusResult
{
  unsigned n = 0;
  std::vector<CensusRecord> records;
  SizeDistribution distribution;
  std::size_t frontier_complete_through = 0;
  bool frontier_budget_exhausted = false;
  std::uint64_t solver_calls = 0;
};

/*! \brief Minimal circuits for every function of arity n <= 4.
 *
 * One shared frontier search settles as many sizes as its budget allows.
 * Remaining functions receive the smallest of several constructive
 * circuits as an upper bound and, when a solver is configured, are settled
 * one symmetry orbit at a time by SAT queries of increasing size. Anything
 * still open is reported with `exact = false` and its proven lower bound.
 */
CensusResult run_census( unsigned n, CensusOptions const& options = {} );

/*! \brief Circuit for the image of a function under an input permutation
 *         (x_j -> x_perm[j]) and, if `dual`, AND/OR duality.
 */
Circuit transform_circuit( Circuit const& circuit, std::span<const unsigned> perm, bool dual );

struct CompressorRow
{
  std::uint64_t index = 0;
  TruthTable table;
  EncodedCircuit encoding;
};

struct CompressorTable
{
  unsigned n = 0;
  std::string basis = "AND,OR,NOT";
  unsigned version = format_version;
  std::vector<CompressorRow> rows;
};

/*! \brief Table -> encoding of its minimal witness for every function (n <= 3). */
CompressorTable build_compressor_table( CensusResult const& census );

/*! \brief First line of every CSV artifact; n = 0 omits the arity field. */
std::string artifact_header( std::string_view kind, std::uint64_t seed, unsigned n );

std::string census_csv( CensusResult const& census, std::uint64_t seed );
std::string compressor_csv( CompressorTable const& table, std::uint64_t seed );

/*! \brief Binary pack: magic "CDT1", version, n, row count, then per row the
 *         function index, byte offset and bit length (big-endian u32), then
 *         the concatenated encodings.
 */
std::vector<std::uint8_t> compressor_pack( CompressorTable const& table );
CompressorTable parse_compressor_pack( std::span<const std::uint8_t> data );

struct ShannonReport
{
  unsigned n = 0;
  SizeDistribution distribution;
  std::optional<EntropyAudit> audit; ///< n <= 3 only
  std::vector<RatioReport> ratios;   ///< one per observed nonzero size
  std::string text;
  std::uint64_t digest = 0;          ///< FNV-1a of `text`
};

ShannonReport shannon_report( CensusResult const& census );

std::uint64_t fnv1a64( std::string_view data );

} // namespace circdesc
