#include "cli.hpp"

#include <circdesc/census.hpp>
#include <circdesc/circuit.hpp>
#include <circdesc/cnf.hpp>
#include <circdesc/codec.hpp>
#include <circdesc/error.hpp>
#include <circdesc/mcsp.hpp>
#include <circdesc/synth.hpp>
#include <circdesc/truth_table.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <unistd.h>

#ifndef CIRCDESC_DEFAULT_SOLVER
#define CIRCDESC_DEFAULT_SOLVER ""
#endif

namespace circdesc::cli
{

namespace
{

namespace fs = std::filesystem;

std::string read_file( std::string const& path )
{
  if ( !fs::exists( path ) )
    throw Error( ErrorCode::missing_input, fmt::format( "{} does not exist", path ) );
  std::ifstream file( path, std::ios::binary );
  if ( !file )
    throw Error( ErrorCode::io_error, fmt::format( "cannot open {}", path ) );
  return { std::istreambuf_iterator<char>( file ), std::istreambuf_iterator<char>() };
}

/* writes to a sibling temporary and renames, so readers never see partial files */
void write_file( std::string const& path, std::string_view data )
{
  fs::path const target( path );
  if ( target.has_parent_path() )
    fs::create_directories( target.parent_path() );
  auto const temp = fs::path( path + fmt::format( ".tmp{}", ::getpid() ) );
  {
    std::ofstream file( temp, std::ios::binary | std::ios::trunc );
    file.write( data.data(), static_cast<std::streamsize>( data.size() ) );
    if ( !file )
    {
      std::error_code ec;
      fs::remove( temp, ec );
      throw Error( ErrorCode::io_error, fmt::format( "cannot write {}", path ) );
    }
  }
  std::error_code ec;
  fs::rename( temp, target, ec );
  if ( ec )
  {
    fs::remove( temp, ec );
    throw Error( ErrorCode::io_error, fmt::format( "cannot rename into {}", path ) );
  }
}

void emit( std::ostream& out, std::string const& path, std::string_view data )
{
  if ( path.empty() || path == "-" )
    out << data;
  else
    write_file( path, data );
}

std::string resolve_solver( std::string const& flag )
{
  if ( !flag.empty() )
    return flag;
  if ( auto env = solver_from_environment(); !env.empty() )
    return env;
  return CIRCDESC_DEFAULT_SOLVER;
}

struct CensusCsv
{
  unsigned n = 0;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> columns;
};

CensusCsv read_census_csv( std::string const& path )
{
  CensusCsv csv;
  std::istringstream in( read_file( path ) );
  std::string line;
  while ( std::getline( in, line ) )
  {
    if ( line.empty() )
      continue;
    if ( line[0] == '#' )
    {
      if ( auto at = line.find( " n=" ); at != std::string::npos )
        csv.n = static_cast<unsigned>( std::stoul( line.substr( at + 3u ) ) );
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream cells( line );
    while ( std::getline( cells, field, ',' ) )
      fields.push_back( field );
    if ( csv.columns.empty() )
      csv.columns = std::move( fields );
    else
      csv.rows.push_back( std::move( fields ) );
  }
  if ( csv.n == 0u || csv.columns.empty() )
    throw Error( ErrorCode::malformed_file, fmt::format( "{} is not a census CSV", path ) );
  return csv;
}

std::size_t column( CensusCsv const& csv, std::string_view name )
{
  auto const it = std::find( csv.columns.begin(), csv.columns.end(), name );
  if ( it == csv.columns.end() )
    throw Error( ErrorCode::malformed_file, fmt::format( "census CSV lacks column {}", name ) );
  return static_cast<std::size_t>( it - csv.columns.begin() );
}

TruthTable random_table( unsigned n, std::mt19937_64& rng )
{
  TruthTable table( n );
  for ( std::uint64_t row = 0; row < table.num_rows(); ++row )
    table.set( row, rng() & 1u );
  return table;
}

struct Settings
{
  std::uint64_t seed = 0;
  std::size_t cap = default_search_cap;
  std::string solver;
  unsigned version = format_version;
  unsigned eval_cap = default_evaluation_cap;
};

class Dispatcher
{
public:
  Dispatcher( std::ostream& out ) : out_( out ) {}

  int eval( std::string const& input, std::string const& output, Settings const& s )
  {
    auto const circuit = parse_circuit( read_file( input ) );
    emit( out_, output, format_truth_table( evaluate_all( circuit, s.eval_cap ) ) );
    return 0;
  }

  int synth( std::string const& input, std::string const& output, bool lupanov, unsigned leaf )
  {
    auto const table = parse_truth_table( read_file( input ) );
    auto const circuit = lupanov ? synth_lupanov( table, leaf ) : synth_dnf( table );
    emit( out_, output, format_circuit( circuit ) );
    return 0;
  }

  int minimize_cmd( std::string const& input, std::string const& output, Settings const& s )
  {
    auto const table = parse_truth_table( read_file( input ) );
    auto const result = minimize( table, s.cap );
    out_ << fmt::format( "minimal_size={}\nlower_bound={}\nsearch_cap_hit={}\n", result.minimal_size, result.lower_bound,
                         result.search_cap_hit ? 1 : 0 );
    emit( out_, output, format_circuit( result.witness ) );
    if ( result.search_cap_hit )
    {
      throw Error( ErrorCode::cap_exceeded, fmt::format( "minimum lies in [{}, {}]; the witness is an upper bound",
                                                         result.lower_bound, result.minimal_size ) );
    }
    return 0;
  }

  int verify_cmd( std::string const& circuit_path, std::string const& table_path, std::size_t bound )
  {
    auto const circuit = parse_circuit( read_file( circuit_path ) );
    auto const table = parse_truth_table( read_file( table_path ) );
    auto const result = verify( circuit, { table, bound } );
    switch ( result.verdict )
    {
    case Verdict::accept:
      out_ << "accept\n";
      return 0;
    case Verdict::size_exceeded:
      out_ << fmt::format( "reject size_exceeded size={} bound={}\n", circuit.size(), bound );
      return 1;
    case Verdict::mismatch:
      out_ << fmt::format( "reject mismatch row={}\n", *result.row );
      return 1;
    }
    return 1;
  }

  int desc_cnf( std::string const& input, std::size_t bound, std::string const& output, bool solve,
                std::string const& circuit_out, Settings const& s )
  {
    auto const table = parse_truth_table( read_file( input ) );
    auto const cnf = encode_desc_cnf( { table, bound } );
    if ( !solve )
    {
      emit( out_, output, write_dimacs( cnf ) );
      return 0;
    }
    if ( !output.empty() && output != "-" )
      write_file( output, write_dimacs( cnf ) );
    auto const result = solve_cnf( cnf, resolve_solver( s.solver ) );
    if ( result.status == SolveStatus::unknown )
      throw Error( ErrorCode::solver_crash, "solver returned UNKNOWN" );
    out_ << ( result.satisfiable() ? "sat\n" : "unsat\n" );
    if ( result.circuit )
      emit( out_, circuit_out, format_circuit( *result.circuit ) );
    return 0;
  }

  int census( unsigned n, std::string const& dir, bool use_solver, double limit, double budget, Settings const& s )
  {
    CensusOptions options;
    if ( use_solver )
    {
      options.solver = resolve_solver( s.solver );
      if ( options.solver.empty() )
        throw Error( ErrorCode::solver_missing, "--use-solver given but no solver is configured" );
      options.solver_time_limit = limit;
      options.solver_budget = budget;
    }
    auto const result = run_census( n, options );
    auto const report = shannon_report( result );
    write_file( ( fs::path( dir ) / fmt::format( "census_n{}.csv", n ) ).string(), census_csv( result, s.seed ) );
    write_file( ( fs::path( dir ) / fmt::format( "shannon_report_n{}.txt", n ) ).string(), report.text );
    auto const& d = result.distribution;
    out_ << fmt::format( "n={}\nfunctions={}\ninexact={}\nmean_size={:.6f}\nmax_size={}\nsolver_calls={}\nreport_digest={:016x}\n", n,
                         result.records.size(), d.inexact, d.mean, d.max, result.solver_calls, report.digest );
    return 0;
  }

  int compressor( unsigned n, std::string const& dir, Settings const& s )
  {
    auto const table = build_compressor_table( run_census( n ) );
    write_file( ( fs::path( dir ) / fmt::format( "compressor_n{}.csv", n ) ).string(), compressor_csv( table, s.seed ) );
    auto const pack = compressor_pack( table );
    write_file( ( fs::path( dir ) / fmt::format( "compressor_n{}.bin", n ) ).string(),
                std::string_view( reinterpret_cast<char const*>( pack.data() ), pack.size() ) );
    out_ << fmt::format( "n={}\nrows={}\npack_bytes={}\n", n, table.rows.size(), pack.size() );
    return 0;
  }

  int encode_cmd( std::string const& input, std::string const& output, bool hex )
  {
    auto const encoded = encode( parse_circuit( read_file( input ) ) );
    auto const bytes = to_file_bytes( encoded );
    if ( hex )
      emit( out_, output, to_hex( bytes ) + "\n" );
    else
      emit( out_, output, std::string_view( reinterpret_cast<char const*>( bytes.data() ), bytes.size() ) );
    return 0;
  }

  int decode_cmd( std::string const& input, std::string const& output )
  {
    auto const data = read_file( input );
    std::vector<std::uint8_t> const bytes( data.begin(), data.end() );
    emit( out_, output, format_circuit( decode( from_file_bytes( bytes ) ) ) );
    return 0;
  }

  int report( std::string const& census_dir, std::string const& dir, unsigned trend_samples, Settings const& s )
  {
    std::vector<CensusCsv> censuses;
    for ( unsigned n = 1; n <= 4u; ++n )
    {
      auto const path = fs::path( census_dir ) / fmt::format( "census_n{}.csv", n );
      if ( fs::exists( path ) )
        censuses.push_back( read_census_csv( path.string() ) );
    }
    if ( censuses.empty() )
      throw Error( ErrorCode::missing_input, fmt::format( "no census_n<k>.csv files in {}", census_dir ) );

    auto histogram = artifact_header( "size_histogram", s.seed, 0u ) + "n,minimal_size,count,exact_count\n";
    auto entropy = artifact_header( "entropy_audit", s.seed, 0u ) +
                   "n,functions,mean_length,entropy_bound,bound_holds,kraft_sum,kraft_holds,inexact\n";
    for ( auto const& csv : censuses )
    {
      auto const size_col = column( csv, "minimal_size" );
      auto const bits_col = column( csv, "encoded_bits" );
      auto const exact_col = column( csv, "exact" );
      std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> counts;
      double total_bits = 0.0;
      double kraft = 0.0;
      std::uint64_t inexact = 0;
      for ( auto const& row : csv.rows )
      {
        auto& slot = counts[std::stoul( row.at( size_col ) )];
        bool const exact = row.at( exact_col ) == "1";
        ++slot.first;
        slot.second += exact ? 1u : 0u;
        inexact += exact ? 0u : 1u;
        auto const bits = std::stod( row.at( bits_col ) );
        total_bits += bits;
        kraft += std::exp2( -bits );
      }
      for ( auto const& [size, c] : counts )
        histogram += fmt::format( "{},{},{},{}\n", csv.n, size, c.first, c.second );
      auto const functions = static_cast<double>( csv.rows.size() );
      auto const mean = total_bits / functions;
      auto const bound = std::exp2( static_cast<double>( csv.n ) );
      entropy += fmt::format( "{},{},{:.6f},{:.0f},{},{:.12f},{},{}\n", csv.n, csv.rows.size(), mean, bound,
                              mean >= bound ? 1 : 0, kraft, kraft <= 1.0 ? 1 : 0, inexact );
    }

    auto ratios = artifact_header( "ratio_vs_n", s.seed, 0u ) + "n,s,description_bits,data_bits,ratio,p_star\n";
    for ( unsigned n = 1; n <= 16u; ++n )
    {
      auto const gates = std::max<std::uint64_t>( 1u, ( ( std::uint64_t{ 1 } << n ) + n - 1u ) / n );
      auto const r = compression_ratio( gates, n );
      ratios += fmt::format( "{},{},{},{:.0f},{:.6f},{:.6f}\n", n, r.s, r.description_bits, r.data_bits, r.ratio, r.idealized );
    }

    std::mt19937_64 rng( s.seed );
    auto trend = artifact_header( "lupanov_trend", s.seed, 0u ) +
                 "n,samples,bound,bound_over_2n_n,mean_lupanov,lupanov_over_2n_n,mean_dnf\n";
    for ( unsigned n = 8; n <= 14u; ++n )
    {
      auto const plan = make_lupanov_plan( n );
      auto const bound = size_accounting( plan );
      double lupanov = 0.0;
      double dnf = 0.0;
      for ( unsigned i = 0; i < trend_samples; ++i )
      {
        auto const table = random_table( n, rng );
        lupanov += static_cast<double>( synth_lupanov( table, plan ).size() );
        dnf += static_cast<double>( synth_dnf( table ).size() );
      }
      auto const scale = static_cast<double>( std::uint64_t{ 1 } << n ) / n;
      lupanov /= trend_samples;
      dnf /= trend_samples;
      trend += fmt::format( "{},{},{},{:.6f},{:.2f},{:.6f},{:.2f}\n", n, trend_samples, bound,
                            static_cast<double>( bound ) / scale, lupanov, lupanov / scale, dnf );
    }

    write_file( ( fs::path( dir ) / "size_histogram.csv" ).string(), histogram );
    write_file( ( fs::path( dir ) / "entropy_audit.csv" ).string(), entropy );
    write_file( ( fs::path( dir ) / "ratio_vs_n.csv" ).string(), ratios );
    write_file( ( fs::path( dir ) / "lupanov_trend.csv" ).string(), trend );
    out_ << fmt::format( "censuses={}\nwrote size_histogram.csv entropy_audit.csv ratio_vs_n.csv lupanov_trend.csv\n",
                         censuses.size() );
    return 0;
  }

private:
  std::ostream& out_;
};

constexpr std::array<std::string_view, 11> subcommands{ "eval",   "synth-dnf",        "synth-lupanov", "minimize",
                                                        "mcsp-verify", "desc-cnf", "census",        "compressor-table",
                                                        "encode", "decode",           "report" };

} // namespace

int run( std::vector<std::string> const& args, std::ostream& out, std::ostream& err )
{
  auto fail = [&]( ErrorCode code, std::string const& detail ) {
    err << "error: " << to_string( code ) << ": " << detail << "\n";
    return 2;
  };

  static constexpr std::array<std::string_view, 5> valued{ "--seed", "--cap", "--solver", "--format-version", "--max-arity" };
  for ( std::size_t i = 0; i < args.size(); ++i )
  {
    auto const& a = args[i];
    if ( std::find( valued.begin(), valued.end(), a ) != valued.end() )
    {
      ++i;
      continue;
    }
    if ( a.empty() || a[0] == '-' )
      continue;
    if ( std::find( subcommands.begin(), subcommands.end(), a ) == subcommands.end() )
      return fail( ErrorCode::unknown_subcommand, fmt::format( "'{}' (expected one of eval, synth-dnf, synth-lupanov, "
                                                                 "minimize, mcsp-verify, desc-cnf, census, "
                                                                 "compressor-table, encode, decode, report)",
                                                                 a ) );
    break;
  }

  CLI::App app{ "Circuits as compressed descriptions of truth tables", "circdesc" };
  app.require_subcommand( 1 );
  app.fallthrough();
  Settings s;
  app.add_option( "--seed", s.seed, "Seed for randomized runs, recorded in every CSV header" );
  app.add_option( "--cap", s.cap, "Largest gate count searched by minimize" );
  app.add_option( "--solver", s.solver,
                  fmt::format( "SAT solver command ({{}} = CNF path); defaults to ${}", solver_env_var ) );
  app.add_option( "--format-version", s.version, "Required artifact format version" );
  app.add_option( "--max-arity", s.eval_cap, "Arity cap for eval" );

  Dispatcher d( out );
  std::string input, input2, output, circuit_out, dir = ".", census_dir = ".";
  std::size_t bound = 0;
  unsigned n = 0, leaf = default_leaf_threshold, samples = 3;
  bool hex = false, solve = false, use_solver = false;
  double limit = 20.0, budget = 1200.0;
  std::function<int()> action;

  auto* eval = app.add_subcommand( "eval", "Circuit file -> truth table" );
  eval->add_option( "circuit", input, "Circuit file" )->required();
  eval->add_option( "-o,--output", output, "Truth table file (default stdout)" );
  eval->callback( [&] { action = [&] { return d.eval( input, output, s ); }; } );

  auto* dnf = app.add_subcommand( "synth-dnf", "Truth table -> lookup-table circuit" );
  dnf->add_option( "table", input, "Truth table file" )->required();
  dnf->add_option( "-o,--output", output, "Circuit file (default stdout)" );
  dnf->callback( [&] { action = [&] { return d.synth( input, output, false, leaf ); }; } );

  auto* lup = app.add_subcommand( "synth-lupanov", "Truth table -> layered block-Shannon circuit" );
  lup->add_option( "table", input, "Truth table file" )->required();
  lup->add_option( "-o,--output", output, "Circuit file (default stdout)" );
  lup->add_option( "--leaf", leaf, "Arity at or below which the DNF construction is used" );
  lup->callback( [&] { action = [&] { return d.synth( input, output, true, leaf ); }; } );

  auto* mini = app.add_subcommand( "minimize", "Exact minimum circuit (n <= 4)" );
  mini->add_option( "table", input, "Truth table file" )->required();
  mini->add_option( "-o,--output", output, "Witness circuit file (default stdout)" );
  mini->callback( [&] { action = [&] { return d.minimize_cmd( input, output, s ); }; } );

  auto* ver = app.add_subcommand( "mcsp-verify", "Check a circuit against (table, bound); exit 1 on reject" );
  ver->add_option( "circuit", input, "Circuit file" )->required();
  ver->add_option( "table", input2, "Truth table file" )->required();
  ver->add_option( "-s,--bound", bound, "Gate bound" )->required();
  ver->callback( [&] { action = [&] { return d.verify_cmd( input, input2, bound ); }; } );

  auto* cnf = app.add_subcommand( "desc-cnf", "DIMACS CNF: some circuit with fewer than s gates computes the table" );
  cnf->add_option( "table", input, "Truth table file" )->required();
  cnf->add_option( "-s,--bound", bound, "Strict gate bound s" )->required();
  cnf->add_option( "-o,--output", output, "DIMACS file (default stdout)" );
  cnf->add_flag( "--solve", solve, "Run the solver and print sat/unsat" );
  cnf->add_option( "--circuit-out", circuit_out, "Where to write the decoded circuit (default stdout)" );
  cnf->callback( [&] { action = [&] { return d.desc_cnf( input, bound, output, solve, circuit_out, s ); }; } );

  auto* cen = app.add_subcommand( "census", "Minimal circuits for all functions of arity n (n <= 4)" );
  cen->add_option( "-n,--arity", n, "Arity" )->required();
  cen->add_option( "-d,--out-dir", dir, "Output directory" );
  cen->add_flag( "--use-solver", use_solver, "Settle sizes beyond the frontier with SAT queries" );
  cen->add_option( "--solver-time-limit", limit, "Seconds per solver call" );
  cen->add_option( "--solver-budget", budget, "Total solver seconds" );
  cen->callback( [&] { action = [&] { return d.census( n, dir, use_solver, limit, budget, s ); }; } );

  auto* comp = app.add_subcommand( "compressor-table", "Table -> minimal-circuit encoding for all functions (n <= 3)" );
  comp->add_option( "-n,--arity", n, "Arity" )->required();
  comp->add_option( "-d,--out-dir", dir, "Output directory" );
  comp->callback( [&] { action = [&] { return d.compressor( n, dir, s ); }; } );

  auto* enc = app.add_subcommand( "encode", "Circuit file -> binary encoding" );
  enc->add_option( "circuit", input, "Circuit file" )->required();
  enc->add_option( "-o,--output", output, "Encoded file (default stdout)" );
  enc->add_flag( "--hex", hex, "Write a hex dump instead of raw bytes" );
  enc->callback( [&] { action = [&] { return d.encode_cmd( input, output, hex ); }; } );

  auto* dec = app.add_subcommand( "decode", "Binary or hex encoding -> circuit file" );
  dec->add_option( "encoded", input, "Encoded file" )->required();
  dec->add_option( "-o,--output", output, "Circuit file (default stdout)" );
  dec->callback( [&] { action = [&] { return d.decode_cmd( input, output ); }; } );

  auto* rep = app.add_subcommand( "report", "Plot-ready CSV series from census outputs" );
  rep->add_option( "-c,--census-dir", census_dir, "Directory holding census_n<k>.csv" );
  rep->add_option( "-d,--out-dir", dir, "Output directory" );
  rep->add_option( "--trend-samples", samples, "Random tables per arity for the Lupanov trend" );
  rep->callback( [&] { action = [&] { return d.report( census_dir, dir, samples, s ); }; } );

  try
  {
    std::vector<std::string> reversed( args.rbegin(), args.rend() );
    app.parse( reversed );
  }
  catch ( CLI::CallForHelp const& )
  {
    out << app.help();
    return 0;
  }
  catch ( CLI::CallForAllHelp const& )
  {
    out << app.help( "", CLI::AppFormatMode::All );
    return 0;
  }
  catch ( CLI::ParseError const& e )
  {
    return fail( ErrorCode::invalid_argument, e.what() );
  }

  try
  {
    if ( s.version != format_version )
    {
      throw Error( ErrorCode::invalid_argument,
                   fmt::format( "format version {} requested, this build writes version {}", s.version, format_version ) );
    }
    return action ? action() : fail( ErrorCode::invalid_argument, "no subcommand" );
  }
  catch ( Error const& e )
  {
    return fail( e.code(), e.what() );
  }
  catch ( std::exception const& e )
  {
    return fail( ErrorCode::io_error, e.what() );
  }
}

} // namespace circdesc::cli
