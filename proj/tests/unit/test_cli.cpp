#include <cli.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fs = std::filesystem;

namespace
{

struct Run
{
  int status;
  std::string out;
  std::string err;
};

Run invoke( std::vector<std::string> const& args )
{
  std::ostringstream out, err;
  auto const status = circdesc::cli::run( args, out, err );
  return { status, out.str(), err.str() };
}

std::string slurp( fs::path const& p )
{
  std::ifstream in( p, std::ios::binary );
  return { std::istreambuf_iterator<char>( in ), {} };
}

fs::path scratch( std::string const& name )
{
  auto const dir = fs::temp_directory_path() / ( "circdesc_cli_" + name );
  fs::remove_all( dir );
  fs::create_directories( dir );
  return dir;
}

void put( fs::path const& p, std::string const& text )
{
  std::ofstream( p ) << text;
}

} // namespace

TEST_CASE( "eval writes the table of the single-one circuit" )
{
  auto const dir = scratch( "eval" );
  put( dir / "and3.circ", "n=3\ng0 = AND(x2, x3)\ng1 = AND(x1, g0)\nout = g1\n" );
  auto const r = invoke( { "eval", ( dir / "and3.circ" ).string(), "-o", ( dir / "t.tt" ).string() } );
  CHECK( r.status == 0 );
  CHECK( slurp( dir / "t.tt" ) == "n=3\n00000001\n" );
}

TEST_CASE( "minimize prints the size and writes the witness" )
{
  auto const dir = scratch( "minimize" );
  put( dir / "xor.tt", "n=2\n0110\n" );
  auto const r = invoke( { "minimize", ( dir / "xor.tt" ).string(), "-o", ( dir / "w.circ" ).string() } );
  CHECK( r.status == 0 );
  CHECK( r.out.find( "minimal_size=4" ) != std::string::npos );
  auto const e = invoke( { "eval", ( dir / "w.circ" ).string() } );
  CHECK( e.out == "n=2\n0110\n" );

  auto const capped = invoke( { "--cap", "2", "minimize", ( dir / "xor.tt" ).string() } );
  CHECK( capped.status == 2 );
  CHECK( capped.err.find( "error: cap_exceeded:" ) == 0u );
}

TEST_CASE( "encode then decode is byte-identical" )
{
  auto const dir = scratch( "codec" );
  std::string const circuit = "n=3\ng0 = NOT(x2)\ng1 = AND(x1, g0)\ng2 = OR(g1, x3)\nout = g2\n";
  put( dir / "c.circ", circuit );
  for ( bool hex : { false, true } )
  {
    std::vector<std::string> args{ "encode", ( dir / "c.circ" ).string(), "-o", ( dir / "c.bin" ).string() };
    if ( hex )
      args.push_back( "--hex" );
    REQUIRE( invoke( args ).status == 0 );
    REQUIRE( invoke( { "decode", ( dir / "c.bin" ).string(), "-o", ( dir / "back.circ" ).string() } ).status == 0 );
    CHECK( slurp( dir / "back.circ" ) == slurp( dir / "c.circ" ) );
  }
}

TEST_CASE( "synthesis and verification subcommands" )
{
  auto const dir = scratch( "synth" );
  put( dir / "t.tt", "n=3\n00000110\n" );
  REQUIRE( invoke( { "synth-dnf", ( dir / "t.tt" ).string(), "-o", ( dir / "d.circ" ).string() } ).status == 0 );
  CHECK( invoke( { "eval", ( dir / "d.circ" ).string() } ).out == "n=3\n00000110\n" );
  REQUIRE( invoke( { "synth-lupanov", ( dir / "t.tt" ).string(), "-o", ( dir / "l.circ" ).string() } ).status == 0 );
  CHECK( invoke( { "eval", ( dir / "l.circ" ).string() } ).out == "n=3\n00000110\n" );

  auto const ok = invoke( { "mcsp-verify", ( dir / "d.circ" ).string(), ( dir / "t.tt" ).string(), "-s", "7" } );
  CHECK( ok.status == 0 );
  CHECK( ok.out.find( "accept" ) != std::string::npos );
  auto const small = invoke( { "mcsp-verify", ( dir / "d.circ" ).string(), ( dir / "t.tt" ).string(), "-s", "6" } );
  CHECK( small.status == 1 );
  CHECK( small.out.find( "reject" ) != std::string::npos );
}

TEST_CASE( "desc-cnf writes DIMACS and solves" )
{
  auto const dir = scratch( "cnf" );
  put( dir / "xor.tt", "n=2\n0110\n" );
  REQUIRE( invoke( { "desc-cnf", ( dir / "xor.tt" ).string(), "-s", "4", "-o", ( dir / "x.cnf" ).string() } ).status == 0 );
  CHECK( slurp( dir / "x.cnf" ).find( "p cnf " ) != std::string::npos );

  std::string const solver = CIRCDESC_TEST_SOLVER;
  REQUIRE_MESSAGE( !solver.empty(), "no SAT solver configured" );
  auto const unsat = invoke( { "--solver", solver, "desc-cnf", ( dir / "xor.tt" ).string(), "-s", "4", "--solve" } );
  CHECK( unsat.status == 0 );
  CHECK( unsat.out.find( "unsat" ) != std::string::npos );
  auto const sat = invoke( { "--solver", solver, "desc-cnf", ( dir / "xor.tt" ).string(), "-s", "5", "--solve", "--circuit-out",
                             ( dir / "x.circ" ).string() } );
  CHECK( sat.status == 0 );
  CHECK( invoke( { "eval", ( dir / "x.circ" ).string() } ).out == "n=2\n0110\n" );

  auto const missing = invoke( { "--solver", "/nonexistent/solver", "desc-cnf", ( dir / "xor.tt" ).string(), "-s", "4", "--solve" } );
  CHECK( missing.status == 2 );
  CHECK( missing.err.find( "error: solver_missing:" ) == 0u );
}

TEST_CASE( "census, compressor-table and report artifacts" )
{
  auto const dir = scratch( "census" );
  for ( std::string n : { "1", "2", "3" } )
  {
    REQUIRE( invoke( { "--seed", "5", "census", "-n", n, "-d", dir.string() } ).status == 0 );
    REQUIRE( invoke( { "--seed", "5", "compressor-table", "-n", n, "-d", dir.string() } ).status == 0 );
    CHECK( slurp( dir / ( "census_n" + n + ".csv" ) ).rfind( "# circdesc format_version=1 seed=5 artifact=census n=" + n, 0 ) == 0u );
    CHECK( fs::exists( dir / ( "shannon_report_n" + n + ".txt" ) ) );
    CHECK( fs::exists( dir / ( "compressor_n" + n + ".bin" ) ) );
  }
  REQUIRE( invoke( { "--seed", "5", "report", "-c", dir.string(), "-d", dir.string(), "--trend-samples", "1" } ).status == 0 );
  for ( auto const* name : { "size_histogram.csv", "entropy_audit.csv", "ratio_vs_n.csv", "lupanov_trend.csv" } )
  {
    auto const text = slurp( dir / name );
    CHECK_MESSAGE( text.rfind( "# circdesc format_version=1 seed=5", 0 ) == 0u, name );
  }
  auto const hist = slurp( dir / "size_histogram.csv" );
  CHECK( hist.find( "\n1,0,3," ) != std::string::npos );
  CHECK( hist.find( "\n1,1,1," ) != std::string::npos );
  auto const ratio = slurp( dir / "ratio_vs_n.csv" );
  std::istringstream lines( ratio );
  std::string line, header;
  bool found = false;
  while ( std::getline( lines, line ) )
  {
    if ( line.rfind( "n,", 0 ) == 0 )
      header = line;
    if ( line.rfind( "4,", 0 ) == 0 )
    {
      found = true;
      CHECK( line.find( ",0.5" ) != std::string::npos );
    }
  }
  CHECK( found );
  CHECK( header.find( "p_star" ) != std::string::npos );

  auto const empty = scratch( "report_missing" );
  auto const r = invoke( { "report", "-c", empty.string(), "-d", empty.string() } );
  CHECK( r.status == 2 );
  CHECK( r.err.find( "error: missing_input:" ) == 0u );
}

TEST_CASE( "errors use the documented line format" )
{
  auto const bogus = invoke( { "frobnicate" } );
  CHECK( bogus.status == 2 );
  CHECK( bogus.err.find( "error: unknown_subcommand:" ) == 0u );

  auto const dir = scratch( "errors" );
  put( dir / "bad.circ", "n=2\ng0 = AND(x1, g3)\nout = g0\n" );
  auto const bad = invoke( { "eval", ( dir / "bad.circ" ).string() } );
  CHECK( bad.status == 2 );
  CHECK( bad.err.rfind( "error: ", 0 ) == 0u );

  auto const absent = invoke( { "eval", ( dir / "nope.circ" ).string() } );
  CHECK( absent.status == 2 );

  auto const big = invoke( { "census", "-n", "5", "-d", dir.string() } );
  CHECK( big.status == 2 );
  CHECK( big.err.find( "error: arity_over_cap:" ) == 0u );

  auto const version = invoke( { "--format-version", "2", "eval", ( dir / "bad.circ" ).string() } );
  CHECK( version.status == 2 );
}
