#include "circdesc/cnf.hpp"

#include "circdesc/error.hpp"

#include <chrono>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

namespace circdesc
{

namespace
{

class ClauseSink
{
public:
  explicit ClauseSink( CnfInstance& cnf ) : cnf_( cnf ) {}

  Literal fresh() { return static_cast<Literal>( ++cnf_.num_vars ); }

  void add( Clause clause ) { cnf_.clauses.push_back( std::move( clause ) ); }

  void exactly_one( std::vector<Literal> const& lits )
  {
    add( lits );
    for ( std::size_t i = 0; i < lits.size(); ++i )
    {
      for ( std::size_t j = i + 1u; j < lits.size(); ++j )
        add( { -lits[i], -lits[j] } );
    }
  }

private:
  CnfInstance& cnf_;
};

std::optional<bool> known_value( unsigned n, std::size_t node, std::uint64_t row )
{
  if ( node < 2u )
    return node == 1u;
  if ( node < n + 2u )
    return ( ( row >> ( n - 1u - ( node - 2u ) ) ) & 1u ) != 0u;
  return std::nullopt;
}

Ref node_ref( unsigned n, std::size_t node )
{
  if ( node < 2u )
    return Ref::constant( node == 1u );
  if ( node < n + 2u )
    return Ref::input( static_cast<std::uint32_t>( node - 2u ) );
  return Ref::gate( static_cast<std::uint32_t>( node - n - 2u ) );
}

std::string node_name( unsigned n, std::size_t node ) { return format_ref( node_ref( n, node ) ); }

/* operand variable equals the value of `node` whenever `select` holds */
void link_operand( ClauseSink& sink, CnfVariables const& vars, unsigned n, Literal select, std::size_t node,
                   std::uint64_t row, Literal operand )
{
  if ( auto const v = known_value( n, node, row ) )
  {
    sink.add( { -select, *v ? operand : -operand } );
    return;
  }
  auto const g = vars.value[node - n - 2u][row];
  sink.add( { -select, -g, operand } );
  sink.add( { -select, g, -operand } );
}

} // namespace

CnfInstance encode_desc_cnf( McspInstance const& instance )
{
  auto const n = instance.table.arity();
  if ( n == 0u || n > 4u )
  {
    throw Error( ErrorCode::arity_over_cap, fmt::format( "circuit-existence encoding supports 1 <= n <= 4, got {}", n ) );
  }
  if ( instance.bound == 0u )
  {
    throw Error( ErrorCode::bound_too_small, "no circuit has fewer than 0 gates" );
  }
  CnfInstance cnf;
  cnf.table = instance.table;
  cnf.bound = instance.bound;
  auto& vars = cnf.vars;
  ClauseSink sink( cnf );
  auto const rows = instance.table.num_rows();
  auto const r = instance.bound - 1u;
  vars.gates = r;

  for ( std::size_t i = 0; i < r; ++i )
  {
    auto const nodes = n + 2u + i;
    std::array<Literal, 3> op{ sink.fresh(), sink.fresh(), sink.fresh() };
    std::vector<Literal> in1( nodes ), in2( nodes ), value( rows ), first( rows ), second( rows );
    for ( auto& v : in1 )
      v = sink.fresh();
    for ( auto& v : in2 )
      v = sink.fresh();
    for ( std::uint64_t row = 0; row < rows; ++row )
    {
      value[row] = sink.fresh();
      first[row] = sink.fresh();
      second[row] = sink.fresh();
    }
    vars.op.push_back( op );
    vars.in1.push_back( std::move( in1 ) );
    vars.in2.push_back( std::move( in2 ) );
    vars.value.push_back( std::move( value ) );
    vars.first.push_back( std::move( first ) );
    vars.second.push_back( std::move( second ) );
  }
  vars.output.resize( n + 2u + r );
  for ( auto& v : vars.output )
    v = sink.fresh();

  for ( std::size_t i = 0; i < r; ++i )
  {
    auto const nodes = n + 2u + i;
    auto const [o_and, o_or, o_not] = vars.op[i];
    sink.exactly_one( { o_and, o_or, o_not } );
    sink.exactly_one( vars.in1[i] );
    sink.exactly_one( vars.in2[i] );

    for ( std::size_t j = 0; j < nodes; ++j )
    {
      sink.add( { -o_not, -vars.in1[i][j], vars.in2[i][j] } );
      for ( std::size_t k = 0; k <= j; ++k )
        sink.add( { o_not, -vars.in1[i][j], -vars.in2[i][k] } );
    }

    for ( std::uint64_t row = 0; row < rows; ++row )
    {
      auto const v = vars.value[i][row];
      auto const a = vars.first[i][row];
      auto const b = vars.second[i][row];
      for ( std::size_t j = 0; j < nodes; ++j )
      {
        link_operand( sink, vars, n, vars.in1[i][j], j, row, a );
        link_operand( sink, vars, n, vars.in2[i][j], j, row, b );
      }
      sink.add( { -o_and, -v, a } );
      sink.add( { -o_and, -v, b } );
      sink.add( { -o_and, v, -a, -b } );
      sink.add( { -o_or, v, -a } );
      sink.add( { -o_or, v, -b } );
      sink.add( { -o_or, -v, a, b } );
      sink.add( { -o_not, v, a } );
      sink.add( { -o_not, -v, -a } );
    }
  }

  sink.exactly_one( vars.output );
  for ( std::size_t node = 0; node < vars.output.size(); ++node )
  {
    auto const z = vars.output[node];
    for ( std::uint64_t row = 0; row < rows; ++row )
    {
      bool const target = instance.table.get( row );
      if ( auto const v = known_value( n, node, row ) )
      {
        if ( *v != target )
        {
          sink.add( { -z } );
          break;
        }
        continue;
      }
      auto const g = vars.value[node - n - 2u][row];
      sink.add( { -z, target ? g : -g } );
    }
  }
  return cnf;
}

std::string write_dimacs( CnfInstance const& cnf )
{
  auto const n = cnf.table.arity();
  auto const& vars = cnf.vars;
  std::string out;
  out += fmt::format( "c circdesc desc-cnf n={} bound={} table={}\n", n, cnf.bound, cnf.table.to_string() );
  out += fmt::format( "c satisfiable iff some circuit with at most {} gates computes the table\n", vars.gates );
  static constexpr char const* op_names[] = { "AND", "OR", "NOT" };
  for ( std::size_t i = 0; i < vars.gates; ++i )
  {
    for ( std::size_t o = 0; o < 3u; ++o )
      out += fmt::format( "c map op g{} {} {}\n", i, op_names[o], vars.op[i][o] );
    for ( std::size_t j = 0; j < vars.in1[i].size(); ++j )
      out += fmt::format( "c map in1 g{} {} {}\n", i, node_name( n, j ), vars.in1[i][j] );
    for ( std::size_t j = 0; j < vars.in2[i].size(); ++j )
      out += fmt::format( "c map in2 g{} {} {}\n", i, node_name( n, j ), vars.in2[i][j] );
    out += fmt::format( "c map value g{} rows {}..{}\n", i, vars.value[i].front(), vars.value[i].back() );
  }
  for ( std::size_t j = 0; j < vars.output.size(); ++j )
    out += fmt::format( "c map out {} {}\n", node_name( n, j ), vars.output[j] );
  out += fmt::format( "p cnf {} {}\n", cnf.num_vars, cnf.clauses.size() );
  for ( auto const& clause : cnf.clauses )
  {
    for ( auto lit : clause )
      out += fmt::format( "{} ", lit );
    out += "0\n";
  }
  return out;
}

Circuit decode_model( CnfInstance const& cnf, std::vector<bool> const& model )
{
  auto const n = cnf.table.arity();
  auto const& vars = cnf.vars;
  auto holds = [&]( Literal lit ) {
    auto const v = static_cast<std::size_t>( lit );
    return v < model.size() && model[v];
  };
  auto selected = [&]( std::vector<Literal> const& choices ) -> std::size_t {
    for ( std::size_t j = 0; j < choices.size(); ++j )
    {
      if ( holds( choices[j] ) )
        return j;
    }
    throw Error( ErrorCode::model_verification_failed, "model leaves a one-hot selector empty" );
  };

  std::vector<Gate> gates;
  for ( std::size_t i = 0; i < vars.gates; ++i )
  {
    GateOp op;
    if ( holds( vars.op[i][0] ) )
      op = GateOp::And;
    else if ( holds( vars.op[i][1] ) )
      op = GateOp::Or;
    else if ( holds( vars.op[i][2] ) )
      op = GateOp::Not;
    else
      throw Error( ErrorCode::model_verification_failed, fmt::format( "model selects no operation for g{}", i ) );
    auto const a = node_ref( n, selected( vars.in1[i] ) );
    if ( op == GateOp::Not )
      gates.push_back( { op, a, std::nullopt } );
    else
      gates.push_back( { op, a, node_ref( n, selected( vars.in2[i] ) ) } );
  }
  Circuit circuit( n, std::move( gates ), node_ref( n, selected( vars.output ) ) );
  if ( !validate( circuit ).empty() )
  {
    throw Error( ErrorCode::model_verification_failed, "decoded circuit is structurally invalid" );
  }
  circuit = remove_dangling( circuit );
  auto const check = verify( circuit, { cnf.table, cnf.bound - 1u } );
  if ( !check.accepted() )
  {
    throw Error( ErrorCode::model_verification_failed,
                 check.verdict == Verdict::size_exceeded
                     ? fmt::format( "decoded circuit has {} gates, bound is {}", circuit.size(), cnf.bound - 1u )
                     : fmt::format( "decoded circuit differs from the table at row {}", *check.row ) );
  }
  return circuit;
}

std::string solver_from_environment()
{
  auto const* value = std::getenv( solver_env_var );
  return value ? std::string( value ) : std::string();
}

std::optional<SolveStatus> parse_solver_output( std::string const& output, std::uint32_t num_vars,
                                                std::vector<bool>& model )
{
  model.assign( std::size_t{ num_vars } + 1u, false );
  std::optional<SolveStatus> verdict;
  std::istringstream lines( output );
  std::string line;
  while ( std::getline( lines, line ) )
  {
    if ( line.rfind( "s ", 0 ) == 0 )
    {
      if ( line.find( "UNSATISFIABLE" ) != std::string::npos )
        verdict = SolveStatus::unsat;
      else if ( line.find( "SATISFIABLE" ) != std::string::npos )
        verdict = SolveStatus::sat;
      else if ( line.find( "UNKNOWN" ) != std::string::npos )
        verdict = SolveStatus::unknown;
    }
    else if ( line.rfind( "v ", 0 ) == 0 || line == "v" )
    {
      std::istringstream values( line.substr( 1 ) );
      long long lit = 0;
      while ( values >> lit )
      {
        auto const v = static_cast<std::size_t>( lit < 0 ? -lit : lit );
        if ( lit != 0 && v < model.size() )
          model[v] = lit > 0;
      }
    }
  }
  return verdict;
}

namespace
{

struct ProcessOutcome
{
  std::string output;
  int exit_code = -1;
  bool timed_out = false;
};

ProcessOutcome run_shell( std::string const& shell, double time_limit_s )
{
  int fds[2];
  if ( ::pipe( fds ) != 0 )
  {
    throw Error( ErrorCode::io_error, "cannot create a pipe for the solver" );
  }
  auto const pid = ::fork();
  if ( pid < 0 )
  {
    ::close( fds[0] );
    ::close( fds[1] );
    throw Error( ErrorCode::io_error, "cannot fork the solver process" );
  }
  if ( pid == 0 )
  {
    ::setpgid( 0, 0 );
    ::dup2( fds[1], STDOUT_FILENO );
    ::close( fds[0] );
    ::close( fds[1] );
    ::execl( "/bin/sh", "sh", "-c", shell.c_str(), static_cast<char*>( nullptr ) );
    ::_exit( 127 );
  }
  ::setpgid( pid, pid );
  ::close( fds[1] );

  ProcessOutcome outcome;
  auto const start = std::chrono::steady_clock::now();
  char buffer[4096];
  for ( ;; )
  {
    int wait_ms = -1;
    if ( time_limit_s > 0.0 )
    {
      auto const elapsed = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
      if ( elapsed >= time_limit_s )
      {
        outcome.timed_out = true;
        ::kill( -pid, SIGKILL );
        break;
      }
      wait_ms = static_cast<int>( ( time_limit_s - elapsed ) * 1000.0 ) + 1;
    }
    pollfd pfd{ fds[0], POLLIN, 0 };
    auto const ready = ::poll( &pfd, 1, wait_ms );
    if ( ready < 0 && errno == EINTR )
      continue;
    if ( ready == 0 )
      continue;
    auto const got = ::read( fds[0], buffer, sizeof buffer );
    if ( got < 0 && errno == EINTR )
      continue;
    if ( got <= 0 )
      break;
    outcome.output.append( buffer, static_cast<std::size_t>( got ) );
  }
  ::close( fds[0] );
  int status = 0;
  while ( ::waitpid( pid, &status, 0 ) < 0 && errno == EINTR )
  {
  }
  outcome.exit_code = WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
  return outcome;
}

} // namespace

SolveResult solve_cnf( CnfInstance const& cnf, std::string const& command, double time_limit_s )
{
  if ( command.empty() )
  {
    throw Error( ErrorCode::solver_missing, fmt::format( "no SAT solver configured (set {} or pass --solver)", solver_env_var ) );
  }
  auto pattern = ( std::filesystem::temp_directory_path() / "circdesc-XXXXXX.cnf" ).string();
  auto const fd = ::mkstemps( pattern.data(), 4 );
  if ( fd < 0 )
  {
    throw Error( ErrorCode::io_error, "cannot create a temporary CNF file" );
  }
  ::close( fd );
  std::filesystem::path const path( pattern );
  struct Cleanup
  {
    std::filesystem::path path;
    ~Cleanup()
    {
      std::error_code ec;
      std::filesystem::remove( path, ec );
    }
  } cleanup{ path };
  {
    std::ofstream file( path, std::ios::binary );
    file << write_dimacs( cnf );
    if ( !file )
      throw Error( ErrorCode::io_error, fmt::format( "cannot write {}", path.string() ) );
  }

  auto const quoted = "'" + path.string() + "'";
  auto shell = command;
  if ( auto const at = shell.find( "{}" ); at != std::string::npos )
    shell.replace( at, 2u, quoted );
  else
    shell += " " + quoted;

  auto const outcome = run_shell( shell, time_limit_s );
  if ( outcome.timed_out )
    return { SolveStatus::unknown, std::nullopt };
  if ( outcome.exit_code == 126 || outcome.exit_code == 127 )
  {
    throw Error( ErrorCode::solver_missing, fmt::format( "solver command not runnable: {}", command ) );
  }

  std::vector<bool> model;
  auto const verdict = parse_solver_output( outcome.output, cnf.num_vars, model );
  if ( !verdict )
  {
    throw Error( ErrorCode::solver_crash, fmt::format( "solver gave no verdict (exit status {})", outcome.exit_code ) );
  }
  SolveResult result;
  result.status = *verdict;
  if ( result.status == SolveStatus::sat )
    result.circuit = decode_model( cnf, model );
  return result;
}

} // namespace circdesc
