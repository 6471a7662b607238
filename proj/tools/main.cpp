#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tvlat/session.hpp"

namespace {

const char* kGrammar = R"(Session grammar (one statement per line, '#' starts a comment):

  field arch minpoly=<poly-in-x> interval=<rat>,<rat>
  field padic p=<int> minpoly=<poly-in-x> residue=<int>
  field prime p=<int>
  topology <name> dim=<int> basis=[<entry>,..;..]   entries are polynomials in `a`
  map <name> rows=[<rat>,..;..]

  hausdorff <T>                 closure-zero <T>
  join <T1> <T2>                meet <T1> <T2>
  compare <T1> <T2>             continuous <map> <TX> <TY>
  member <T> center=<vec> point=<vec> eps=<rat> [cap=<int>]
  count-subspaces q=<int> n=<int>
  enumerate-topologies p=<int> n=<int>
  qli [<elem>,...]

Output: one key=value record per query (or one JSON object per line with
--json). Basic neighborhoods for `member` use the pivot-complement
projection seminorm, which induces the same topology as the quotient norm
but is exactly computable. Exit codes: 0 ok, 1 domain error, 2 parse error.
The TVLAT_MEMBER_CAP environment variable overrides the default refinement
cap of 64.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tvlat: exact decision procedures for compatible vector-space topologies,\n"
      "represented by subspaces over a completion of the scalar field"};
  app.footer(kGrammar);
  std::string input_path = "-";
  bool json = false;
  app.add_option("input", input_path, "session file ('-' or omitted reads stdin)");
  app.add_flag("--json", json, "emit one JSON object per result line");
  CLI11_PARSE(app, argc, argv);

  std::string text;
  if (input_path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(input_path);
    if (!in) {
      std::cerr << "error=io message=\"cannot open " << input_path << "\"\n";
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }

  const tvlat::RunResult result = tvlat::run_text(text, json);
  std::cout << result.output;
  return result.exit_code;
}
