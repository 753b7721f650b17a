#include "cdineq/expr.hpp"
#include "cdineq/families.hpp"
#include "cdineq/induct.hpp"
#include "cdineq/report.hpp"
#include "cdineq/tree.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace cdineq;

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::string read_source(const std::string& poly, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot read " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (poly.empty()) fail(ErrorKind::InvalidArgument, "no polynomial given (--poly or --file)");
  return poly;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conductor-discriminant inequality for y^2 = f(x) over F_p[[t]]"};
  app.require_subcommand(1);

  std::uint32_t prime = 101;
  std::string poly, file, json_path, format = "text";
  bool trace = false;
  long max_precision = 4096;
  unsigned max_extension = 24;
  int max_depth = 64;

  auto* analyze = app.add_subcommand("analyze", "compute -Art(X^f) and v(disc) and check the inequality");
  analyze->add_option("--prime,-p", prime, "residue characteristic");
  analyze->add_option("--poly", poly, "polynomial in x and t");
  analyze->add_option("--file", file, "read the polynomial from a file");
  analyze->add_option("--json", json_path, "also write the JSON report here");
  analyze->add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "json"}));
  analyze->add_flag("--trace", trace, "include timings");
  analyze->add_option("--max-precision", max_precision, "series precision cap")->check(CLI::PositiveNumber);
  analyze->add_option("--max-extension", max_extension, "largest extension degree")->check(CLI::PositiveNumber);
  analyze->add_option("--max-depth", max_depth, "recursion depth cap")->check(CLI::PositiveNumber);

  std::string family;
  int g = 2;
  auto* example = app.add_subcommand("example", "print a polynomial from one of the example families");
  example->add_option("--family", family, "family")->required()->check(CLI::IsMember(family_names()));
  example->add_option("-g", g, "genus parameter");
  example->add_option("--prime,-p", prime, "residue characteristic");

  std::string tree_format = "ascii";
  auto* tree = app.add_subcommand("tree", "print the metric tree of the roots");
  tree->add_option("--poly", poly, "polynomial in x and t");
  tree->add_option("--file", file, "read the polynomial from a file");
  tree->add_option("--prime,-p", prime, "residue characteristic");
  tree->add_option("--format", tree_format, "dot, ascii or json")->check(CLI::IsMember({"dot", "ascii", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!is_prime(prime)) fail(ErrorKind::InvalidArgument, std::to_string(prime) + " is not prime");

    if (*example) {
      std::cout << example_expression(family, g, prime) << "\n";
      return 0;
    }

    FieldTower tw(prime, max_extension);
    SolveConfig sc;
    sc.cap = Rat(max_precision);
    if (sc.initial > sc.cap) sc.initial = sc.cap;

    if (*tree) {
      std::string src = read_source(poly, file);
      ExactPoly f = parse_poly(tw, src);
      RootSystem rs = puiseux_roots(f, sc);
      MetricTree tr = build_tree(rs);
      if (tree_format == "dot")
        std::cout << tree_to_dot(tr);
      else if (tree_format == "json")
        std::cout << tree_to_json(tr).dump(2) << "\n";
      else
        std::cout << tree_to_ascii(tr);
      return 0;
    }

    RunInfo info;
    info.prime = prime;
    info.trace = trace;
    auto t0 = std::chrono::steady_clock::now();
    info.expression = read_source(poly, file);
    ExactPoly f = parse_poly(tw, info.expression);
    info.parse_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    RootSystem rs = puiseux_roots(f, sc);
    info.roots_ms = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    InductConfig ic;
    ic.solve = sc;
    ic.max_depth = max_depth;
    InductionReport rep = verify_inequality(rs, ic);
    info.induct_ms = ms_since(t0);
    nlohmann::json doc = make_report(info, f, rs, rep);
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + json_path);
      out << doc.dump(2) << "\n";
    }
    if (format == "json")
      std::cout << doc.dump(2) << "\n";
    else
      std::cout << report_to_text(doc);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 4;
  }
}
