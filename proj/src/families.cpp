#include "cdineq/families.hpp"

#include "cdineq/expr.hpp"

#include <algorithm>

namespace cdineq {

namespace {

std::string lin(std::int64_t a, const std::string& tail = "") {
  std::string s = "(x";
  if (a > 0) s += " - " + std::to_string(a);
  if (a < 0) s += " + " + std::to_string(-a);
  return s + tail + ")";
}

void need(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorKind::InvalidArgument, msg);
}

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"eisenstein", "pairs", "triple", "collision", "chain"};
  return names;
}

std::string example_expression(const std::string& family, int g, std::uint32_t p) {
  std::vector<std::string> f;
  std::int64_t residues = 0;
  if (family == "eisenstein") {
    need(g >= 1, "eisenstein needs g >= 1");
    return "x^" + std::to_string(2 * g + 2) + " - t";
  } else if (family == "pairs") {
    need(g >= 1, "pairs needs g >= 1");
    for (int i = 1; i <= g; ++i) {
      f.push_back(lin(i));
      f.push_back(lin(i, " + t"));
    }
    residues = g;
  } else if (family == "triple") {
    need(g >= 1, "triple needs g >= 1");
    f = {lin(1), lin(1, " + t"), lin(1, " - t")};
    for (int i = 2; i <= 2 * g - 1; ++i) f.push_back(lin(i));
    residues = std::max(1, 2 * g - 1);
  } else if (family == "collision") {
    f = {lin(1), lin(2), lin(3), "(x - t^2)", "(x - 2*t^2)", "(x - 3*t^2)"};
    residues = 3;
  } else if (family == "chain") {
    need(g >= 1, "chain needs g >= 1");
    f = {"x", "(x + 1)"};
    for (int i = 1; i <= g; ++i) f.push_back("(x - " + std::to_string(i + 1) + "*t)");
    for (int i = 1; i <= g; ++i) f.push_back("(x - 1 - " + std::to_string(i + 1) + "*t)");
    residues = g + 2;
  } else {
    fail(ErrorKind::InvalidArgument, "unknown family '" + family + "'");
  }
  need(static_cast<std::int64_t>(p) > residues + 1, "prime too small for distinct residues");
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "*" : "") + f[i];
  return s;
}

BiPoly example_family(const std::string& family, int g, std::uint32_t p) {
  return parse_expression(example_expression(family, g, p), p);
}

}  // namespace cdineq
