#include "cdineq/report.hpp"

#include <sstream>

namespace cdineq {

using nlohmann::json;

namespace {

json pair_json(const Orbit& o) { return json{{"n", o.n}, {"lambda", qinf_str(o.lambda)}}; }

json witness_json(const Witness& w) {
  return json{{"path", w.path}, {"level", w.level}, {"point", w.point},
              {"weight", w.weight}, {"weight_tilde", w.weight_tilde}, {"reason", w.reason}};
}

}  // namespace

json point_to_json(const RootSystem& rs, const ClusterPoint& P) {
  json j{{"residue", P.label()}, {"weight", P.wt}, {"weight_tilde", P.wt_tilde}, {"bad", P.bad}};
  if (!P.at_infinity) {
    json less = json::array(), geq = json::array();
    for (int i : P.less) less.push_back(pair_json(rs.orbits[i]));
    for (int i : P.geq) geq.push_back(pair_json(rs.orbits[i]));
    j["factors_lt1"] = less;
    j["factors_ge1"] = geq;
    j["b_P"] = P.b_P;
    j["deg_inf"] = P.deg_inf;
    j["deg_sm"] = P.deg_sm;
    j["d_nod"] = P.d_nod;
    j["d_sm"] = P.d_sm;
  }
  return j;
}

json node_to_json(const InductionNode& n) {
  json pts = json::array();
  for (const auto& P : n.points) {
    json j{{"residue", P.label()}, {"weight", P.wt}, {"bad", P.bad}};
    if (!P.at_infinity) j["b_P"] = P.b_P;
    pts.push_back(j);
  }
  json orbits = json::array();
  for (auto& [nn, lam] : n.orbits) orbits.push_back(json{{"n", nn}, {"lambda", lam}});
  json children = json::array();
  for (const auto& c : n.children)
    children.push_back(json{{"point", n.points[c.point].label()}, {"kind", c.kind}, {"degree", c.degree},
                            {"b", c.b}, {"node", c.node}});
  json j{{"path", n.path},         {"level", n.level},         {"degree", n.degree},
         {"b", n.b},               {"orbits", orbits},         {"points", pts},
         {"base_case", n.base},    {"conductor", n.conductor}, {"disc", n.disc},
         {"children", children}};
  if (!n.base) {
    json flags = json::array();
    for (bool f : n.terms.point_equal) flags.push_back(f);
    j["lhs"] = n.terms.lhs;
    j["rhs"] = n.terms.rhs;
    j["step_equal"] = n.terms.equal;
    j["point_equal"] = flags;
  }
  if (n.disc_tree) j["disc_tree"] = *n.disc_tree;
  if (n.disc_direct) j["disc_direct"] = *n.disc_direct;
  return j;
}

json make_report(const RunInfo& info, const ExactPoly& f, const RootSystem& rs, const InductionReport& r) {
  const int deg = f.degree();
  json doc;
  doc["input"] = json{{"expression", info.expression}, {"prime", info.prime}};
  doc["polynomial"] = poly_to_string(f.g);
  doc["degree"] = deg;
  doc["genus"] = (deg + 1) / 2 - 1;
  doc["b"] = f.b;
  doc["d"] = f.parity();
  doc["minus_art"] = r.minus_art;
  doc["minus_art_model"] = "X^f";
  doc["disc_valuation"] = r.disc;
  doc["inequality_holds"] = r.minus_art <= r.disc;
  json wits = json::array();
  for (const auto& w : r.verdict.witnesses) wits.push_back(witness_json(w));
  doc["equality"] = json{{"equal", r.verdict.equal}, {"witnesses", wits}};
  json pts = json::array();
  for (const auto& P : classify(rs)) pts.push_back(point_to_json(rs, P));
  doc["points"] = pts;
  json ledger = json::array();
  for (const auto& n : r.nodes) ledger.push_back(node_to_json(n));
  doc["ledger"] = ledger;
  doc["recursion_depth"] = r.depth;
  json trace = json::array();
  for (const auto& n : r.nodes) trace.push_back(json{{"path", n.path}, {"degree", n.degree}, {"disc", n.disc}});
  doc["measure_trace"] = trace;
  doc["measure_ok"] = r.measure_ok;
  json ext = json::array();
  for (const auto& fi : rs.tower->registered()) ext.push_back(fi.degree);
  doc["field_extensions"] = ext;
  doc["notes"] = r.notes;
  if (info.trace)
    doc["timings_ms"] = json{{"parse", info.parse_ms}, {"roots", info.roots_ms}, {"induction", info.induct_ms}};
  return doc;
}

std::string report_to_text(const json& doc) {
  std::ostringstream os;
  os << "polynomial      " << doc["polynomial"].get<std::string>() << "  (p = " << doc["input"]["prime"] << ")\n";
  os << "degree          " << doc["degree"] << "  genus " << doc["genus"] << "  b " << doc["b"] << "  d " << doc["d"]
     << "\n";
  os << "-Art(X^f)       " << doc["minus_art"] << "\n";
  os << "v(disc)         " << doc["disc_valuation"] << "\n";
  os << "inequality      " << (doc["inequality_holds"].get<bool>() ? "holds" : "FAILS") << "\n";
  os << "equality        " << (doc["equality"]["equal"].get<bool>() ? "yes" : "no") << "\n";
  for (const auto& w : doc["equality"]["witnesses"])
    os << "  witness       " << w["path"].get<std::string>() << " at " << w["point"].get<std::string>() << ": "
       << w["reason"].get<std::string>() << "\n";
  os << "points\n";
  for (const auto& P : doc["points"]) {
    os << "  " << P["residue"].get<std::string>() << "  wt " << P["weight"] << (P["bad"].get<bool>() ? "  bad" : "");
    if (P.contains("factors_lt1")) {
      os << "  (n,lambda):";
      for (const auto* key : {"factors_lt1", "factors_ge1"})
        for (const auto& q : P[key]) os << " (" << q["n"] << "," << q["lambda"].get<std::string>() << ")";
      os << "  b_P " << P["b_P"];
    }
    os << "\n";
  }
  os << "steps\n";
  for (const auto& n : doc["ledger"]) {
    os << "  " << n["path"].get<std::string>() << "  deg " << n["degree"] << "  b " << n["b"];
    if (n["base_case"].get<bool>())
      os << "  base";
    else
      os << "  lhs " << n["lhs"] << "  rhs " << n["rhs"];
    os << "  cond " << n["conductor"] << "  disc " << n["disc"] << "\n";
  }
  for (const auto& s : doc["notes"]) os << "note: " << s.get<std::string>() << "\n";
  return os.str();
}

}  // namespace cdineq
