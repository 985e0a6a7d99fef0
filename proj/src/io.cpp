#include "ym/io.hpp"

#include <sstream>

namespace ym {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what, 0);
}

double number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_constant(v.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what(), e.offset(), e.expected());
    } catch (const DomainError& e) {
      schema_error(where, e.what());
    }
  }
  schema_error(where, "expected a number or a constant expression string");
}

Interval pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema_error(where, "expected [lo, hi]");
  return Interval(number(v[0], where + "[0]"), number(v[1], where + "[1]"));
}

const json& field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

json number_json(double v) { return v; }

}  // namespace

PiecewiseFunction function_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("document", "expected an object");
  const Interval omega = pair(field(doc, "omega", "document"), "omega");
  const json& list = field(doc, "pieces", "document");
  if (!list.is_array()) schema_error("pieces", "expected an array");
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "pieces[" + std::to_string(i) + "]";
    const json& item = list[i];
    if (!item.is_object()) schema_error(where, "expected an object");
    const Interval domain = pair(field(item, "interval", where), where + ".interval");
    const bool has_const = item.contains("const");
    const bool has_expr = item.contains("expr");
    if (has_const == has_expr) schema_error(where, "needs exactly one of \"const\" and \"expr\"");
    if (has_const) {
      pieces.push_back(Piece::constant(domain, number(item["const"], where + ".const")));
      continue;
    }
    const json& src = item["expr"];
    if (!src.is_string()) schema_error(where + ".expr", "expected a string");
    Expr expr;
    try {
      expr = parse(src.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ".expr: " + e.what(), e.offset(), e.expected());
    }
    const json& mono = field(item, "monotone", where);
    const std::string dir = mono.is_string() ? mono.get<std::string>() : "";
    if (dir != "inc" && dir != "dec") schema_error(where + ".monotone", "expected \"inc\" or \"dec\"");
    pieces.push_back(Piece::monotone(domain, expr,
                                     dir == "inc" ? Direction::increasing : Direction::decreasing));
  }
  return PiecewiseFunction(omega, std::move(pieces));
}

PiecewiseFunction load_function(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the 1-based position of the offending character.
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError("malformed JSON", offset);
  }
  return function_from_json(doc);
}

json to_json(const PiecewiseFunction& pf) {
  json pieces = json::array();
  for (const Piece& p : pf.pieces()) {
    json item;
    item["interval"] = {number_json(p.domain().lo()), number_json(p.domain().hi())};
    if (p.is_constant()) {
      item["const"] = p.constant_value();
    } else {
      const MonotoneBody& body = p.monotone_body();
      item["expr"] = render(body.expr);
      item["monotone"] = body.direction == Direction::increasing ? "inc" : "dec";
    }
    pieces.push_back(std::move(item));
  }
  json doc;
  doc["omega"] = {number_json(pf.omega().lo()), number_json(pf.omega().hi())};
  doc["pieces"] = std::move(pieces);
  return doc;
}

json to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const IdentityCheck& c : report.checks) {
    checks.push_back(
        {{"beta", c.beta}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"residual", c.residual}});
  }
  return {{"checks", std::move(checks)},
          {"max_residual", report.max_residual},
          {"tolerance", report.tolerance},
          {"pass", report.pass}};
}

json to_json(const OracleReport& report) {
  return {{"n_samples", report.n_samples},
          {"ks_distance", report.ks_distance},
          {"bound", report.bound},
          {"pass", report.pass}};
}

std::string atoms_csv(const YoungMeasure& ym) {
  std::ostringstream out;
  out << "location,weight\n";
  for (const Atom& a : ym.atoms())
    out << format_double(a.location) << ',' << format_double(a.weight) << '\n';
  return out.str();
}

namespace {

bool singular_at(const YoungMeasure& ym, double y) {
  try {
    (void)density_at(ym, y);
    return false;
  } catch (const SingularityError&) {
    return true;
  } catch (const DomainError&) {
    return true;
  }
}

}  // namespace

std::string density_csv(const YoungMeasure& ym, std::size_t grid) {
  if (grid < 2) throw ValidationError(ValidationIssue::precondition, "grid size must be at least 2");
  const Range& k = ym.k_range();
  const double guard = 1e-9 * k.length();
  const double lo = singular_at(ym, k.lo) ? k.lo + guard : k.lo;
  const double hi = singular_at(ym, k.hi) ? k.hi - guard : k.hi;
  std::ostringstream out;
  out << "y,density,cdf\n";
  const double step = (hi - lo) / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    const double y = i + 1 == grid ? hi : lo + static_cast<double>(i) * step;
    out << format_double(y) << ',' << format_double(density_at(ym, y)) << ','
        << format_double(cdf(ym, y)) << '\n';
  }
  return out.str();
}

}  // namespace ym
