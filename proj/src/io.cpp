#include "spinrec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "spinrec/errors.hpp"

namespace spinrec::io {

namespace {

[[noreturn]] void parse_error(const std::string& message) {
  throw Error(ErrorKind::ParseError, message);
}

double number_at(const Json& value, const std::string& where) {
  if (!value.is_number()) parse_error(where + ": expected a number");
  return value.get<double>();
}

int integer_at(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) parse_error(where + ": expected an integer");
  return value.get<int>();
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  std::string s(buffer);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostream& out, const Json& value, int indent, int depth) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << Json(key).dump() << (indent < 0 ? ":" : ": ");
        write(out, item, indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      // Arrays of numbers stay on one line (matrix rows).
      const bool flat = std::all_of(value.begin(), value.end(),
                                    [](const Json& v) { return v.is_primitive(); });
      out << '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << (flat ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        write(out, item, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float:
      out << format_double(value.get<double>());
      return;
    default:
      out << value.dump();
      return;
  }
}

}  // namespace

std::string blade_label(BladeMask mask, const Signature& sig) {
  std::string label;
  for (int index : indices_from_mask(mask)) {
    if (sig.n() >= 10 && !label.empty()) label += ',';
    label += std::to_string(index);
  }
  return label;
}

BladeMask parse_blade_label(std::string_view label, const Signature& sig) {
  std::vector<int> indices;
  const bool comma_separated = label.find(',') != std::string_view::npos || sig.n() >= 10;
  if (comma_separated) {
    std::size_t start = 0;
    while (start <= label.size() && !label.empty()) {
      const std::size_t end = std::min(label.find(',', start), label.size());
      const std::string_view token = label.substr(start, end - start);
      if (token.empty()) parse_error("empty generator index in blade label '" + std::string(label) + "'");
      int value = 0;
      for (char c : token) {
        if (c < '0' || c > '9') parse_error("bad blade label '" + std::string(label) + "'");
        value = value * 10 + (c - '0');
        if (value > kMaxDimension) parse_error("generator index too large in '" + std::string(label) + "'");
      }
      indices.push_back(value);
      start = end + 1;
    }
  } else {
    for (char c : label) {
      if (c < '0' || c > '9') parse_error("bad blade label '" + std::string(label) + "'");
      indices.push_back(c - '0');
    }
  }
  try {
    return mask_from_indices(indices, sig);
  } catch (const Error&) {
    parse_error("blade label '" + std::string(label) + "' is not an ascending index list within 1.." +
                std::to_string(sig.n()));
  }
}

Json multivector_to_json(const Multivector& m) {
  Json out = Json::object();
  for (BladeMask i = 0; i < m.size(); ++i) {
    if (m[i] != 0.0) out[blade_label(i, m.signature())] = m[i];
  }
  return out;
}

Multivector multivector_from_json(const Json& blades, const Signature& sig) {
  if (!blades.is_object()) parse_error("multivector must be a JSON object of blade coefficients");
  Multivector m(sig);
  for (const auto& [label, value] : blades.items()) {
    const BladeMask mask = parse_blade_label(label, sig);
    m[mask] += number_at(value, "blade '" + label + "'");
  }
  return m;
}

Signature signature_from_json(const Json& doc, std::optional<Signature> fallback) {
  if (doc.is_object() && (doc.contains("p") || doc.contains("q"))) {
    if (!doc.contains("p") || !doc.contains("q")) parse_error("signature needs both p and q");
    try {
      return Signature(integer_at(doc["p"], "p"), integer_at(doc["q"], "q"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError) throw;
      parse_error(e.what());
    }
  }
  if (!fallback) parse_error("no signature given (add p/q to the file or pass --signature)");
  return *fallback;
}

MatrixDocument matrix_from_json(const Json& doc, std::optional<Signature> fallback) {
  if (!doc.is_object() || !doc.contains("entries")) parse_error("matrix file needs an 'entries' array");
  const Signature sig = signature_from_json(doc, fallback);
  const Json& rows = doc["entries"];
  const int n = sig.n();
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    parse_error("'entries' must hold " + std::to_string(n) + " rows");
  }
  SquareMatrix entries(n);
  for (int a = 0; a < n; ++a) {
    const Json& row = rows[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      parse_error("row " + std::to_string(a + 1) + " must hold " + std::to_string(n) + " entries");
    }
    for (int b = 0; b < n; ++b) {
      entries(a, b) = number_at(row[static_cast<std::size_t>(b)],
                                "entry (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")");
    }
  }
  return {sig, entries};
}

MatrixDocument matrix_from_csv(std::string_view text, const Signature& sig) {
  std::vector<double> values;
  int rows = 0;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream cells(line);
    std::string cell;
    int cols = 0;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        parse_error("bad CSV number '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
        parse_error("bad CSV number '" + cell + "'");
      }
      values.push_back(value);
      ++cols;
    }
    if (cols != sig.n()) parse_error("CSV row " + std::to_string(rows + 1) + " has " +
                                     std::to_string(cols) + " columns, expected " +
                                     std::to_string(sig.n()));
    ++rows;
  }
  if (rows != sig.n()) parse_error("CSV has " + std::to_string(rows) + " rows, expected " +
                                   std::to_string(sig.n()));
  return {sig, SquareMatrix(sig.n(), std::move(values))};
}

Multivector rotor_from_json(const Json& doc, std::optional<Signature> fallback) {
  if (!doc.is_object()) parse_error("rotor file must be a JSON object");
  const Signature sig = signature_from_json(doc, fallback);
  if (doc.contains("multivector")) return multivector_from_json(doc["multivector"], sig);
  if (doc.contains("S")) return multivector_from_json(doc["S"], sig);
  parse_error("rotor file needs a 'multivector' (or 'S') object");
}

std::vector<Multivector> frames_from_json(const Json& doc, std::optional<Signature> fallback) {
  const Json* list = &doc;
  Signature sig = fallback ? *fallback : Signature(1, 0);
  if (doc.is_object()) {
    sig = signature_from_json(doc, fallback);
    if (!doc.contains("frames")) parse_error("frames file needs a 'frames' array");
    list = &doc["frames"];
  } else if (!fallback) {
    parse_error("no signature given (add p/q to the file or pass --signature)");
  }
  if (!list->is_array()) parse_error("'frames' must be an array of multivectors");
  std::vector<Multivector> frames;
  for (const Json& item : *list) frames.push_back(multivector_from_json(item, sig));
  return frames;
}

Json matrix_to_json(const OrthoMatrix& p) {
  Json doc;
  doc["p"] = p.signature().p();
  doc["q"] = p.signature().q();
  Json rows = Json::array();
  for (int a = 1; a <= p.n(); ++a) {
    Json row = Json::array();
    for (int b = 1; b <= p.n(); ++b) row.push_back(p.at(a, b));
    rows.push_back(std::move(row));
  }
  doc["entries"] = std::move(rows);
  return doc;
}

Json component_to_json(const GroupComponent& g) {
  Json doc;
  doc["det"] = g.det;
  doc["top_minor"] = g.top_minor;
  doc["bottom_minor"] = g.bottom_minor;
  doc["det_sign"] = g.det_sign;
  doc["top_minor_sign"] = g.top_minor_sign;
  doc["bottom_minor_sign"] = g.bottom_minor_sign;
  Json groups = Json::array();
  if (g.in_O) groups.push_back("O");
  if (g.in_SO) groups.push_back("SO");
  if (g.in_O_plus) groups.push_back("O+");
  if (g.in_O_minus) groups.push_back("O-");
  if (g.in_SO_plus) groups.push_back("SO+");
  doc["groups"] = std::move(groups);
  return doc;
}

Json spin_tags_to_json(const SpinGroupTags& tags) {
  Json groups = Json::array();
  for (const char* name : tag_names(tags)) groups.push_back(name);
  return groups;
}

Json rotor_result_to_json(const RotorResult& r) {
  Json doc;
  doc["p"] = r.S.signature().p();
  doc["q"] = r.S.signature().q();
  doc["S"] = multivector_to_json(r.S);
  doc["alpha"] = r.alpha;
  doc["residual"] = r.residual;
  doc["groups"] = spin_tags_to_json(r.groups);
  if (r.ill_conditioned) doc["warnings"] = Json::array({"ill-conditioned: M is close to zero"});
  return doc;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const Json& doc, int indent) {
  std::ostringstream out;
  write(out, doc, indent, 0);
  return out.str();
}

}  // namespace spinrec::io
