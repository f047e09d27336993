#include "tcvrp/mps.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tcvrp/error.hpp"

namespace tcvrp::mps {

namespace {

using model::Constraint;
using model::Family;
using model::MipModel;
using model::Sense;
using model::Term;
using model::VarType;

constexpr const char* kObjective = "obj";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// Fields start at columns 2, 5, 15, 25, 40 and 50.
std::string line(const std::string& f1, const std::string& f2,
                 const std::string& f3 = "", const std::string& f4 = "") {
  std::string s = " " + pad(f1, 2) + " " + pad(f2, 8);
  if (!f3.empty()) s += "  " + pad(f3, 8) + "  " + f4;
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

char sense_code(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return 'L';
    case Sense::kGreaterEqual: return 'G';
    case Sense::kEqual: return 'E';
  }
  return 'E';
}

Family family_of(const std::string& row) {
  if (row.rfind("r_", 0) == 0) return Family::kRouting;
  if (row.rfind("c_", 0) == 0) return Family::kCapacity;
  if (row.rfind("t_", 0) == 0) return Family::kTime;
  if (row.rfind("d_", 0) == 0) return Family::kDistance;
  fail(ErrorCode::kInput, "row '" + row + "' has no known family prefix");
}

double parse_num(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::kInput, "bad MPS number '" + s + "'");
  }
  return v;
}

}  // namespace

void write(const MipModel& m, std::ostream& out) {
  out << "NAME          " << m.name << "\n";
  out << "ROWS\n";
  out << line("N", kObjective) << "\n";
  for (const Constraint& c : m.constraints) {
    out << line(std::string(1, sense_code(c.sense)), c.name) << "\n";
  }

  // Column-major view of the constraint matrix.
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(m.variables.size());
  for (std::size_t r = 0; r < m.constraints.size(); ++r) {
    for (const Term& t : m.constraints[r].terms) {
      cols[static_cast<std::size_t>(t.var)].emplace_back(r, t.coef);
    }
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t v = 0; v < m.variables.size(); ++v) {
    const auto& var = m.variables[v];
    const bool integral = var.type != VarType::kContinuous;
    if (integral != in_int) {
      out << "    " << pad("M" + std::to_string(marker++), 8) << "  'MARKER'"
          << "                 " << (integral ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = integral;
    }
    out << line("", var.name, kObjective, num(var.objective)) << "\n";
    for (const auto& [r, coef] : cols[v]) {
      out << line("", var.name, m.constraints[r].name, num(coef)) << "\n";
    }
  }
  if (in_int) {
    out << "    " << pad("M" + std::to_string(marker++), 8) << "  'MARKER'"
        << "                 'INTEND'\n";
  }

  out << "RHS\n";
  for (const Constraint& c : m.constraints) {
    if (c.rhs != 0.0) out << line("", "RHS", c.name, num(c.rhs)) << "\n";
  }

  out << "BOUNDS\n";
  for (const auto& var : m.variables) {
    if (var.type == VarType::kBinary) {
      out << line("BV", "BND", var.name) << "\n";
      continue;
    }
    if (var.lower != 0.0) {
      if (std::isinf(var.lower)) {
        out << line("MI", "BND", var.name) << "\n";
      } else {
        out << line("LO", "BND", var.name, num(var.lower)) << "\n";
      }
    }
    if (std::isinf(var.upper)) {
      if (var.type == VarType::kInteger) out << line("PL", "BND", var.name) << "\n";
    } else {
      out << line("UP", "BND", var.name, num(var.upper)) << "\n";
    }
  }
  out << "ENDATA\n";
}

std::string to_string(const MipModel& m) {
  std::ostringstream s;
  write(m, s);
  return s.str();
}

void export_mps(const MipModel& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write(m, f);
  f.flush();
  if (!f) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

MipModel read(std::istream& in) {
  MipModel m;
  std::unordered_map<std::string, std::size_t> rows;
  std::unordered_map<std::string, std::size_t> vars;
  std::string section;
  std::string text;
  bool in_int = false;
  int lineno = 0;
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::kInput, "MPS line " + std::to_string(lineno) + ": " + why);
  };
  auto var_of = [&](const std::string& name) -> model::Variable& {
    auto it = vars.find(name);
    if (it == vars.end()) bad("unknown column '" + name + "'");
    return m.variables[it->second];
  };

  while (std::getline(in, text)) {
    ++lineno;
    if (text.empty() || text[0] == '*') continue;
    std::istringstream ls(text);
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    if (f.empty()) continue;
    if (text[0] != ' ') {
      section = f[0];
      if (section == "NAME") {
        m.name = f.size() > 1 ? f[1] : "";
      } else if (section == "ENDATA") {
        break;
      } else if (section != "ROWS" && section != "COLUMNS" &&
                 section != "RHS" && section != "BOUNDS") {
        bad("unsupported section " + section);
      }
      continue;
    }
    if (section == "ROWS") {
      if (f.size() != 2) bad("ROWS entry needs two fields");
      if (f[0] == "N") {
        if (f[1] != kObjective) bad("objective row must be named obj");
        continue;
      }
      Constraint c;
      c.name = f[1];
      c.family = family_of(c.name);
      if (f[0] == "L") c.sense = Sense::kLessEqual;
      else if (f[0] == "G") c.sense = Sense::kGreaterEqual;
      else if (f[0] == "E") c.sense = Sense::kEqual;
      else bad("unknown row type " + f[0]);
      rows.emplace(c.name, m.constraints.size());
      m.constraints.push_back(std::move(c));
    } else if (section == "COLUMNS") {
      if (f.size() == 3 && f[1] == "'MARKER'") {
        if (f[2] == "'INTORG'") in_int = true;
        else if (f[2] == "'INTEND'") in_int = false;
        else bad("unknown marker " + f[2]);
        continue;
      }
      if (f.size() != 3 && f.size() != 5) bad("COLUMNS entry needs 3 or 5 fields");
      auto it = vars.find(f[0]);
      if (it == vars.end()) {
        it = vars.emplace(f[0], m.variables.size()).first;
        model::Variable v;
        v.name = f[0];
        v.type = in_int ? VarType::kInteger : VarType::kContinuous;
        m.variables.push_back(std::move(v));
      }
      const int vi = static_cast<int>(it->second);
      for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
        const double coef = parse_num(f[p + 1]);
        if (f[p] == kObjective) {
          m.variables[it->second].objective = coef;
          continue;
        }
        auto r = rows.find(f[p]);
        if (r == rows.end()) bad("unknown row '" + f[p] + "'");
        m.constraints[r->second].terms.push_back({vi, coef});
      }
    } else if (section == "RHS") {
      if (f.size() != 3 && f.size() != 5) bad("RHS entry needs 3 or 5 fields");
      for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
        auto r = rows.find(f[p]);
        if (r == rows.end()) bad("unknown row '" + f[p] + "'");
        m.constraints[r->second].rhs = parse_num(f[p + 1]);
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) bad("BOUNDS entry needs at least 3 fields");
      model::Variable& v = var_of(f[2]);
      const std::string& type = f[0];
      auto value = [&] {
        if (f.size() != 4) bad(type + " bound needs a value");
        return parse_num(f[3]);
      };
      constexpr double kInf = std::numeric_limits<double>::infinity();
      if (type == "BV") {
        v.type = VarType::kBinary;
        v.lower = 0.0;
        v.upper = 1.0;
      } else if (type == "PL") {
        v.upper = kInf;
      } else if (type == "MI") {
        v.lower = -kInf;
      } else if (type == "UP") {
        v.upper = value();
      } else if (type == "LO") {
        v.lower = value();
      } else if (type == "FX") {
        v.lower = v.upper = value();
      } else {
        bad("unsupported bound type " + type);
      }
    } else {
      bad("data before any section");
    }
  }
  return m;
}

MipModel parse_mps(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return read(f);
}

}  // namespace tcvrp::mps
