#pragma once

// The arc-flow MIP for the TCVRP: explicit construction, evaluation of a
// variable assignment, and route-level validation of candidate solutions.

#include <limits>
#include <string>
#include <vector>

#include "tcvrp/instance.hpp"
#include "tcvrp/matrix.hpp"
#include "tcvrp/solution.hpp"

namespace tcvrp::model {

enum class VarType { kContinuous, kInteger, kBinary };
enum class Sense { kLessEqual, kGreaterEqual, kEqual };
enum class Family { kRouting, kCapacity, kTime, kDistance };

const char* family_name(Family f);

struct Variable {
  std::string name;
  VarType type = VarType::kContinuous;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double objective = 0.0;

  bool operator==(const Variable&) const = default;
};

struct Term {
  int var = 0;
  double coef = 0.0;

  bool operator==(const Term&) const = default;
};

struct Constraint {
  std::string name;
  Family family = Family::kRouting;
  std::vector<Term> terms;  // sorted by variable index, no duplicates
  Sense sense = Sense::kEqual;
  double rhs = 0.0;

  bool operator==(const Constraint&) const = default;
};

struct MipModel {
  std::string name = "TCVRP";
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;

  int find_variable(const std::string& name) const;  // -1 when absent
  std::size_t count(Family f) const;

  bool operator==(const MipModel&) const = default;
};

// Variables are declared in blocks x, y, z, z' (only with D-bar), k; each
// block lists ordered pairs (i, j), i != j, row-major over i then j.
MipModel build_mip(const TcvrpInstance& inst);

// Index of x_i_j / y_i_j / z_i_j / zp_i_j within build_mip's variable list.
struct VariableLayout {
  int nodes = 0;
  bool has_distance = false;
  int arc(int i, int j) const;  // position of (i, j) within a block
  int arcs() const { return nodes * (nodes - 1); }
  int x(int i, int j) const { return arc(i, j); }
  int y(int i, int j) const { return arcs() + arc(i, j); }
  int z(int i, int j) const { return 2 * arcs() + arc(i, j); }
  int zp(int i, int j) const { return 3 * arcs() + arc(i, j); }
  int k() const { return (has_distance ? 4 : 3) * arcs(); }
  int size() const { return k() + 1; }
};

VariableLayout layout(const TcvrpInstance& inst);

// Values of every model variable implied by a set of routes: x counts arc
// uses, y the packages delivered so far on leaving i, z / z' the elapsed
// time / distance on arrival at j, k the number of routes.
std::vector<double> induce_assignment(const TcvrpInstance& inst,
                                      const std::vector<std::vector<int>>& routes);

// Indices of constraints violated by `values` beyond `tol`, plus bound and
// integrality violations reported as -1 - variable index.
std::vector<int> violated(const MipModel& model,
                          const std::vector<double>& values, double tol = 1e-6);

double objective_value(const MipModel& model, const std::vector<double>& values);

struct Violation {
  std::string family;  // structure, partition, capacity, time, distance
  int route = -1;      // -1 when not tied to a single route
  double margin = 0.0;  // amount by which the bound is exceeded
  std::string detail;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;
  double vmt_mi = 0.0;  // recomputed from the instance
  double vht_min = 0.0;
};

// Recomputes every route from the instance. Throws Error(kInput) when a route
// names a node outside the instance.
ValidationReport validate(const TcvrpInstance& inst,
                          const std::vector<std::vector<int>>& routes,
                          double tol = 1e-6);
ValidationReport validate(const TcvrpInstance& inst, const Solution& sol,
                          double tol = 1e-6);

// Decodes x values (threshold 0.5) into routes by following successors from
// the depot. Throws Error(kInput) when degrees are wrong or a customer-only
// cycle exists.
Solution solution_from_arcs(const TcvrpInstance& inst, const Matrix& x);

// Inverse of solution_from_arcs.
Matrix arcs_from_solution(const TcvrpInstance& inst,
                          const std::vector<std::vector<int>>& routes);

}  // namespace tcvrp::model
