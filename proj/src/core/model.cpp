#include "tcvrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tcvrp/error.hpp"

namespace tcvrp::model {

namespace {

std::string pair_name(const char* prefix, int i, int j) {
  return std::string(prefix) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

class Builder {
 public:
  explicit Builder(MipModel& m) : m_(m) {}

  void add(std::string name, Family family, std::vector<Term> terms,
           Sense sense, double rhs) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    for (const Term& t : terms) {
      if (!merged.empty() && merged.back().var == t.var) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    m_.constraints.push_back(
        {std::move(name), family, std::move(merged), sense, rhs});
  }

 private:
  MipModel& m_;
};

// Emits the time (or distance) flow family. `cost(i, j)` is the arc
// coefficient, `service(i)` the node term and `limit` the route bound.
template <typename Cost, typename Service, typename Var>
void flow_family(Builder& b, const char* prefix, Family family, int nodes,
                 Cost cost, Service service, Var var, const VariableLayout& lay,
                 double limit) {
  const std::string p(prefix);
  for (int i = 1; i < nodes; ++i) {
    std::vector<Term> terms;
    for (int j = 0; j < nodes; ++j) {
      if (j == i) continue;
      terms.push_back({var(i, j), 1.0});
      terms.push_back({var(j, i), -1.0});
      terms.push_back({lay.x(i, j), -(cost(i, j) + service(i))});
    }
    b.add(p + "_flow_" + std::to_string(i), family, std::move(terms),
          Sense::kEqual, 0.0);
  }
  for (int i = 0; i < nodes; ++i) {
    for (int j = 1; j < nodes; ++j) {
      if (i == j) continue;
      b.add(pair_name((p + "_ub").c_str(), i, j), family,
            {{var(i, j), 1.0}, {lay.x(i, j), -(limit - cost(j, 0))}},
            Sense::kLessEqual, 0.0);
    }
  }
  for (int i = 1; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      if (i == j) continue;
      b.add(pair_name((p + "_lb").c_str(), i, j), family,
            {{var(i, j), 1.0},
             {lay.x(i, j), -(cost(i, j) + cost(0, i) + service(i))}},
            Sense::kGreaterEqual, 0.0);
    }
  }
  for (int i = 1; i < nodes; ++i) {
    b.add(p + "_ret_" + std::to_string(i), family,
          {{var(i, 0), 1.0}, {lay.x(i, 0), -limit}}, Sense::kLessEqual, 0.0);
  }
  for (int i = 1; i < nodes; ++i) {
    b.add(p + "_start_" + std::to_string(i), family,
          {{var(0, i), 1.0}, {lay.x(0, i), -cost(0, i)}}, Sense::kEqual, 0.0);
  }
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::kRouting: return "routing";
    case Family::kCapacity: return "capacity";
    case Family::kTime: return "time";
    case Family::kDistance: return "distance";
  }
  return "?";
}

int MipModel::find_variable(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::size_t MipModel::count(Family f) const {
  return static_cast<std::size_t>(std::count_if(
      constraints.begin(), constraints.end(),
      [f](const Constraint& c) { return c.family == f; }));
}

int VariableLayout::arc(int i, int j) const {
  // Row i holds nodes - 1 entries (every j except i).
  return i * (nodes - 1) + (j < i ? j : j - 1);
}

VariableLayout layout(const TcvrpInstance& inst) {
  return {inst.nodes(), inst.max_dist().has_value()};
}

MipModel build_mip(const TcvrpInstance& inst) {
  const VariableLayout lay = layout(inst);
  const int nodes = lay.nodes;
  MipModel m;
  m.variables.resize(static_cast<std::size_t>(lay.size()));
  auto declare = [&](int idx, std::string name, VarType type, double upper,
                     double obj) {
    m.variables[static_cast<std::size_t>(idx)] = {std::move(name), type, 0.0,
                                                  upper, obj};
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      if (i == j) continue;
      declare(lay.x(i, j), pair_name("x", i, j), VarType::kBinary, 1.0,
              inst.dist(i, j));
      declare(lay.y(i, j), pair_name("y", i, j), VarType::kContinuous, kInf, 0.0);
      declare(lay.z(i, j), pair_name("z", i, j), VarType::kContinuous, kInf, 0.0);
      if (lay.has_distance) {
        declare(lay.zp(i, j), pair_name("zp", i, j), VarType::kContinuous, kInf,
                0.0);
      }
    }
  }
  declare(lay.k(), "k", VarType::kInteger, kInf, 0.0);

  Builder b(m);
  // Routing: unit in/out degree on customers, k routes leave and enter 0.
  for (int j = 1; j < nodes; ++j) {
    std::vector<Term> t;
    for (int i = 0; i < nodes; ++i) {
      if (i != j) t.push_back({lay.x(i, j), 1.0});
    }
    b.add("r_in_" + std::to_string(j), Family::kRouting, std::move(t),
          Sense::kEqual, 1.0);
  }
  for (int i = 1; i < nodes; ++i) {
    std::vector<Term> t;
    for (int j = 0; j < nodes; ++j) {
      if (i != j) t.push_back({lay.x(i, j), 1.0});
    }
    b.add("r_out_" + std::to_string(i), Family::kRouting, std::move(t),
          Sense::kEqual, 1.0);
  }
  {
    std::vector<Term> out{{lay.k(), -1.0}};
    std::vector<Term> in{{lay.k(), -1.0}};
    for (int i = 1; i < nodes; ++i) {
      out.push_back({lay.x(0, i), 1.0});
      in.push_back({lay.x(i, 0), 1.0});
    }
    b.add("r_depot_out", Family::kRouting, std::move(out), Sense::kEqual, 0.0);
    b.add("r_depot_in", Family::kRouting, std::move(in), Sense::kEqual, 0.0);
  }

  // Capacity: y only on used arcs, and each customer adds N_i to the flow.
  const double q = static_cast<double>(inst.capacity());
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      if (i == j) continue;
      b.add(pair_name("c_link", i, j), Family::kCapacity,
            {{lay.y(i, j), 1.0}, {lay.x(i, j), -q}}, Sense::kLessEqual, 0.0);
    }
  }
  for (int i = 1; i < nodes; ++i) {
    std::vector<Term> t;
    for (int j = 0; j < nodes; ++j) {
      if (i == j) continue;
      t.push_back({lay.y(i, j), 1.0});
      t.push_back({lay.y(j, i), -1.0});
    }
    b.add("c_flow_" + std::to_string(i), Family::kCapacity, std::move(t),
          Sense::kEqual, static_cast<double>(inst.demand(i)));
  }

  flow_family(
      b, "t", Family::kTime, nodes,
      [&](int i, int j) { return inst.time(i, j); },
      [&](int i) { return inst.service(i); },
      [&](int i, int j) { return lay.z(i, j); }, lay, inst.max_time());
  if (lay.has_distance) {
    flow_family(
        b, "d", Family::kDistance, nodes,
        [&](int i, int j) { return inst.dist(i, j); },
        [](int) { return 0.0; },
        [&](int i, int j) { return lay.zp(i, j); }, lay, *inst.max_dist());
  }
  return m;
}

std::vector<double> induce_assignment(
    const TcvrpInstance& inst, const std::vector<std::vector<int>>& routes) {
  const VariableLayout lay = layout(inst);
  std::vector<double> v(static_cast<std::size_t>(lay.size()), 0.0);
  auto at = [&](int idx) -> double& { return v[static_cast<std::size_t>(idx)]; };
  for (const auto& r : routes) {
    double load = 0.0;
    double time = 0.0;
    double dist = 0.0;
    for (std::size_t p = 0; p + 1 < r.size(); ++p) {
      const int a = r[p];
      const int b = r[p + 1];
      if (a < 0 || a >= lay.nodes || b < 0 || b >= lay.nodes) {
        fail(ErrorCode::kInput, "route mentions an unknown node");
      }
      load += inst.demand(a);
      time += inst.service(a) + inst.time(a, b);
      dist += inst.dist(a, b);
      if (a == b) continue;  // no such arc in the model
      at(lay.x(a, b)) += 1.0;
      at(lay.y(a, b)) += load;
      at(lay.z(a, b)) += time;
      if (lay.has_distance) at(lay.zp(a, b)) += dist;
    }
  }
  at(lay.k()) = static_cast<double>(routes.size());
  return v;
}

std::vector<int> violated(const MipModel& model,
                          const std::vector<double>& values, double tol) {
  std::vector<int> out;
  for (std::size_t c = 0; c < model.constraints.size(); ++c) {
    const Constraint& con = model.constraints[c];
    double lhs = 0.0;
    for (const Term& t : con.terms) {
      lhs += t.coef * values[static_cast<std::size_t>(t.var)];
    }
    const bool ok = con.sense == Sense::kLessEqual  ? lhs <= con.rhs + tol
                    : con.sense == Sense::kGreaterEqual ? lhs >= con.rhs - tol
                                                    : std::abs(lhs - con.rhs) <= tol;
    if (!ok) out.push_back(static_cast<int>(c));
  }
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    const Variable& var = model.variables[i];
    const double x = values[i];
    bool ok = x >= var.lower - tol && x <= var.upper + tol;
    if (var.type != VarType::kContinuous) ok = ok && std::abs(x - std::round(x)) <= tol;
    if (!ok) out.push_back(-1 - static_cast<int>(i));
  }
  return out;
}

double objective_value(const MipModel& model, const std::vector<double>& values) {
  double s = 0.0;
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    s += model.variables[i].objective * values[i];
  }
  return s;
}

ValidationReport validate(const TcvrpInstance& inst,
                          const std::vector<std::vector<int>>& routes,
                          double tol) {
  ValidationReport rep;
  auto flag = [&](std::string family, int route, double margin,
                  std::string detail) {
    rep.feasible = false;
    rep.violations.push_back(
        {std::move(family), route, margin, std::move(detail)});
  };
  std::vector<int> seen(static_cast<std::size_t>(inst.nodes()), 0);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const auto& seq = routes[r];
    const int rid = static_cast<int>(r);
    const Route eval = evaluate_route(inst, seq);  // throws on unknown nodes
    rep.vmt_mi += eval.dist_mi;
    rep.vht_min += eval.time_min;
    if (seq.size() < 2 || seq.front() != 0 || seq.back() != 0) {
      flag("structure", rid, 0.0, "route must start and end at the depot");
    }
    if (seq.size() <= 2) flag("structure", rid, 0.0, "route serves nobody");
    for (std::size_t p = 1; p + 1 < seq.size(); ++p) {
      if (seq[p] == 0) {
        flag("structure", rid, 0.0, "depot visited mid-route");
      } else {
        ++seen[static_cast<std::size_t>(seq[p])];
      }
    }
    if (eval.load > inst.capacity()) {
      flag("capacity", rid, eval.load - inst.capacity(),
           "load " + std::to_string(eval.load) + " > Q");
    }
    if (eval.time_min > inst.max_time() + tol) {
      flag("time", rid, eval.time_min - inst.max_time(),
           "route time exceeds Tbar");
    }
    if (inst.max_dist() && eval.dist_mi > *inst.max_dist() + tol) {
      flag("distance", rid, eval.dist_mi - *inst.max_dist(),
           "route distance exceeds Dbar");
    }
  }
  for (int i = 1; i < inst.nodes(); ++i) {
    const int c = seen[static_cast<std::size_t>(i)];
    if (c != 1) {
      flag("partition", -1, c,
           "node " + std::to_string(i) + " visited " + std::to_string(c) +
               " times");
    }
  }
  return rep;
}

ValidationReport validate(const TcvrpInstance& inst, const Solution& sol,
                          double tol) {
  return validate(inst, sol.sequences(), tol);
}

Solution solution_from_arcs(const TcvrpInstance& inst, const Matrix& x) {
  const int nodes = inst.nodes();
  if (x.rows() != static_cast<std::size_t>(nodes) || x.cols() != x.rows()) {
    fail(ErrorCode::kInput, "x matrix has the wrong shape");
  }
  auto used = [&](int i, int j) {
    return i != j && x(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) > 0.5;
  };
  std::vector<int> succ(static_cast<std::size_t>(nodes), -1);
  int depot_out = 0;
  int depot_in = 0;
  for (int i = 1; i < nodes; ++i) {
    int in = 0;
    int out = 0;
    for (int j = 0; j < nodes; ++j) {
      if (used(j, i)) ++in;
      if (used(i, j)) {
        ++out;
        succ[static_cast<std::size_t>(i)] = j;
      }
    }
    if (in != 1 || out != 1) {
      fail(ErrorCode::kInput, "node " + std::to_string(i) +
                                  " violates the unit degree constraints");
    }
    if (used(0, i)) ++depot_out;
    if (used(i, 0)) ++depot_in;
  }
  if (depot_out != depot_in) {
    fail(ErrorCode::kInput, "depot in- and out-degree differ");
  }
  std::vector<std::vector<int>> routes;
  std::vector<char> visited(static_cast<std::size_t>(nodes), 0);
  int count = 0;
  for (int first = 1; first < nodes; ++first) {
    if (!used(0, first)) continue;
    std::vector<int> r{0};
    for (int v = first; v != 0; v = succ[static_cast<std::size_t>(v)]) {
      if (visited[static_cast<std::size_t>(v)]) {
        fail(ErrorCode::kInput, "arc values revisit node " + std::to_string(v));
      }
      visited[static_cast<std::size_t>(v)] = 1;
      r.push_back(v);
      ++count;
    }
    r.push_back(0);
    routes.push_back(std::move(r));
  }
  if (count != nodes - 1) {
    fail(ErrorCode::kInput,
         "subtour: " + std::to_string(nodes - 1 - count) +
             " customers are not connected to the depot");
  }
  return make_solution(inst, std::move(routes));
}

Matrix arcs_from_solution(const TcvrpInstance& inst,
                          const std::vector<std::vector<int>>& routes) {
  Matrix x = Matrix::square(static_cast<std::size_t>(inst.nodes()));
  for (const auto& r : routes) {
    for (std::size_t p = 0; p + 1 < r.size(); ++p) {
      x(static_cast<std::size_t>(r[p]), static_cast<std::size_t>(r[p + 1])) += 1.0;
    }
  }
  return x;
}

}  // namespace tcvrp::model
