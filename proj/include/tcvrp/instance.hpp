#pragma once

#include <optional>
#include <vector>

#include "tcvrp/matrix.hpp"

namespace tcvrp {

// Scenario limits shared by every depot-level instance.
struct InstanceParams {
  int capacity = 120;                     // Q, packages per vehicle
  double max_time_min = 600.0;            // T-bar
  double dwell_min = 2.0;                 // P, minutes per customer
  std::optional<double> max_dist_mi = 80.0;  // D-bar; nullopt for CVs
};

// Depot-level TCVRP. Node 0 is the depot, nodes 1..n are super-locations.
// Immutable; the constructor rejects instances in which some node cannot be
// served by a dedicated round trip.
class TcvrpInstance {
 public:
  // `demand` and `service_min` have n + 1 entries, entry 0 (the depot) zero.
  TcvrpInstance(std::vector<int> demand, std::vector<double> service_min,
                Matrix time_min, Matrix dist_mi, int capacity,
                double max_time_min, std::optional<double> max_dist_mi);

  int customers() const { return static_cast<int>(demand_.size()) - 1; }
  int nodes() const { return static_cast<int>(demand_.size()); }

  int demand(int i) const { return demand_[static_cast<std::size_t>(i)]; }
  double service(int i) const { return service_[static_cast<std::size_t>(i)]; }
  double time(int i, int j) const {
    return time_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  double dist(int i, int j) const {
    return dist_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  int capacity() const { return capacity_; }
  double max_time() const { return max_time_; }
  const std::optional<double>& max_dist() const { return max_dist_; }

  const std::vector<int>& demands() const { return demand_; }
  const std::vector<double>& services() const { return service_; }
  const Matrix& time_matrix() const { return time_; }
  const Matrix& dist_matrix() const { return dist_; }

  int total_demand() const;

  // Copy with different limits (matrices and service times unchanged).
  TcvrpInstance with_limits(int capacity, double max_time_min,
                            std::optional<double> max_dist_mi) const;

 private:
  std::vector<int> demand_;
  std::vector<double> service_;
  Matrix time_;
  Matrix dist_;
  int capacity_;
  double max_time_;
  std::optional<double> max_dist_;
};

}  // namespace tcvrp
