#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmtsp/random.hpp"

namespace mmtsp {

/// Angular distance between two angles in [0, 2*pi), result in [0, pi].
double angdist(double a, double b);

/// A symmetric Euclidean instance. Node 0 is the depot; nodes 1..n_cities
/// are the cities. Distances are exact doubles (no TSPLIB integer rounding
/// unless requested at parse time).
class Instance {
public:
    /// Builds the distance matrix and depot-relative polar angles from
    /// coordinates. coords[0] is the depot. round_to_int applies the TSPLIB
    /// EUC_2D nearest-integer convention to every distance.
    Instance(std::string id, std::vector<std::pair<double, double>> coords,
             bool round_to_int = false);

    const std::string& id() const { return id_; }
    int n_cities() const { return static_cast<int>(coords_.size()) - 1; }
    int n_nodes() const { return static_cast<int>(coords_.size()); }

    double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * coords_.size() + j]; }

    /// Polar angle of city i around the depot, in [0, 2*pi).
    /// A city coincident with the depot has angle 0.
    double theta(int i) const { return theta_[i]; }

    const std::pair<double, double>& coord(int i) const { return coords_[i]; }

private:
    std::string id_;
    std::vector<std::pair<double, double>> coords_;
    std::vector<double> dist_;
    std::vector<double> theta_;
};

/// Parses the TSPLIB subset NAME / TYPE / COMMENT / DIMENSION /
/// EDGE_WEIGHT_TYPE: EUC_2D / NODE_COORD_SECTION / EOF. Node 1 becomes the
/// depot. Any other EDGE_WEIGHT_TYPE, a missing section, or a coordinate
/// count mismatch raises std::runtime_error with the offending line number.
Instance parse_tsplib(const std::string& path, bool round_to_int = false);

/// Parses the native format {"depot": [x, y], "cities": [[x, y], ...]}.
Instance parse_json_instance(const std::string& path);

/// Serializes an instance to the native JSON format.
std::string to_json_instance(const Instance& inst);

/// Generates n cities uniformly in the unit disk around a depot at the
/// origin (radius = sqrt(u) keeps the area density uniform). Deterministic
/// for a fixed seed.
Instance generate_random(int n, std::uint64_t seed);

} // namespace mmtsp
