#include "mmtsp/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mmtsp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double angdist(double a, double b) {
    double d = std::fmod(std::fabs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

Instance::Instance(std::string id, std::vector<std::pair<double, double>> coords,
                   bool round_to_int)
    : id_(std::move(id)), coords_(std::move(coords)) {
    if (coords_.size() < 2)
        throw std::runtime_error("instance needs a depot and at least one city");
    const std::size_t n = coords_.size();
    dist_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = coords_[i].first - coords_[j].first;
            double dy = coords_[i].second - coords_[j].second;
            double d = std::hypot(dx, dy);
            if (round_to_int) d = std::nearbyint(d);
            dist_[i * n + j] = d;
            dist_[j * n + i] = d;
        }
    }
    theta_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double dx = coords_[i].first - coords_[0].first;
        double dy = coords_[i].second - coords_[0].second;
        if (dx == 0.0 && dy == 0.0) {
            theta_[i] = 0.0;
            continue;
        }
        double t = std::atan2(dy, dx);
        if (t < 0.0) t += kTwoPi;
        if (t >= kTwoPi) t = 0.0;
        theta_[i] = t;
    }
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line << ": " << what;
    throw std::runtime_error(os.str());
}

// "KEY : value" and "KEY: value" both appear in the wild.
bool split_header(const std::string& line, std::string& key, std::string& value) {
    auto colon = line.find(':');
    if (colon == std::string::npos) return false;
    key = line.substr(0, colon);
    value = line.substr(colon + 1);
    auto trim = [](std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    return true;
}

} // namespace

Instance parse_tsplib(const std::string& path, bool round_to_int) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string name = path;
    int dimension = -1;
    bool weight_type_ok = false;
    std::vector<std::pair<double, double>> coords;

    std::string line;
    int lineno = 0;
    bool in_coords = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        std::string t = line.substr(b, e - b + 1);
        if (t == "EOF") break;
        if (in_coords) {
            std::istringstream row(t);
            long idx;
            double x, y;
            if (!(row >> idx >> x >> y))
                parse_fail(path, lineno, "malformed coordinate row");
            if (idx != static_cast<long>(coords.size()) + 1)
                parse_fail(path, lineno, "coordinate rows must be numbered 1..DIMENSION in order");
            coords.emplace_back(x, y);
            if (static_cast<int>(coords.size()) == dimension) in_coords = false;
            continue;
        }
        if (t == "NODE_COORD_SECTION") {
            if (dimension <= 0) parse_fail(path, lineno, "DIMENSION must precede NODE_COORD_SECTION");
            if (!weight_type_ok) parse_fail(path, lineno, "EDGE_WEIGHT_TYPE must precede NODE_COORD_SECTION");
            in_coords = true;
            continue;
        }
        std::string key, value;
        if (!split_header(t, key, value))
            parse_fail(path, lineno, "unrecognized line: " + t);
        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            if (value != "TSP") parse_fail(path, lineno, "unsupported TYPE: " + value);
        } else if (key == "COMMENT") {
            // ignored
        } else if (key == "DIMENSION") {
            try {
                dimension = std::stoi(value);
            } catch (const std::exception&) {
                parse_fail(path, lineno, "bad DIMENSION: " + value);
            }
            if (dimension < 2) parse_fail(path, lineno, "DIMENSION must be at least 2");
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value != "EUC_2D") parse_fail(path, lineno, "unsupported EDGE_WEIGHT_TYPE: " + value);
            weight_type_ok = true;
        } else {
            parse_fail(path, lineno, "unsupported keyword: " + key);
        }
    }
    if (dimension < 0) parse_fail(path, lineno, "missing DIMENSION");
    if (static_cast<int>(coords.size()) != dimension)
        parse_fail(path, lineno, "expected " + std::to_string(dimension) + " coordinate rows, got " +
                                     std::to_string(coords.size()));
    return Instance(name, std::move(coords), round_to_int);
}

Instance parse_json_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("depot") || !j.contains("cities"))
        throw std::runtime_error(path + ": expected an object with \"depot\" and \"cities\"");
    auto read_point = [&](const nlohmann::json& p, const char* what) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw std::runtime_error(path + ": " + what + " must be a numeric [x, y] pair");
        return std::pair<double, double>(p[0].get<double>(), p[1].get<double>());
    };
    std::vector<std::pair<double, double>> coords;
    coords.push_back(read_point(j["depot"], "depot"));
    const auto& cities = j["cities"];
    if (!cities.is_array() || cities.empty())
        throw std::runtime_error(path + ": \"cities\" must be a non-empty array");
    for (const auto& c : cities) coords.push_back(read_point(c, "city"));
    std::string id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : path;
    return Instance(id, std::move(coords));
}

std::string to_json_instance(const Instance& inst) {
    nlohmann::ordered_json j;
    j["id"] = inst.id();
    j["depot"] = {inst.coord(0).first, inst.coord(0).second};
    auto cities = nlohmann::ordered_json::array();
    for (int i = 1; i <= inst.n_cities(); ++i)
        cities.push_back({inst.coord(i).first, inst.coord(i).second});
    j["cities"] = std::move(cities);
    return j.dump(2) + "\n";
}

Instance generate_random(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_random: n must be positive");
    Rng rng(seed);
    std::vector<std::pair<double, double>> coords;
    coords.reserve(n + 1);
    coords.emplace_back(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        double r = std::sqrt(rng.next_double());
        double phi = rng.next_double() * kTwoPi;
        coords.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
    return Instance("rand_n" + std::to_string(n) + "_s" + std::to_string(seed), std::move(coords));
}

} // namespace mmtsp
