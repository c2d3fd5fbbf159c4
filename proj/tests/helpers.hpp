#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace testutil {

/// Writes content to a fresh file under the system temp directory and
/// returns its path; the file persists for the process lifetime.
inline std::string write_temp(const std::string& stem, const std::string& content) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() / "mmtsp_tests";
    std::filesystem::create_directories(dir);
    auto path = dir / (stem + "_" + std::to_string(counter++));
    std::ofstream out(path);
    out << content;
    return path.string();
}

inline std::string data_path(const std::string& name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

} // namespace testutil
