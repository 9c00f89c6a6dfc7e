#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

inline std::string read_data(const std::string& name) {
    std::ifstream in(std::string(HARDBIRDS_DATA_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing data file " + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}
