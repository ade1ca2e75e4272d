#pragma once

#include "scb/parser.hpp"
#include "scb/typecheck.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace scb::test {

inline std::string fixture_path(const std::string& name) {
    return std::string(SCB_FIXTURES_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string read_fixture(const std::string& name) {
    return read_file(fixture_path(name));
}

inline TypedProgram load_fixture(const std::string& name) {
    return typecheck(parse_program(read_fixture(name)));
}

} // namespace scb::test
