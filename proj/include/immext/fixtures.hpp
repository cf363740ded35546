#pragma once

#include <string>
#include <vector>

#include "immext/diagram.hpp"

namespace immext {

// Built-in curve diagrams used by the test corpus and the CLI.
std::vector<std::string> fixture_names();
bool has_fixture(const std::string& name);
std::string fixture_json(const std::string& name);
CurveDiagram fixture(const std::string& name);

} // namespace immext
