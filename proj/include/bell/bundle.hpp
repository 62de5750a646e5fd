#pragma once

#include "bell/core.hpp"
#include "bell/iterate.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace bell {

// iteration spec / decomposition bundle:
//   formula general|2m|sym|3m
//   piece <signs> <path>        functional read from path (relative to the spec)
//   piece <signs>               followed by an inline functional closed by "end"
struct IterationSpec {
    std::string formula = "general";
    std::vector<std::pair<std::string, Functional>> pieces;
};

std::string write_bundle(const IterationInput& in);
IterationSpec read_spec(std::istream& in, const std::filesystem::path& base_dir = ".");
Functional build(const IterationSpec& spec);

}  // namespace bell
