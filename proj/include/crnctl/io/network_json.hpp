#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crnctl/crn/network.hpp"

namespace crnctl::io {

/// One side of a reaction equation as (species name, count) pairs.
using Side = std::vector<std::pair<std::string, int>>;

/// Parses "A + 2 B -> C" (or "A + B -> 0"; "0" and "∅" denote the empty side).
std::pair<Side, Side> parse_equation(const std::string& equation);
std::string format_equation(const crn::Network& network, const crn::Reaction& reaction);

/// Network file document:
///   {"species": [{"name": "x", "initial": 0}, ...],
///    "reactions": [{"label": "deg", "equation": "x -> 0", "rate": 0.1,
///                   "hill": {"theta": 1, "repressor": "v"}}, ...],
///    "controlled": "x", "actuated": "x", "inflow": {"x": 0.5}}
/// Reactions may give "reactants"/"products" maps instead of "equation";
/// species may be bare name strings (initial 0).
crn::Network network_from_json_text(const std::string& text, const std::string& origin = "network");
std::string network_to_json_text(const crn::Network& network);

crn::Network read_network_file(const std::string& path);
void write_network_file(const crn::Network& network, const std::string& path);

}  // namespace crnctl::io
