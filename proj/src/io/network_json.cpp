#include "crnctl/io/network_json.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace crnctl::io {

using detail::Json;

namespace detail {

Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    if (pos != std::string::npos) what = what.substr(pos);
    throw Error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

namespace {

Side side_from_map(const Json& j, const std::string& where) {
  require_object(j, where);
  Side side;
  for (const auto& [name, count] : j.items()) {
    const auto n = get_count(count, child(where, name));
    if (n == 0) fail(child(where, name), "stoichiometric count must be >= 1");
    side.emplace_back(name, static_cast<int>(n));
  }
  return side;
}

}  // namespace

crn::Network network_from_json(const Json& j, const std::string& where) {
  check_keys(j, where, {"species", "reactions", "controlled", "actuated", "inflow"});
  const auto sp_it = j.find("species");
  if (sp_it == j.end() || !sp_it->is_array() || sp_it->empty()) {
    fail(child(where, "species"), "expected a nonempty array");
  }
  std::vector<crn::Species> species;
  for (std::size_t i = 0; i < sp_it->size(); ++i) {
    const auto& s = (*sp_it)[i];
    const auto w = item(child(where, "species"), i);
    if (s.is_string()) {
      species.push_back({s.get<std::string>(), 0.0});
      continue;
    }
    check_keys(s, w, {"name", "initial"});
    const double x0 = number_or(s, "initial", w, 0.0);
    if (!(x0 >= 0.0)) fail(child(w, "initial"), "initial concentration must be >= 0");
    species.push_back({require_string(s, "name", w), x0});
  }

  const auto rx_it = j.find("reactions");
  if (rx_it == j.end() || !rx_it->is_array()) fail(child(where, "reactions"), "expected an array");
  std::vector<crn::ReactionSpec> specs;
  for (std::size_t i = 0; i < rx_it->size(); ++i) {
    const auto& r = (*rx_it)[i];
    const auto w = item(child(where, "reactions"), i);
    check_keys(r, w, {"label", "equation", "reactants", "products", "rate", "hill"});
    crn::ReactionSpec spec;
    spec.label = r.contains("label") ? get_string(r["label"], child(w, "label")) : "r" + std::to_string(i + 1);
    if (r.contains("equation")) {
      if (r.contains("reactants") || r.contains("products")) {
        fail(w, "give either 'equation' or 'reactants'/'products', not both");
      }
      try {
        auto [lhs, rhs] = parse_equation(get_string(r["equation"], child(w, "equation")));
        spec.reactants = std::move(lhs);
        spec.products = std::move(rhs);
      } catch (const Error& e) {
        fail(child(w, "equation"), e.what());
      }
    } else {
      if (r.contains("reactants")) spec.reactants = side_from_map(r["reactants"], child(w, "reactants"));
      if (r.contains("products")) spec.products = side_from_map(r["products"], child(w, "products"));
    }
    spec.rate = require_number(r, "rate", w);
    if (!(spec.rate > 0.0)) fail(child(w, "rate"), "rate constant must be > 0");
    if (r.contains("hill")) {
      const auto hw = child(w, "hill");
      check_keys(r["hill"], hw, {"theta", "repressor"});
      spec.hill = crn::HillSpec{require_number(r["hill"], "theta", hw), require_string(r["hill"], "repressor", hw)};
      if (!(spec.hill->theta > 0.0)) fail(child(hw, "theta"), "theta must be > 0");
    }
    specs.push_back(std::move(spec));
  }

  const auto controlled = require_string(j, "controlled", where);
  const auto actuated = require_string(j, "actuated", where);
  crn::Network net;
  try {
    net = crn::build_network(species, specs, controlled, actuated);
  } catch (const Error& e) {
    fail(where, e.what());
  }
  if (j.contains("inflow")) {
    const auto iw = child(where, "inflow");
    require_object(j["inflow"], iw);
    Eigen::VectorXd inflow = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.size()));
    for (const auto& [name, value] : j["inflow"].items()) {
      const auto idx = net.index_of(name);
      if (!idx) fail(child(iw, name), "unknown species");
      const double q = get_number(value, child(iw, name));
      if (!(q >= 0.0)) fail(child(iw, name), "inflow must be >= 0");
      inflow[static_cast<Eigen::Index>(*idx)] = q;
    }
    net = net.with_inflow(inflow);
  }
  return net;
}

Json network_to_json(const crn::Network& net) {
  Json j;
  Json species = Json::array();
  for (const auto& s : net.species()) species.push_back(Json{{"name", s.name}, {"initial", s.initial_concentration}});
  j["species"] = std::move(species);
  Json reactions = Json::array();
  for (const auto& r : net.reactions()) {
    Json rj;
    rj["label"] = r.label;
    rj["equation"] = format_equation(net, r);
    rj["rate"] = r.rate_constant;
    if (r.hill) rj["hill"] = Json{{"theta", r.hill->theta}, {"repressor", net.species()[r.hill->repressor].name}};
    reactions.push_back(std::move(rj));
  }
  j["reactions"] = std::move(reactions);
  j["controlled"] = net.species()[net.controlled()].name;
  j["actuated"] = net.species()[net.actuated()].name;
  if (net.inflow().size() > 0 && (net.inflow().array() != 0.0).any()) {
    Json inflow = Json::object();
    for (std::size_t i = 0; i < net.size(); ++i) {
      const double q = net.inflow()[static_cast<Eigen::Index>(i)];
      if (q != 0.0) inflow[net.species()[i].name] = q;
    }
    j["inflow"] = std::move(inflow);
  }
  return j;
}

}  // namespace detail

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& name) {
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) return false;
  for (const char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '\'') return false;
  }
  return true;
}

Side parse_side(const std::string& text) {
  const auto t = trim(text);
  if (t.empty()) throw Error("empty reaction side (use 0 for no species)");
  if (t == "0" || t == "∅") return {};
  Side side;
  std::size_t start = 0;
  while (start <= t.size()) {
    auto plus = t.find('+', start);
    if (plus == std::string::npos) plus = t.size();
    const auto term = trim(t.substr(start, plus - start));
    std::size_t i = 0;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    int count = 1;
    if (i > 0) {
      count = std::stoi(term.substr(0, i));
      if (count < 1) throw Error("stoichiometric count must be >= 1 in '" + term + "'");
    }
    const auto name = trim(term.substr(i));
    if (!valid_name(name)) throw Error("invalid species term '" + term + "'");
    side.emplace_back(name, count);
    start = plus + 1;
  }
  return side;
}

}  // namespace

std::pair<Side, Side> parse_equation(const std::string& equation) {
  const auto arrow = equation.find("->");
  if (arrow == std::string::npos || equation.find("->", arrow + 2) != std::string::npos) {
    throw Error("equation must contain exactly one '->': '" + equation + "'");
  }
  return {parse_side(equation.substr(0, arrow)), parse_side(equation.substr(arrow + 2))};
}

std::string format_equation(const crn::Network& network, const crn::Reaction& reaction) {
  auto side = [&](const std::vector<crn::Stoich>& terms) {
    if (terms.empty()) return std::string("0");
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i) out += " + ";
      if (terms[i].count != 1) out += std::to_string(terms[i].count) + " ";
      out += network.species()[terms[i].species].name;
    }
    return out;
  };
  return side(reaction.reactants) + " -> " + side(reaction.products);
}

crn::Network network_from_json_text(const std::string& text, const std::string& origin) {
  return detail::network_from_json(detail::parse_text(text, origin), origin);
}

std::string network_to_json_text(const crn::Network& network) { return detail::network_to_json(network).dump(2) + "\n"; }

crn::Network read_network_file(const std::string& path) {
  return network_from_json_text(detail::read_file(path), path);
}

void write_network_file(const crn::Network& network, const std::string& path) {
  detail::write_file(path, network_to_json_text(network));
}

}  // namespace crnctl::io
