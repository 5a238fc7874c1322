#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "triad/analytical/rational.hpp"

namespace triad::analytical {

// A finite two-domain universe: elements with equivalence-class labels, the
// ground-truth consistency relation G, and a joint distribution D over A×B.
template <typename P>
struct FiniteWorld {
  std::vector<std::string> a_names, b_names;
  std::vector<int> a_class, b_class;  // dense class ids per element
  std::vector<std::string> a_class_names, b_class_names;
  std::vector<std::vector<bool>> in_g;  // |A| x |B|
  std::vector<std::vector<P>> joint;    // D, |A| x |B|

  std::size_t a_size() const { return a_names.size(); }
  std::size_t b_size() const { return b_names.size(); }
  int b_class_count() const { return static_cast<int>(b_class_names.size()); }

  int a_index(const std::string& name) const { return index_of(a_names, name, "A element"); }
  int b_index(const std::string& name) const { return index_of(b_names, name, "B element"); }

  int b_class_index(const std::string& label) const {
    for (std::size_t i = 0; i < b_class_names.size(); ++i)
      if (b_class_names[i] == label) return static_cast<int>(i);
    throw StructuralError("unknown B equivalence class: " + label);
  }

 private:
  static int index_of(const std::vector<std::string>& xs, const std::string& name,
                      const char* what) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i] == name) return static_cast<int>(i);
    throw StructuralError(std::string("unknown ") + what + ": " + name);
  }
};

// Row-stochastic transfer model M: per x in A, a distribution over B.
template <typename P>
struct TransferModel {
  std::vector<std::vector<P>> rows;  // |A| x |B|
};

struct RelationViolation {
  std::string property;  // which linking property failed
  std::string x, x2, y, y2;
};

// Checks the two properties linking G to the equivalence classes:
// substitution-closure, and consistency with at most one class on the other
// side. Returns the first violating witness in element order.
template <typename P>
std::optional<RelationViolation> validate_relation(const FiniteWorld<P>& w) {
  for (std::size_t x = 0; x < w.a_size(); ++x)
    for (std::size_t x2 = 0; x2 < w.a_size(); ++x2)
      for (std::size_t y = 0; y < w.b_size(); ++y)
        for (std::size_t y2 = 0; y2 < w.b_size(); ++y2) {
          bool same_x = w.a_class[x] == w.a_class[x2];
          bool same_y = w.b_class[y] == w.b_class[y2];
          bool g1 = w.in_g[x][y];
          bool g2 = w.in_g[x2][y2];
          if (same_x && same_y && g1 != g2)
            return RelationViolation{"substitution-closure", w.a_names[x], w.a_names[x2],
                                     w.b_names[y], w.b_names[y2]};
          if (g1 && g2 && same_x != same_y)
            return RelationViolation{"at-most-one-class", w.a_names[x], w.a_names[x2],
                                     w.b_names[y], w.b_names[y2]};
        }
  return std::nullopt;
}

namespace detail {

template <typename P>
P parse_mass(const nlohmann::json& v) {
  if (v.is_string()) return NumTraits<P>::from_string(v.get<std::string>());
  if (v.is_number()) return NumTraits<P>::from_double(v.get<double>());
  throw StructuralError("mass must be a number or a rational string");
}

template <typename P>
void check_unit_sum(const P& total, const char* what) {
  if (!NumTraits<P>::near_one(total))
    throw StructuralError(std::string(what) + " must sum to 1, got " + NumTraits<P>::str(total));
}

inline int intern_class(std::vector<std::string>& names, const std::string& label) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == label) return static_cast<int>(i);
  names.push_back(label);
  return static_cast<int>(names.size() - 1);
}

}  // namespace detail

template <typename P>
struct WorldBundle {
  FiniteWorld<P> world;
  TransferModel<P> model;
};

inline constexpr int kWorldSchemaVersion = 1;

// Parses a world document. Numeric invariants (masses nonnegative, D and each
// M row summing to one) are enforced here; call validate_relation separately
// when a witness for a bad G should be reported rather than thrown.
template <typename P>
WorldBundle<P> parse_world(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kWorldSchemaVersion)
    throw StructuralError("world file: unsupported schema_version");
  WorldBundle<P> out;
  FiniteWorld<P>& w = out.world;
  auto load_domain = [&](const char* key, std::vector<std::string>& names,
                         std::vector<int>& classes, std::vector<std::string>& class_names) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
      throw StructuralError(std::string("world file: missing domain ") + key);
    for (const auto& e : j[key]) {
      names.push_back(e.at("name").get<std::string>());
      classes.push_back(detail::intern_class(class_names, e.at("class").get<std::string>()));
    }
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t k = i + 1; k < names.size(); ++k)
        if (names[i] == names[k])
          throw StructuralError("world file: duplicate element name " + names[i]);
  };
  load_domain("domain_a", w.a_names, w.a_class, w.a_class_names);
  load_domain("domain_b", w.b_names, w.b_class, w.b_class_names);

  w.in_g.assign(w.a_size(), std::vector<bool>(w.b_size(), false));
  for (const auto& pair : j.value("consistent", nlohmann::json::array())) {
    int x = w.a_index(pair.at(0).get<std::string>());
    int y = w.b_index(pair.at(1).get<std::string>());
    w.in_g[x][y] = true;
  }

  w.joint.assign(w.a_size(), std::vector<P>(w.b_size(), P(0)));
  P total(0);
  for (const auto& e : j.at("joint")) {
    int x = w.a_index(e.at("a").get<std::string>());
    int y = w.b_index(e.at("b").get<std::string>());
    P mass = detail::parse_mass<P>(e.at("mass"));
    if (mass < P(0)) throw StructuralError("world file: negative joint mass");
    w.joint[x][y] = mass;
    total += mass;
  }
  detail::check_unit_sum(total, "joint masses");

  out.model.rows.assign(w.a_size(), std::vector<P>(w.b_size(), P(0)));
  for (const auto& e : j.at("transfer")) {
    int x = w.a_index(e.at("a").get<std::string>());
    P row_total(0);
    for (const auto& [bname, mass] : e.at("row").items()) {
      int y = w.b_index(bname);
      P p = detail::parse_mass<P>(mass);
      if (p < P(0)) throw StructuralError("world file: negative transfer mass");
      out.model.rows[x][y] = p;
      row_total += p;
    }
    detail::check_unit_sum(row_total, "transfer row");
  }
  return out;
}

template <typename P>
WorldBundle<P> load_world_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  return parse_world<P>(j);
}

// Serializes a bundle back to the documented schema (rationals as "p/q").
template <typename P>
nlohmann::json world_to_json(const WorldBundle<P>& b) {
  const FiniteWorld<P>& w = b.world;
  nlohmann::json j;
  j["schema_version"] = kWorldSchemaVersion;
  auto dump_domain = [&](const std::vector<std::string>& names, const std::vector<int>& classes,
                         const std::vector<std::string>& class_names) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < names.size(); ++i)
      arr.push_back({{"name", names[i]}, {"class", class_names[classes[i]]}});
    return arr;
  };
  j["domain_a"] = dump_domain(w.a_names, w.a_class, w.a_class_names);
  j["domain_b"] = dump_domain(w.b_names, w.b_class, w.b_class_names);
  nlohmann::json g = nlohmann::json::array();
  for (std::size_t x = 0; x < w.a_size(); ++x)
    for (std::size_t y = 0; y < w.b_size(); ++y)
      if (w.in_g[x][y]) g.push_back({w.a_names[x], w.b_names[y]});
  j["consistent"] = g;
  nlohmann::json joint = nlohmann::json::array();
  for (std::size_t x = 0; x < w.a_size(); ++x)
    for (std::size_t y = 0; y < w.b_size(); ++y)
      if (w.joint[x][y] != P(0))
        joint.push_back({{"a", w.a_names[x]},
                         {"b", w.b_names[y]},
                         {"mass", NumTraits<P>::str(w.joint[x][y])}});
  j["joint"] = joint;
  nlohmann::json transfer = nlohmann::json::array();
  for (std::size_t x = 0; x < w.a_size(); ++x) {
    nlohmann::json row;
    for (std::size_t y = 0; y < w.b_size(); ++y)
      row[w.b_names[y]] = NumTraits<P>::str(b.model.rows[x][y]);
    transfer.push_back({{"a", w.a_names[x]}, {"row", row}});
  }
  j["transfer"] = transfer;
  return j;
}

// Double-precision view of an exact bundle, used by the Monte Carlo sampler.
template <typename P>
WorldBundle<double> to_double_bundle(const WorldBundle<P>& b) {
  WorldBundle<double> out;
  out.world.a_names = b.world.a_names;
  out.world.b_names = b.world.b_names;
  out.world.a_class = b.world.a_class;
  out.world.b_class = b.world.b_class;
  out.world.a_class_names = b.world.a_class_names;
  out.world.b_class_names = b.world.b_class_names;
  out.world.in_g = b.world.in_g;
  auto conv = [](const std::vector<std::vector<P>>& m) {
    std::vector<std::vector<double>> r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (const P& v : m[i]) r[i].push_back(to_double(v));
    return r;
  };
  out.world.joint = conv(b.world.joint);
  out.model.rows = conv(b.model.rows);
  return out;
}

}  // namespace triad::analytical
