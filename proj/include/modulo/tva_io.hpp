#ifndef MODULO_TVA_IO_HPP
#define MODULO_TVA_IO_HPP

#include <json.hpp>

#include "modulo/tva.hpp"

namespace modulo {

using Json = nlohmann::ordered_json;

// Algebra files carry explicit tables, elements referenced by name:
//   { "carrier": ["0","1"], "positive": ["1"], "top": "1", "bottom": "0",
//     "imp": [["1","1"],["0","1"]], "and": ..., "or": ...,
//     "forall": [{"set": ["0","1"], "value": "0"}, ...], "exists": [...],
//     "order": [["0","1"], ...] }            // optional, pairs a ⊑ b
// Lattice files for from-heyting:
//   { "carrier": [...], "leq": [["0","m"], ["m","1"]] }   // closure taken

namespace detail {

inline int elem_index(const std::vector<std::string>& names, const std::string& name) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw TvaError("unknown carrier element: " + name);
}

inline std::vector<std::vector<int>> table_from_json(const std::vector<std::string>& names,
                                                     const Json& j, const char* what) {
  if (!j.is_array() || j.size() != names.size())
    throw TvaError(std::string(what) + " table must be a " + std::to_string(names.size()) +
                   "-row array");
  std::vector<std::vector<int>> t;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != names.size())
      throw TvaError(std::string(what) + " table rows must have " +
                     std::to_string(names.size()) + " entries");
    std::vector<int> r;
    for (const auto& cell : row) r.push_back(elem_index(names, cell.get<std::string>()));
    t.push_back(std::move(r));
  }
  return t;
}

}  // namespace detail

inline FiniteTva tva_from_json(const Json& j) {
  FiniteTva t;
  for (const auto& n : j.at("carrier")) t.names.push_back(n.get<std::string>());
  for (const auto& n : j.at("positive"))
    t.positive |= BSet(1) << detail::elem_index(t.names, n.get<std::string>());
  t.top = detail::elem_index(t.names, j.at("top").get<std::string>());
  t.bottom = detail::elem_index(t.names, j.at("bottom").get<std::string>());
  t.imp = detail::table_from_json(t.names, j.at("imp"), "imp");
  t.meet = detail::table_from_json(t.names, j.at("and"), "and");
  t.join = detail::table_from_json(t.names, j.at("or"), "or");
  for (const char* key : {"forall", "exists"}) {
    for (const auto& entry : j.at(key)) {
      BSet s = 0;
      for (const auto& n : entry.at("set"))
        s |= BSet(1) << detail::elem_index(t.names, n.get<std::string>());
      int v = detail::elem_index(t.names, entry.at("value").get<std::string>());
      if (std::string(key) == "forall") {
        t.dom_forall.push_back(s);
        t.forall_map.emplace(s, v);
      } else {
        t.dom_exists.push_back(s);
        t.exists_map.emplace(s, v);
      }
    }
  }
  std::sort(t.dom_forall.begin(), t.dom_forall.end());
  std::sort(t.dom_exists.begin(), t.dom_exists.end());
  if (j.contains("order")) {
    int n = t.size();
    std::vector<std::vector<bool>> leq(size_t(n), std::vector<bool>(size_t(n), false));
    for (int i = 0; i < n; ++i) leq[size_t(i)][size_t(i)] = true;
    for (const auto& pair : j.at("order")) {
      int a = detail::elem_index(t.names, pair.at(0).get<std::string>());
      int b = detail::elem_index(t.names, pair.at(1).get<std::string>());
      leq[size_t(a)][size_t(b)] = true;
    }
    // Transitive closure, so files may list just the covering pairs.
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (leq[size_t(a)][size_t(k)] && leq[size_t(k)][size_t(b)]) leq[size_t(a)][size_t(b)] = true;
    t.leq = std::move(leq);
  }
  t.validate_structure();
  return t;
}

inline Json tva_to_json(const FiniteTva& t) {
  Json j;
  j["carrier"] = t.names;
  Json pos = Json::array();
  for (int i = 0; i < t.size(); ++i)
    if (t.pos(i)) pos.push_back(t.names[size_t(i)]);
  j["positive"] = std::move(pos);
  j["top"] = t.names[size_t(t.top)];
  j["bottom"] = t.names[size_t(t.bottom)];
  auto table = [&](const std::vector<std::vector<int>>& tab) {
    Json rows = Json::array();
    for (const auto& row : tab) {
      Json r = Json::array();
      for (int v : row) r.push_back(t.names[size_t(v)]);
      rows.push_back(std::move(r));
    }
    return rows;
  };
  j["imp"] = table(t.imp);
  j["and"] = table(t.meet);
  j["or"] = table(t.join);
  auto qmap = [&](const std::vector<BSet>& dom, const std::map<BSet, int>& m) {
    Json entries = Json::array();
    for (BSet s : dom) {
      Json names = Json::array();
      for (int i = 0; i < t.size(); ++i)
        if (bset_has(s, i)) names.push_back(t.names[size_t(i)]);
      entries.push_back(Json{{"set", std::move(names)}, {"value", t.names[size_t(m.at(s))]}});
    }
    return entries;
  };
  j["forall"] = qmap(t.dom_forall, t.forall_map);
  j["exists"] = qmap(t.dom_exists, t.exists_map);
  if (t.leq) {
    Json pairs = Json::array();
    for (int a = 0; a < t.size(); ++a)
      for (int b = 0; b < t.size(); ++b)
        if ((*t.leq)[size_t(a)][size_t(b)])
          pairs.push_back(Json::array({t.names[size_t(a)], t.names[size_t(b)]}));
    j["order"] = std::move(pairs);
  }
  return j;
}

inline FiniteHeyting heyting_from_json(const Json& j) {
  std::vector<std::string> names;
  for (const auto& n : j.at("carrier")) names.push_back(n.get<std::string>());
  const int n = static_cast<int>(names.size());
  std::vector<std::vector<bool>> leq(size_t(n), std::vector<bool>(size_t(n), false));
  for (int i = 0; i < n; ++i) leq[size_t(i)][size_t(i)] = true;
  for (const auto& pair : j.at("leq")) {
    int a = detail::elem_index(names, pair.at(0).get<std::string>());
    int b = detail::elem_index(names, pair.at(1).get<std::string>());
    leq[size_t(a)][size_t(b)] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (leq[size_t(a)][size_t(k)] && leq[size_t(k)][size_t(b)]) leq[size_t(a)][size_t(b)] = true;
  return make_heyting(std::move(names), std::move(leq));
}

}  // namespace modulo

#endif  // MODULO_TVA_IO_HPP
