#ifndef MODULO_MODEL_IO_HPP
#define MODULO_MODEL_IO_HPP

#include <filesystem>
#include <fstream>

#include "modulo/builtins.hpp"
#include "modulo/model.hpp"
#include "modulo/tva_io.hpp"

namespace modulo {

// Structure files:
//   { "kind": "tables",
//     "tva": "bool2.json" | { inline algebra },
//     "domains": { "iota": ["d0","d1"] },
//     "funcs":  { "f": [ {"args": ["d0"], "value": "d1"}, ... ] },
//     "preds":  { "P": [ {"args": [], "value": "1"} ], ... } }
// or, for the built-in STT model construction:
//   { "kind": "stt", "tva": "bool2.json", "depth": 2, "cap": 10000 }

inline Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Json j;
  in >> j;
  return j;
}

namespace detail {

inline FiniteTva tva_from_field(const Json& j, const std::filesystem::path& base_dir) {
  const Json& f = j.at("tva");
  if (f.is_string()) return tva_from_json(load_json_file(base_dir / f.get<std::string>()));
  return tva_from_json(f);
}

}  // namespace detail

inline FiniteStructure parse_structure(const Signature& sig, const Json& j,
                                       const std::filesystem::path& base_dir = ".") {
  std::string kind = j.value("kind", "tables");
  if (kind == "stt") {
    FiniteTva t = detail::tva_from_field(j, base_dir);
    int depth = j.value("depth", 2);
    size_t cap = j.value("cap", size_t(10000));
    return build_stt_model(t, SortDepthBound(depth), cap);
  }
  if (kind != "tables") throw std::runtime_error("unknown structure kind: " + kind);

  FiniteStructure s;
  s.tva = detail::tva_from_field(j, base_dir);

  if (j.contains("domains")) {
    for (const auto& [sort_name, elems] : j.at("domains").items()) {
      if (!sig.has_sort(sort_name))
        throw std::runtime_error("structure declares a domain for unknown sort " + sort_name);
      std::vector<std::string>& names = s.base_elem_names[sort_name];
      std::vector<Elem> es;
      for (const auto& e : elems) {
        names.push_back(e.get<std::string>());
        es.push_back(Elem::scalar(static_cast<int>(es.size())));
      }
      Sort sort = Sort::base(sort_name);
      s.domains.emplace(sort, make_domain(sort, std::move(es)));
    }
  }

  auto base_index = [&](const std::string& sort_name, const std::string& elem) {
    const auto& names = s.base_elem_names.at(sort_name);
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == elem) return static_cast<int>(i);
    throw std::runtime_error("unknown element " + elem + " of domain " + sort_name);
  };
  auto tva_index = [&](const std::string& name) {
    for (int i = 0; i < s.tva.size(); ++i)
      if (s.tva.names[size_t(i)] == name) return i;
    throw std::runtime_error("unknown truth value " + name);
  };

  auto fill = [&](const std::string& name, const Rank& rank, const Json& entries,
                  bool pred) {
    size_t total = 1;
    for (const auto& a : rank.args) total *= s.domain(a).elems.size();
    std::vector<int> ptable(total, -1);
    std::vector<Elem> ftable(total);
    std::vector<bool> seen(total, false);
    for (const auto& entry : entries) {
      const Json& args = entry.at("args");
      if (args.size() != rank.args.size())
        throw std::runtime_error("wrong argument count in table for " + name);
      size_t idx = 0;
      for (size_t i = 0; i < rank.args.size(); ++i) {
        if (!rank.args[i].is_base())
          throw std::runtime_error("structure files support base-sorted symbols only");
        int pos = base_index(rank.args[i].name(), args.at(i).get<std::string>());
        idx = idx * s.domain(rank.args[i]).elems.size() + size_t(pos);
      }
      if (seen[idx]) throw std::runtime_error("duplicate table entry for " + name);
      seen[idx] = true;
      const std::string value = entry.at("value").get<std::string>();
      if (pred)
        ptable[idx] = tva_index(value);
      else
        ftable[idx] = Elem::scalar(base_index(rank.result.name(), value));
    }
    for (bool b : seen)
      if (!b) throw std::runtime_error("table for " + name + " is not total");
    if (pred)
      s.pred_tables.emplace(name, std::move(ptable));
    else
      s.func_tables.emplace(name, std::move(ftable));
  };

  for (const auto& [name, rank] : sig.plain_symbols()) {
    const char* section = rank.is_pred ? "preds" : "funcs";
    if (!j.contains(section) || !j.at(section).contains(name))
      throw std::runtime_error(std::string("structure lacks an interpretation for ") + name);
    fill(name, rank, j.at(section).at(name), rank.is_pred);
  }
  s.validate_structure(sig);
  return s;
}

/// Printable form of an element of a base-sorted or truth-valued domain.
inline std::string elem_name(const FiniteStructure& s, const Sort& sort, const Elem& e) {
  if (e.kind() == Elem::Kind::Scalar && sort.is_base()) {
    if (sort.name() == "o" && e.scalar() < s.tva.size())
      return s.tva.names[size_t(e.scalar())];
    auto it = s.base_elem_names.find(sort.name());
    if (it != s.base_elem_names.end() && e.scalar() < static_cast<int>(it->second.size()))
      return it->second[size_t(e.scalar())];
  }
  return e.key();
}

}  // namespace modulo

#endif  // MODULO_MODEL_IO_HPP
