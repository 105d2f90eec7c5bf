#ifndef MODULO_SEXPR_HPP
#define MODULO_SEXPR_HPP

#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modulo {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Plain s-expressions: atoms and lists. All file formats that are not JSON
/// are built on these.
struct Sexpr {
  enum class Kind { Atom, List };
  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<Sexpr> items;

  static Sexpr make_atom(std::string s) {
    Sexpr e;
    e.kind = Kind::Atom;
    e.atom = std::move(s);
    return e;
  }
  static Sexpr make_list(std::vector<Sexpr> xs) {
    Sexpr e;
    e.kind = Kind::List;
    e.items = std::move(xs);
    return e;
  }

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
  bool is_atom(const std::string& s) const { return is_atom() && atom == s; }
  size_t size() const { return items.size(); }
  const Sexpr& operator[](size_t i) const { return items.at(i); }

  /// Head atom of a list, or empty string.
  std::string head() const {
    if (is_list() && !items.empty() && items[0].is_atom()) return items[0].atom;
    return "";
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  void write(std::ostream& os) const {
    if (is_atom()) {
      os << atom;
      return;
    }
    os << '(';
    for (size_t i = 0; i < items.size(); ++i) {
      if (i > 0) os << ' ';
      items[i].write(os);
    }
    os << ')';
  }
};

inline std::ostream& operator<<(std::ostream& os, const Sexpr& e) {
  e.write(os);
  return os;
}

namespace detail {

class SexprLexer {
 public:
  explicit SexprLexer(const std::string& text) : text_(text) {}

  // Tokens: "(", ")", or an atom. Comments run from ';' to end of line.
  bool next(std::string& tok) {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    if (c == '(' || c == ')') {
      tok = std::string(1, c);
      ++pos_;
      return true;
    }
    size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    tok = text_.substr(start, pos_ - start);
    return true;
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
  }
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace detail

/// Parses every top-level form in `text`.
inline std::vector<Sexpr> parse_sexprs(const std::string& text) {
  detail::SexprLexer lex(text);
  std::vector<Sexpr> stack_heads;
  std::vector<std::vector<Sexpr>> stack;
  std::vector<Sexpr> top;
  std::string tok;
  while (lex.next(tok)) {
    if (tok == "(") {
      stack.emplace_back();
    } else if (tok == ")") {
      if (stack.empty()) throw ParseError("unbalanced ')'");
      Sexpr done = Sexpr::make_list(std::move(stack.back()));
      stack.pop_back();
      if (stack.empty())
        top.push_back(std::move(done));
      else
        stack.back().push_back(std::move(done));
    } else {
      Sexpr a = Sexpr::make_atom(tok);
      if (stack.empty())
        top.push_back(std::move(a));
      else
        stack.back().push_back(std::move(a));
    }
  }
  if (!stack.empty()) throw ParseError("unbalanced '(' at end of input");
  return top;
}

/// Parses exactly one form.
inline Sexpr parse_sexpr(const std::string& text) {
  auto all = parse_sexprs(text);
  if (all.size() != 1)
    throw ParseError("expected exactly one expression, got " + std::to_string(all.size()));
  return all[0];
}

}  // namespace modulo

#endif  // MODULO_SEXPR_HPP
