#pragma once

// Text format for input documents.
//
//   # comment
//   n = 3
//   w = x1*d0 - x0*d1                       form (0-forms are polynomials)
//   r = rational(F=x0, G=x1^2)              rational family
//   l = logarithmic(f=[x0, x1, x2], lambda=[1, 1, -2])
//   S = [w, r]                              generator list
//   tangent w --twist 3                     task
//
// Expressions: x0..xN variables, d0..dN differentials, '*' is the wedge
// product (multiplication for polynomials), '^' integer powers of
// polynomials, rationals written p/q, parentheses, previously declared names.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pfaff/errors.hpp"
#include "pfaff/families.hpp"
#include "pfaff/form.hpp"

namespace pfaff::io {

class parse_error : public invalid_input {
 public:
  parse_error(std::size_t line, std::size_t col, const std::string& msg)
      : invalid_input("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_, col_;
};

using NameList = std::vector<std::string>;
using DeclValue = std::variant<ExtForm, RationalFamily, LogarithmicFamily, NameList>;

struct Declaration {
  std::string name;
  DeclValue value;
  bool operator==(const Declaration&) const = default;
};

/// A task argument: a bare word (name or integer) or a bracketed list.
using TaskArg = std::variant<std::string, NameList>;

struct Task {
  std::string command;
  std::vector<TaskArg> args;
  std::vector<std::pair<std::string, std::string>> options;  // "--twist 3" -> {"twist","3"}
  bool operator==(const Task&) const = default;

  std::optional<std::string> option(const std::string& key) const {
    for (const auto& [k, v] : options)
      if (k == key) return v;
    return std::nullopt;
  }
};

struct InputDocument {
  int n = -1;
  std::vector<Declaration> declarations;
  std::vector<Task> tasks;
  bool operator==(const InputDocument&) const = default;
};

inline const std::set<std::string>& command_names() {
  static const std::set<std::string> names{"basis",   "frobenius", "wedge-top", "saturate",   "tangent",
                                           "tangent-system", "homij", "hypb",   "sumdim", "relations",
                                           "probe-sing",     "selftest"};
  return names;
}

// --- printing -------------------------------------------------------------------

inline std::string print_list(const std::vector<std::string>& items) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + items[i];
  return s + "]";
}

inline std::string print_value(const DeclValue& v) {
  struct Printer {
    std::string operator()(const ExtForm& f) const { return f.to_string(); }
    std::string operator()(const RationalFamily& r) const {
      return "rational(F=" + r.F.to_string() + ", G=" + r.G.to_string() + ")";
    }
    std::string operator()(const LogarithmicFamily& l) const {
      std::vector<std::string> fs, ls;
      for (const auto& f : l.factors) fs.push_back(f.to_string());
      for (const auto& r : l.residues) ls.push_back(r.get_str());
      return "logarithmic(f=" + print_list(fs) + ", lambda=" + print_list(ls) + ")";
    }
    std::string operator()(const NameList& names) const { return print_list(names); }
  };
  return std::visit(Printer{}, v);
}

inline std::string print_task(const Task& t) {
  std::string s = t.command;
  for (const auto& a : t.args) {
    s += ' ';
    if (const auto* w = std::get_if<std::string>(&a))
      s += *w;
    else
      s += print_list(std::get<NameList>(a));
  }
  for (const auto& [k, v] : t.options) s += " --" + k + (v.empty() ? "" : " " + v);
  return s;
}

/// Canonical text; parse(print(doc)) == doc.
inline std::string print_document(const InputDocument& doc) {
  std::ostringstream os;
  if (doc.n >= 0) os << "n = " << doc.n << '\n';
  for (const auto& d : doc.declarations) os << d.name << " = " << print_value(d.value) << '\n';
  for (const auto& t : doc.tasks) os << print_task(t) << '\n';
  return os.str();
}

// --- parsing --------------------------------------------------------------------

namespace detail {

enum class Tok { number, ident, op, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t col;  // 1-based
};

inline std::vector<Token> lex(const std::string& s, std::size_t line, std::size_t base_col) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::number, s.substr(start, i - start), base_col + start});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, s.substr(start, i - start), base_col + start});
    } else if (std::string("+-*/^()[],=").find(c) != std::string::npos) {
      out.push_back({Tok::op, std::string(1, c), base_col + start});
      ++i;
    } else {
      throw parse_error(line, base_col + start, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::end, "", base_col + s.size()});
  return out;
}

/// Index of x<i>/d<i> identifiers, or nullopt.
inline std::optional<int> indexed(const std::string& id, char prefix) {
  if (id.size() < 2 || id[0] != prefix) return std::nullopt;
  for (std::size_t i = 1; i < id.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return std::nullopt;
  if (id.size() > 3) return std::nullopt;
  return std::stoi(id.substr(1));
}

inline bool reserved(const std::string& id) {
  return indexed(id, 'x') || indexed(id, 'd') || id == "n" || id == "rational" || id == "logarithmic" ||
         command_names().count(id) > 0;
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, std::size_t line, int n, const std::map<std::string, ExtForm>& env,
             const std::string& source, std::size_t base_col)
      : toks_(std::move(toks)), line_(line), n_(n), env_(env), source_(source), base_col_(base_col) {}

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool accept(const std::string& op) {
    if (peek().kind == Tok::op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& op) {
    if (!accept(op)) fail(peek(), "expected '" + op + "'");
  }
  void expect_end() {
    if (peek().kind != Tok::end) fail(peek(), "unexpected '" + peek().text + "'");
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw parse_error(line_, t.col, msg); }

  std::string ident() {
    if (peek().kind != Tok::ident) fail(peek(), "expected a name");
    return next().text;
  }

  ExtForm expr() {
    bool negate = false;
    if (accept("-"))
      negate = true;
    else
      accept("+");
    std::size_t start = peek().col;
    ExtForm acc = term();
    if (negate) acc = -acc;
    std::string first_text = text_from(start);
    while (peek().kind == Tok::op && (peek().text == "+" || peek().text == "-")) {
      const bool minus = next().text == "-";
      start = peek().col;
      const detail::Token at = peek();
      ExtForm t = term();
      const std::string t_text = text_from(start);
      if (t.k() != acc.k() && !t.is_zero() && !acc.is_zero())
        fail(at, "term `" + t_text + "` has form degree " + std::to_string(t.k()) + ", expected " +
                     std::to_string(acc.k()));
      if (acc.weight() && t.weight() && *acc.weight() != *t.weight())
        fail(at, "inhomogeneous term `" + t_text + "` (weight " + std::to_string(*t.weight()) +
                     ") in a sum of weight " + std::to_string(*acc.weight()) + " started by `" + first_text + "`");
      if (t.k() != acc.k()) {
        // one side is zero: adopt the nonzero side's degree
        if (acc.is_zero()) acc = ExtForm(n_, t.k());
        else t = ExtForm(n_, acc.k());
      }
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  Rational rational_literal() {
    bool neg = accept("-");
    if (!neg) accept("+");
    if (peek().kind != Tok::number) fail(peek(), "expected a rational number");
    std::string s = next().text;
    if (accept("/")) {
      if (peek().kind != Tok::number) fail(peek(), "expected a denominator");
      s += "/" + next().text;
    }
    Rational q = parse_rational(s);
    return neg ? Rational(-q) : q;
  }

 private:
  std::string text_from(std::size_t start_col) const {
    const std::size_t end_col = peek().col;
    const std::size_t a = start_col - base_col_, b = end_col - base_col_;
    std::string s = source_.substr(a, b - a);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  }

  ExtForm term() {
    ExtForm acc = factor();
    while (accept("*")) acc = wedge(acc, factor());
    return acc;
  }

  ExtForm factor() {
    const detail::Token at = peek();
    ExtForm base = primary();
    if (accept("^")) {
      if (peek().kind != Tok::number) fail(peek(), "exponent must be a nonnegative integer");
      const int e = std::stoi(next().text);
      if (base.k() != 0) fail(at, "only polynomials can be raised to a power");
      base = ExtForm::function(n_, base.coefficient(IndexTuple()).pow(e));
    }
    return base;
  }

  ExtForm primary() {
    const Token t = peek();
    if (t.kind == Tok::number) {
      const Rational q = rational_literal();
      return ExtForm::function(n_, Polynomial::constant(n_ + 1, q));
    }
    if (accept("(")) {
      ExtForm e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::ident) {
      next();
      if (auto i = indexed(t.text, 'x')) {
        if (*i > n_) fail(t, "variable " + t.text + " exceeds n = " + std::to_string(n_));
        return ExtForm::function(n_, Polynomial::variable(n_ + 1, *i));
      }
      if (auto i = indexed(t.text, 'd')) {
        if (*i > n_) fail(t, "differential " + t.text + " exceeds n = " + std::to_string(n_));
        return ExtForm::differential(n_, *i);
      }
      auto it = env_.find(t.text);
      if (it == env_.end()) fail(t, "undeclared name '" + t.text + "'");
      return it->second;
    }
    fail(t, t.kind == Tok::end ? "unexpected end of expression" : "unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
  int n_;
  const std::map<std::string, ExtForm>& env_;
  const std::string& source_;
  std::size_t base_col_;
};

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

/// Splits a task line into words and bracketed lists.
inline Task parse_task(const std::string& text, std::size_t line) {
  Task t;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto word = [&] {
    const std::size_t s = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '[' &&
           text[i] != ']' && text[i] != ',')
      ++i;
    return text.substr(s, i - s);
  };
  skip();
  t.command = word();
  skip();
  while (i < text.size()) {
    const std::size_t col = i + 1;
    if (text[i] == '[') {
      ++i;
      NameList items;
      skip();
      while (i < text.size() && text[i] != ']') {
        std::string w = word();
        if (w.empty()) throw parse_error(line, i + 1, "malformed list");
        items.push_back(w);
        skip();
        if (i < text.size() && text[i] == ',') ++i;
        skip();
      }
      if (i >= text.size()) throw parse_error(line, col, "unterminated list");
      ++i;
      t.args.emplace_back(std::move(items));
    } else if (text.compare(i, 2, "--") == 0) {
      i += 2;
      std::string key = word();
      if (key.empty()) throw parse_error(line, col, "empty option name");
      skip();
      std::string value;
      if (i < text.size() && text.compare(i, 2, "--") != 0 && text[i] != '[') value = word();
      t.options.emplace_back(key, value);
    } else {
      std::string w = word();
      if (w.empty()) throw parse_error(line, col, std::string("unexpected '") + text[i] + "'");
      t.args.emplace_back(std::move(w));
    }
    skip();
  }
  return t;
}

}  // namespace detail

/// Parses a whole document. Errors carry line and column.
inline InputDocument parse_document(const std::string& text) {
  InputDocument doc;
  std::map<std::string, ExtForm> env;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t word_end = first;
    while (word_end < line.size() && !std::isspace(static_cast<unsigned char>(line[word_end])) &&
           line[word_end] != '=')
      ++word_end;
    const std::string head = line.substr(first, word_end - first);
    if (command_names().count(head)) {
      doc.tasks.push_back(detail::parse_task(line, line_no));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error(line_no, first + 1, "expected a declaration 'name = ...' or a command, got '" + head + "'");
    std::string name = line.substr(first, eq - first);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    const std::string rhs = line.substr(eq + 1);
    const std::size_t rhs_col = eq + 2;
    auto toks = detail::lex(rhs, line_no, rhs_col);
    if (name == "n") {
      if (toks.size() != 2 || toks[0].kind != detail::Tok::number)
        throw parse_error(line_no, rhs_col, "n must be a positive integer");
      if (doc.n >= 0) throw parse_error(line_no, first + 1, "n declared twice");
      doc.n = std::stoi(toks[0].text);
      if (doc.n < 1 || doc.n > 30) throw parse_error(line_no, rhs_col, "n must be between 1 and 30");
      continue;
    }
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
      throw parse_error(line_no, first + 1, "invalid name '" + name + "'");
    for (char c : name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw parse_error(line_no, first + 1, "invalid name '" + name + "'");
    if (detail::reserved(name)) throw parse_error(line_no, first + 1, "'" + name + "' is reserved");
    if (doc.n < 0) throw parse_error(line_no, first + 1, "declare 'n = ...' before any form");
    for (const auto& d : doc.declarations)
      if (d.name == name) throw parse_error(line_no, first + 1, "'" + name + "' declared twice");

    detail::ExprParser p(toks, line_no, doc.n, env, rhs, rhs_col);
    DeclValue value;
    const auto& t0 = p.peek();
    try {
      if (t0.kind == detail::Tok::ident && t0.text == "rational") {
        p.next();
        p.expect("(");
        if (p.ident() != "F") p.fail(p.peek(), "expected F=");
        p.expect("=");
        const detail::Token fat = p.peek();
        ExtForm F = p.expr();
        p.expect(",");
        if (p.ident() != "G") p.fail(p.peek(), "expected G=");
        p.expect("=");
        const detail::Token gat = p.peek();
        ExtForm G = p.expr();
        p.expect(")");
        p.expect_end();
        if (F.k() != 0 || F.is_zero()) p.fail(fat, "F must be a nonzero polynomial");
        if (G.k() != 0 || G.is_zero()) p.fail(gat, "G must be a nonzero polynomial");
        RationalFamily fam{doc.n, F.coefficient(IndexTuple()), G.coefficient(IndexTuple())};
        env[name] = rational_form(fam);
        value = fam;
      } else if (t0.kind == detail::Tok::ident && t0.text == "logarithmic") {
        p.next();
        p.expect("(");
        if (p.ident() != "f") p.fail(p.peek(), "expected f=");
        p.expect("=");
        p.expect("[");
        LogarithmicFamily fam;
        fam.n = doc.n;
        do {
          const detail::Token at = p.peek();
          ExtForm f = p.expr();
          if (f.k() != 0 || f.is_zero()) p.fail(at, "factors must be nonzero polynomials");
          fam.factors.push_back(f.coefficient(IndexTuple()));
        } while (p.accept(","));
        p.expect("]");
        p.expect(",");
        if (p.ident() != "lambda") p.fail(p.peek(), "expected lambda=");
        p.expect("=");
        p.expect("[");
        do fam.residues.push_back(p.rational_literal());
        while (p.accept(","));
        p.expect("]");
        p.expect(")");
        p.expect_end();
        if (fam.residues.size() != fam.factors.size())
          throw parse_error(line_no, rhs_col, "one residue per factor required");
        env[name] = logarithmic_form(fam);
        value = fam;
      } else if (t0.kind == detail::Tok::op && t0.text == "[") {
        p.next();
        NameList names;
        if (!p.accept("]")) {
          do {
            const detail::Token at = p.peek();
            std::string item = p.ident();
            bool known = env.count(item) > 0;
            for (const auto& d : doc.declarations)
              if (d.name == item && std::holds_alternative<NameList>(d.value)) known = true;
            if (!known) p.fail(at, "undeclared name '" + item + "'");
            names.push_back(item);
          } while (p.accept(","));
          p.expect("]");
        }
        p.expect_end();
        value = names;
      } else {
        ExtForm f = p.expr();
        p.expect_end();
        env[name] = f;
        value = f;
      }
    } catch (const parse_error&) {
      throw;
    } catch (const invalid_input& e) {
      throw parse_error(line_no, rhs_col, e.what());
    }
    doc.declarations.push_back({name, std::move(value)});
  }
  return doc;
}

}  // namespace pfaff::io
