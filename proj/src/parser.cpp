#include "hopi/parser.hpp"

#include <cctype>

namespace hopi {
namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_proc_ident(const std::string& s) { return std::isupper(static_cast<unsigned char>(s[0])) != 0; }

class Parser {
 public:
  Parser(const std::string& text, const SortContext& ctx) : s_(text), ctx_(ctx) {}

  Term run() {
    Term t = term();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'", {"'|'", "end of input"});
    return t;
  }

 private:
  Term term() {
    std::size_t start = here();
    Term t = app();
    while (accept('|')) t = Term::par(t, app(), start);
    return t;
  }

  Term app() {
    std::size_t start = here();
    Term t = atom();
    while (true) {
      skip();
      if (peek() != '<') break;
      ++i_;
      skip();
      std::size_t save = i_;
      std::string id = ident_ahead();
      if (!id.empty() && !is_proc_ident(id)) {
        i_ += id.size();
        skip();
        if (peek() == '>') {
          ++i_;
          t = Term::name_app(t, resolve_name(id), start);
          continue;
        }
      }
      i_ = save;
      Term a = term();
      expect('>');
      t = Term::proc_app(t, a, start);
    }
    return t;
  }

  Term atom() {
    skip();
    std::size_t start = i_;
    char c = peek();
    if (c == '0') {
      ++i_;
      return Term::nil(start);
    }
    if (c == '(') {
      ++i_;
      Term t = term();
      expect(')');
      return t;
    }
    if (c == '<') {
      ++i_;
      std::string id = identifier();
      expect('>');
      if (is_proc_ident(id)) {
        Term body = atom();
        return Term::proc_abs(ProcVar{id, {}}, body, start);
      }
      bound_names_.push_back(id);
      Term body = atom();
      bound_names_.pop_back();
      return Term::name_abs(id, body, start);
    }
    if (!ident_start(c)) fail("expected a term", {"'0'", "variable", "name", "'('", "'<'"});
    std::string id = identifier();
    if (is_proc_ident(id)) return Term::var(ProcVar{id, {}}, start);
    Name chan = resolve_name(id);
    skip();
    if (peek() == '(') {
      ++i_;
      std::string x = identifier();
      if (!is_proc_ident(x)) fail("input binds a process variable", {"process variable"});
      expect(')');
      expect('.');
      Term body = app();
      return Term::input(chan, ProcVar{x, {}}, body, start);
    }
    if (peek() == '!') {
      ++i_;
      skip();
      if (peek() != '(') return Term::output(chan, Term::nil(), start);
      ++i_;
      Term payload = term();
      expect(')');
      return Term::output(chan, payload, start);
    }
    if (peek() == '.') {
      ++i_;
      Term body = app();
      return Term::input(chan, ProcVar{fresh_ident("X"), {}}, body, start);
    }
    return Term::input(chan, ProcVar{fresh_ident("X"), {}}, Term::nil(), start);
  }

  Name resolve_name(const std::string& id) {
    for (auto it = bound_names_.rbegin(); it != bound_names_.rend(); ++it)
      if (*it == id) return Name::variable(id);
    if (ctx_.names.count(id)) return Name::variable(id);
    return Name::constant(id);
  }

  std::string ident_ahead() const {
    std::size_t j = i_;
    if (j >= s_.size() || !ident_start(s_[j])) return {};
    while (j < s_.size() && ident_char(s_[j])) ++j;
    return s_.substr(i_, j - i_);
  }

  std::string identifier() {
    skip();
    std::string id = ident_ahead();
    if (id.empty()) fail("expected an identifier", {"identifier"});
    i_ += id.size();
    return id;
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }
  std::size_t here() {
    skip();
    return i_;
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  bool accept(char c) {
    skip();
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'", {std::string("'") + c + "'"});
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) {
    throw ParseError("parse error at " + describe_position(s_, i_) + ": " + msg, i_, std::move(expected));
  }

  const std::string& s_;
  const SortContext& ctx_;
  std::size_t i_ = 0;
  std::vector<std::string> bound_names_;
};

// ---- printing ------------------------------------------------------------

void print_term(const Term& t, std::string& out);
void print_app(const Term& t, std::string& out);
void print_atom(const Term& t, std::string& out);

void parens(const Term& t, std::string& out) {
  out += '(';
  print_term(t, out);
  out += ')';
}

void print_term(const Term& t, std::string& out) {
  if (t.kind() != Term::Kind::Par) return print_app(t, out);
  print_term(t.left(), out);
  out += " | ";
  if (t.right().kind() == Term::Kind::Par) parens(t.right(), out);
  else print_app(t.right(), out);
}

void print_app(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::ProcApp:
    case Term::Kind::NameApp: {
      const Term& f = t.fun();
      switch (f.kind()) {
        case Term::Kind::ProcApp:
        case Term::Kind::NameApp: print_app(f, out); break;
        case Term::Kind::Nil:
        case Term::Kind::Var:
        case Term::Kind::Output: print_atom(f, out); break;
        default: parens(f, out);
      }
      out += '<';
      if (t.kind() == Term::Kind::ProcApp) print_term(t.arg(), out);
      else out += t.name_arg().ident;
      out += '>';
      return;
    }
    case Term::Kind::Par: return parens(t, out);
    default: return print_atom(t, out);
  }
}

void print_atom(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Nil: out += '0'; return;
    case Term::Kind::Var: out += t.var().ident; return;
    case Term::Kind::Input:
      out += t.chan().ident;
      out += '(';
      out += t.bound_proc().ident;
      out += ").";
      print_app(t.body(), out);
      return;
    case Term::Kind::Output:
      out += t.chan().ident;
      out += "!(";
      print_term(t.payload(), out);
      out += ')';
      return;
    case Term::Kind::ProcAbs:
    case Term::Kind::NameAbs: {
      out += '<';
      out += t.kind() == Term::Kind::ProcAbs ? t.bound_proc().ident : t.bound_name();
      out += '>';
      const Term& b = t.body();
      if (b.kind() == Term::Kind::Par || b.kind() == Term::Kind::ProcApp || b.kind() == Term::Kind::NameApp)
        parens(b, out);
      else
        print_atom(b, out);
      return;
    }
    case Term::Kind::Par:
    case Term::Kind::ProcApp:
    case Term::Kind::NameApp: parens(t, out); return;
  }
}

}  // namespace

Term parse_unchecked(const std::string& text, const SortContext& ctx) { return Parser(text, ctx).run(); }

Term parse(const SourceTerm& src) {
  Term raw = parse_unchecked(src.text, src.declared_free);
  try {
    return elaborate(raw, src.declared_free).term;
  } catch (const SortError& e) {
    if (e.pos() == kNoPos) throw;
    throw SortError(std::string(e.what()) + " at " + describe_position(src.text, e.pos()), e.pos());
  }
}

std::string print(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

std::string describe_position(const std::string& text, std::size_t pos) {
  if (pos == kNoPos) return "?";
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace hopi
