#include "capcalc/printer.hpp"

namespace capcalc {

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

namespace {

// precedence: arrow 0 < prod 1 < box prefix 2 < atom 3
void type_into(const TypePtr& t, int min, std::string& out) {
  auto wrap = [&](int level, auto body) {
    if (level < min) out += '(';
    body();
    if (level < min) out += ')';
  };
  switch (t->kind) {
    case Type::Kind::Unit: out += "unit"; return;
    case Type::Kind::Str: out += "str"; return;
    case Type::Kind::Cap: out += "cap"; return;
    case Type::Kind::Arrow:
      wrap(0, [&] {
        type_into(t->left, 1, out);
        out += " -> ";
        type_into(t->right, 0, out);
      });
      return;
    case Type::Kind::Prod:
      wrap(1, [&] {
        type_into(t->left, 2, out);
        out += " * ";
        type_into(t->right, 1, out);
      });
      return;
    case Type::Kind::Box:
      wrap(2, [&] {
        out += "[]";
        type_into(t->left, 2, out);
      });
      return;
  }
}

// precedence: fun/let box 0 < application 1 < fst/snd/box 2 < .print 3 < atom 4
void term_into(const TermPtr& e, int min, std::string& out) {
  auto wrap = [&](int level, auto body) {
    if (level < min) out += '(';
    body();
    if (level < min) out += ')';
  };
  switch (e->kind) {
    case Term::Kind::Unit: out += "()"; return;
    case Term::Kind::Str: out += quote_string(e->name); return;
    case Term::Kind::Chan:
      out += "<chan " + e->name + ">";
      return;
    case Term::Kind::Var: out += e->name; return;
    case Term::Kind::Lam:
      wrap(0, [&] {
        out += "fun " + e->name + ": ";
        bool parens = e->annot->kind == Type::Kind::Arrow;
        if (parens) out += '(';
        type_into(e->annot, 0, out);
        if (parens) out += ')';
        out += " -> ";
        term_into(e->a, 0, out);
      });
      return;
    case Term::Kind::LetBox:
      wrap(0, [&] {
        out += "let box " + e->name + " = ";
        term_into(e->a, 0, out);
        out += " in ";
        term_into(e->b, 0, out);
      });
      return;
    case Term::Kind::App:
      wrap(1, [&] {
        term_into(e->a, 1, out);
        out += ' ';
        term_into(e->b, 2, out);
      });
      return;
    case Term::Kind::Fst:
      wrap(2, [&] {
        out += "fst ";
        term_into(e->a, 2, out);
      });
      return;
    case Term::Kind::Snd:
      wrap(2, [&] {
        out += "snd ";
        term_into(e->a, 2, out);
      });
      return;
    case Term::Kind::Box:
      wrap(2, [&] {
        out += "box ";
        term_into(e->a, 2, out);
      });
      return;
    case Term::Kind::Print:
      wrap(3, [&] {
        term_into(e->a, 3, out);
        out += ".print(";
        term_into(e->b, 0, out);
        out += ')';
      });
      return;
    case Term::Kind::Pair:
      out += '(';
      term_into(e->a, 0, out);
      out += ", ";
      term_into(e->b, 0, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print_type(const TypePtr& t) {
  std::string out;
  type_into(t, 0, out);
  return out;
}

std::string print_term(const TermPtr& e) {
  std::string out;
  term_into(e, 0, out);
  return out;
}

}  // namespace capcalc
