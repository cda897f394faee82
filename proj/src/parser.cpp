#include "capcalc/parser.hpp"

#include <cctype>

namespace capcalc {

namespace {

enum class Tok {
  End,
  Ident,
  StrLit,
  LParen,
  RParen,
  Comma,
  Semi,
  Dot,
  Colon,
  Equals,
  Arrow,
  Star,
  BoxTy,  // []
  KwFun,
  KwLet,
  KwBox,
  KwIn,
  KwFst,
  KwSnd,
  KwUnit,
  KwStr,
  KwCap,
  KwPrint,
};

struct Token {
  Tok kind;
  std::string text;
  int pos;
};

struct Lexer {
  std::string_view src;
  size_t at = 0;
  std::vector<Token> toks;

  [[noreturn]] void fail(const std::string& msg, int pos) const {
    auto [line, col] = line_col(src, pos);
    throw parse_error(msg, line, col);
  }

  void run() {
    while (true) {
      skip_space();
      if (at >= src.size()) break;
      int pos = static_cast<int>(at);
      char c = src[at];
      if (c == '(') { push(Tok::LParen, pos); continue; }
      if (c == ')') { push(Tok::RParen, pos); continue; }
      if (c == ',') { push(Tok::Comma, pos); continue; }
      if (c == ';') { push(Tok::Semi, pos); continue; }
      if (c == '.') { push(Tok::Dot, pos); continue; }
      if (c == ':') { push(Tok::Colon, pos); continue; }
      if (c == '=') { push(Tok::Equals, pos); continue; }
      if (c == '*') { push(Tok::Star, pos); continue; }
      if (c == '-' && at + 1 < src.size() && src[at + 1] == '>') {
        at += 2;
        toks.push_back({Tok::Arrow, "->", pos});
        continue;
      }
      if (c == '[' && at + 1 < src.size() && src[at + 1] == ']') {
        at += 2;
        toks.push_back({Tok::BoxTy, "[]", pos});
        continue;
      }
      if (c == '"') { lex_string(pos); continue; }
      if (isalpha(static_cast<unsigned char>(c)) || c == '_') { lex_ident(pos); continue; }
      fail(std::string("unexpected character '") + c + "'", pos);
    }
    toks.push_back({Tok::End, "", static_cast<int>(src.size())});
  }

  void push(Tok k, int pos) {
    toks.push_back({k, std::string(1, src[at]), pos});
    ++at;
  }

  void skip_space() {
    while (at < src.size()) {
      char c = src[at];
      if (isspace(static_cast<unsigned char>(c))) {
        ++at;
      } else if (c == '-' && at + 1 < src.size() && src[at + 1] == '-') {
        while (at < src.size() && src[at] != '\n') ++at;
      } else {
        break;
      }
    }
  }

  void lex_string(int pos) {
    ++at;  // opening quote
    std::string out;
    while (true) {
      if (at >= src.size()) fail("unterminated string literal", pos);
      char c = src[at++];
      if (c == '"') break;
      if (c == '\n') fail("unterminated string literal", pos);
      if (c == '\\') {
        if (at >= src.size()) fail("unterminated escape", pos);
        char e = src[at++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail(std::string("unknown escape '\\") + e + "'", static_cast<int>(at) - 2);
        }
      } else {
        out += c;
      }
    }
    toks.push_back({Tok::StrLit, out, pos});
  }

  void lex_ident(int pos) {
    size_t start = at;
    while (at < src.size() &&
           (isalnum(static_cast<unsigned char>(src[at])) || src[at] == '_' || src[at] == '\''))
      ++at;
    std::string text(src.substr(start, at - start));
    Tok k = Tok::Ident;
    if (text == "fun") k = Tok::KwFun;
    else if (text == "let") k = Tok::KwLet;
    else if (text == "box") k = Tok::KwBox;
    else if (text == "in") k = Tok::KwIn;
    else if (text == "fst") k = Tok::KwFst;
    else if (text == "snd") k = Tok::KwSnd;
    else if (text == "unit") k = Tok::KwUnit;
    else if (text == "str") k = Tok::KwStr;
    else if (text == "cap") k = Tok::KwCap;
    else if (text == "print") k = Tok::KwPrint;
    toks.push_back({k, text, pos});
  }
};

struct Parser {
  std::string_view src;
  std::vector<Token> toks;
  size_t at = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t i = at + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  Token next() { return toks[std::min(at++, toks.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, int pos) const {
    auto [line, col] = line_col(src, pos);
    throw parse_error(msg, line, col);
  }
  [[noreturn]] void fail_here(const std::string& msg) const { fail(msg, peek().pos); }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail_here(std::string("expected ") + what);
    return next();
  }

  std::string expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail_here(std::string("expected ") + what);
    return next().text;
  }

  // --- types ---

  TypePtr parse_type() {
    TypePtr l = parse_type_prod();
    if (peek().kind == Tok::Arrow) {
      next();
      return ty::arrow(l, parse_type());
    }
    return l;
  }

  TypePtr parse_type_prod() {
    TypePtr l = parse_type_prefix();
    if (peek().kind == Tok::Star) {
      next();
      return ty::prod(l, parse_type_prod());
    }
    return l;
  }

  TypePtr parse_type_prefix() {
    if (peek().kind == Tok::BoxTy) {
      next();
      return ty::boxed(parse_type_prefix());
    }
    return parse_type_atom();
  }

  TypePtr parse_type_atom() {
    switch (peek().kind) {
      case Tok::KwUnit: next(); return ty::unit();
      case Tok::KwStr: next(); return ty::str();
      case Tok::KwCap: next(); return ty::cap();
      case Tok::LParen: {
        next();
        TypePtr t = parse_type();
        expect(Tok::RParen, "')'");
        return t;
      }
      default:
        fail_here("expected a type");
    }
  }

  static bool starts_type(Tok k) {
    return k == Tok::KwUnit || k == Tok::KwStr || k == Tok::KwCap || k == Tok::BoxTy;
  }

  // Parses a lambda annotation together with the arrow separating it from
  // the body. "fun f: unit -> unit -> e" reads the longest arrow type that
  // still leaves an arrow and a body; a '(' after '->' is resolved by
  // backtracking since it may open either a type or the body.
  TypePtr parse_annot_then_arrow() {
    TypePtr left = parse_type_prod();
    expect(Tok::Arrow, "'->'");
    if (starts_type(peek().kind)) return ty::arrow(left, parse_annot_then_arrow());
    if (peek().kind == Tok::LParen) {
      size_t save = at;
      try {
        return ty::arrow(left, parse_annot_then_arrow());
      } catch (const parse_error&) {
        at = save;
      }
    }
    return left;
  }

  // --- terms ---

  // A ';' ends the enclosing declaration (rather than sequencing) when what
  // follows looks like the next declaration or the end of file.
  bool semi_ends_decl() const {
    const Token& t = peek(1);
    if (t.kind == Tok::End || t.kind == Tok::KwCap) return true;
    if (t.kind == Tok::KwLet && peek(2).kind != Tok::KwBox) return true;
    if (t.kind == Tok::Ident && t.text == "main" && peek(2).kind == Tok::Equals) return true;
    return false;
  }

  TermPtr parse_term() {
    int pos = peek().pos;
    if (peek().kind == Tok::KwFun) {
      next();
      std::string param = expect_ident("parameter name");
      expect(Tok::Colon, "':'");
      TypePtr annot = parse_annot_then_arrow();
      return tm::lam(param, annot, parse_term(), pos);
    }
    if (peek().kind == Tok::KwLet) {
      next();
      expect(Tok::KwBox, "'box'");
      std::string binder = expect_ident("binder name");
      expect(Tok::Equals, "'='");
      TermPtr scrut = parse_term();
      expect(Tok::KwIn, "'in'");
      return tm::let_box(binder, scrut, parse_term(), pos);
    }
    return parse_seq();
  }

  TermPtr parse_seq() {
    TermPtr e = parse_app();
    if (peek().kind == Tok::Semi && !semi_ends_decl()) {
      int pos = next().pos;
      return tm::seq(e, parse_term(), pos);
    }
    return e;
  }

  static bool starts_unary(Tok k) {
    return k == Tok::Ident || k == Tok::StrLit || k == Tok::LParen || k == Tok::KwFst ||
           k == Tok::KwSnd || k == Tok::KwBox;
  }

  // A bare `main` begins the trailing main declaration (rather than an
  // application argument or unary operand) when an '=' follows it.
  bool main_decl_follows() const {
    return peek().kind == Tok::Ident && peek().text == "main" && peek(1).kind == Tok::Equals;
  }

  TermPtr parse_app() {
    TermPtr e = parse_unary();
    while (starts_unary(peek().kind) && !main_decl_follows()) {
      int pos = peek().pos;
      e = tm::app(e, parse_unary(), pos);
    }
    return e;
  }

  TermPtr parse_unary() {
    int pos = peek().pos;
    switch (peek().kind) {
      case Tok::KwFst: next(); return tm::fst(parse_unary(), pos);
      case Tok::KwSnd: next(); return tm::snd(parse_unary(), pos);
      case Tok::KwBox: next(); return tm::box(parse_unary(), pos);
      default: return parse_postfix();
    }
  }

  TermPtr parse_postfix() {
    TermPtr e = parse_atom();
    while (peek().kind == Tok::Dot) {
      int pos = next().pos;
      expect(Tok::KwPrint, "'print'");
      expect(Tok::LParen, "'('");
      TermPtr arg = parse_term();
      expect(Tok::RParen, "')'");
      e = tm::print(e, arg, pos);
    }
    return e;
  }

  TermPtr parse_atom() {
    int pos = peek().pos;
    switch (peek().kind) {
      case Tok::StrLit: return tm::str(next().text, pos);
      case Tok::Ident: return tm::var(next().text, pos);
      case Tok::LParen: {
        next();
        if (peek().kind == Tok::RParen) {
          next();
          return tm::unit(pos);
        }
        TermPtr e = parse_term();
        if (peek().kind == Tok::Comma) {
          next();
          TermPtr r = parse_term();
          expect(Tok::RParen, "')'");
          return tm::pair(e, r, pos);
        }
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail_here("expected a term");
    }
  }

  // --- declarations ---

  SourceFile parse_file() {
    SourceFile out;
    bool saw_main = false;
    while (peek().kind != Tok::End) {
      int pos = peek().pos;
      if (saw_main) fail("main must be the last declaration", pos);
      if (peek().kind == Tok::KwCap) {
        next();
        std::string name = expect_ident("capability name");
        for (const auto& d : out.decls)
          if (d.kind != Decl::Kind::Main && d.name == name)
            fail("duplicate declaration of '" + name + "'", pos);
        out.decls.push_back({Decl::Kind::Cap, name, nullptr, nullptr, pos});
      } else if (peek().kind == Tok::KwLet) {
        next();
        std::string name = expect_ident("declaration name");
        TypePtr annot;
        if (peek().kind == Tok::Colon) {
          next();
          annot = parse_type();
        }
        expect(Tok::Equals, "'='");
        TermPtr body = parse_term();
        for (const auto& d : out.decls)
          if (d.kind != Decl::Kind::Main && d.name == name)
            fail("duplicate declaration of '" + name + "'", pos);
        out.decls.push_back({Decl::Kind::Let, name, annot, body, pos});
      } else if (peek().kind == Tok::Ident && peek().text == "main" &&
                 peek(1).kind == Tok::Equals) {
        next();
        next();
        TermPtr body = parse_term();
        out.decls.push_back({Decl::Kind::Main, "main", nullptr, body, pos});
        saw_main = true;
      } else {
        fail_here("expected a declaration (cap, let, or main)");
      }
      if (peek().kind == Tok::Semi) next();
    }
    return out;
  }
};

Parser make_parser(std::string_view text) {
  Lexer lex{text, 0, {}};
  lex.run();
  return Parser{text, std::move(lex.toks)};
}

}  // namespace

const Decl* SourceFile::main_decl() const {
  for (const auto& d : decls)
    if (d.kind == Decl::Kind::Main) return &d;
  return nullptr;
}

std::vector<std::string> SourceFile::cap_names() const {
  std::vector<std::string> out;
  for (const auto& d : decls)
    if (d.kind == Decl::Kind::Cap) out.push_back(d.name);
  return out;
}

SourceFile parse_source(std::string_view text) {
  Parser p = make_parser(text);
  return p.parse_file();
}

TermPtr parse_term_text(std::string_view text) {
  Parser p = make_parser(text);
  TermPtr e = p.parse_term();
  if (p.peek().kind != Tok::End) p.fail_here("trailing input after term");
  return e;
}

TypePtr parse_type_text(std::string_view text) {
  Parser p = make_parser(text);
  TypePtr t = p.parse_type();
  if (p.peek().kind != Tok::End) p.fail_here("trailing input after type");
  return t;
}

std::pair<int, int> line_col(std::string_view text, int pos) {
  int line = 1, col = 1;
  for (int i = 0; i < pos && i < static_cast<int>(text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace capcalc
